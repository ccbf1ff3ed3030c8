#pragma once

#include "circreg/circular_fit.hpp"

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

namespace circreg {

enum class AngleUnit { radians, degrees };

/// A comma-separated text file with a header row.
struct DatasetFile {
    std::filesystem::path path;
    AngleUnit angle_unit = AngleUnit::radians;
    std::string response_column;
    std::vector<std::string> covariate_columns;
};

/// Reads the response (converted to wrapped radians) and covariates, keeping row order.
/// Errors: SchemaError (missing column or header), ParseError (bad cell; row is the
/// 1-based line number), InsufficientData (fewer than two rows).
ObservationSet parse_dataset(const DatasetFile& file);
ObservationSet parse_dataset(std::istream& in, AngleUnit unit, const std::string& response_column,
                             const std::vector<std::string>& covariate_columns);

/// Writes covariates then the response, one row per observation, with
/// shortest round-trip number formatting.
void write_dataset(const ObservationSet& data, const std::vector<std::string>& covariate_columns,
                   const std::string& response_column, AngleUnit unit, std::ostream& out);

/// Splits a comma-separated list, trimming blanks around each item.
std::vector<std::string> split_list(const std::string& text);

/// Writes through a temporary file in the same directory, then renames.
void write_file_atomic(const std::filesystem::path& path, const std::string& contents);

} // namespace circreg
