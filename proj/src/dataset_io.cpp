#include "circreg/dataset_io.hpp"

#include "circreg/errors.hpp"
#include "circreg/text_format.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace circreg {

namespace {

std::string trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = line.find(',', start);
        out.push_back(trim(std::string_view(line).substr(start, comma - start)));
        if (comma == std::string::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double parse_number(const std::string& cell, std::size_t line, const std::string& column) {
    double v = 0.0;
    const char* end = cell.data() + cell.size();
    const auto [ptr, ec] = std::from_chars(cell.data(), end, v);
    if (cell.empty() || ec != std::errc() || ptr != end || !std::isfinite(v)) {
        throw ParseError(line, "cannot parse '" + cell + "' in column '" + column + "' as a number");
    }
    return v;
}

} // namespace

std::vector<std::string> split_list(const std::string& text) {
    std::vector<std::string> out;
    for (std::string& item : split_fields(text)) {
        if (!item.empty()) {
            out.push_back(std::move(item));
        }
    }
    return out;
}

ObservationSet parse_dataset(std::istream& in, AngleUnit unit, const std::string& response_column,
                             const std::vector<std::string>& covariate_columns) {
    if (covariate_columns.empty()) {
        throw SchemaError("at least one covariate column is required");
    }
    std::string line;
    std::size_t line_no = 0;
    std::vector<std::string> header;
    while (std::getline(in, line)) {
        ++line_no;
        if (!trim(line).empty()) {
            header = split_fields(line);
            break;
        }
    }
    if (header.empty()) {
        throw SchemaError("dataset has no header row");
    }
    auto locate = [&](const std::string& name) {
        const auto it = std::find(header.begin(), header.end(), name);
        if (it == header.end()) {
            throw SchemaError("column '" + name + "' not found in header");
        }
        return static_cast<std::size_t>(it - header.begin());
    };
    const std::size_t response_index = locate(response_column);
    std::vector<std::size_t> covariate_index;
    for (const auto& c : covariate_columns) {
        covariate_index.push_back(locate(c));
    }

    std::vector<double> values;
    std::vector<Angle> responses;
    while (std::getline(in, line)) {
        ++line_no;
        if (trim(line).empty()) {
            continue;
        }
        const auto fields = split_fields(line);
        if (fields.size() != header.size()) {
            throw ParseError(line_no, "expected " + std::to_string(header.size()) + " fields, found " +
                                          std::to_string(fields.size()));
        }
        for (std::size_t k = 0; k < covariate_index.size(); ++k) {
            values.push_back(parse_number(fields[covariate_index[k]], line_no, covariate_columns[k]));
        }
        double angle = parse_number(fields[response_index], line_no, response_column);
        if (unit == AngleUnit::degrees) {
            angle *= std::numbers::pi / 180.0;
        }
        responses.emplace_back(angle);
    }
    if (responses.size() < 2) {
        throw InsufficientData("dataset needs at least two rows, found " + std::to_string(responses.size()));
    }
    const auto n = static_cast<Eigen::Index>(responses.size());
    const auto d = static_cast<Eigen::Index>(covariate_columns.size());
    Eigen::MatrixXd x = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
        values.data(), n, d);
    return ObservationSet(std::move(x), AngleSeries(std::move(responses)));
}

ObservationSet parse_dataset(const DatasetFile& file) {
    std::ifstream in(file.path);
    if (!in) {
        throw SchemaError("cannot open dataset '" + file.path.string() + "'");
    }
    return parse_dataset(in, file.angle_unit, file.response_column, file.covariate_columns);
}

void write_dataset(const ObservationSet& data, const std::vector<std::string>& covariate_columns,
                   const std::string& response_column, AngleUnit unit, std::ostream& out) {
    if (covariate_columns.size() != static_cast<std::size_t>(data.dimension())) {
        throw InvalidInput("covariate names do not match the data dimension");
    }
    for (const auto& c : covariate_columns) {
        out << c << ',';
    }
    out << response_column << '\n';
    for (std::size_t i = 0; i < data.size(); ++i) {
        for (Eigen::Index k = 0; k < data.covariates().cols(); ++k) {
            out << format_double(data.covariates()(static_cast<Eigen::Index>(i), k)) << ',';
        }
        double angle = data.responses()[i].value();
        if (unit == AngleUnit::degrees) {
            angle *= 180.0 / std::numbers::pi;
        }
        out << format_double(angle) << '\n';
    }
}

void write_file_atomic(const std::filesystem::path& path, const std::string& contents) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) {
            throw Error("cannot write '" + tmp.string() + "'");
        }
        out << contents;
        if (!out.flush()) {
            throw Error("failed writing '" + tmp.string() + "'");
        }
    }
    std::filesystem::rename(tmp, path);
}

} // namespace circreg
