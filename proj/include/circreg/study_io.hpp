#pragma once

#include "circreg/study.hpp"

#include <iosfwd>
#include <string>

namespace circreg {

/// Parses the flat `key = value` study configuration. Blank lines and lines
/// starting with '#' are ignored. Recognized keys:
///
///   model                  M1 | M2
///   n, kappa, replicates, degree, seed
///   kernel                 epanechnikov | gaussian
///   bandwidth.mode         cv-diag | cv-scalar | cv-full | fixed
///   bandwidth.grid_per_axis, bandwidth.max_iterations, bandwidth.tolerance
///   bandwidth.grid_low, bandwidth.grid_high   grid span in units of sd * n^(-1/(d+4))
///   bandwidth.fixed        comma list: 1 value (scalar), d values (diagonal) or d*d (full)
///   eval_grid              points per axis of the pointwise-metric grid, 0 = off
///   threads
StudyConfig parse_study_config(std::istream& in);

/// Bandwidth spec text: "fixed:<entries>", "cv-diag", "cv-scalar" or "cv-full".
BandwidthMode parse_bandwidth_mode(const std::string& text, int dimension);

/// Parses comma-separated entries into a scalar, diagonal or full matrix.
BandwidthMatrix parse_bandwidth_entries(const std::string& entries, int dimension);

std::string bandwidth_mode_name(const BandwidthMode& mode);

/// One row per replicate: replicate,ok,case,undefined,h_1_1,...,h_d_d.
void write_study_csv(const StudyReport& report, int dimension, std::ostream& out);

/// Summary of the configuration (minus thread count) and results.
std::string study_summary_json(const StudyConfig& config, const StudyReport& report);

/// x_1..x_d,truth,cb,cvar,cmse,used,excluded for each evaluation point.
void write_pointwise_csv(const StudyReport& report, std::ostream& out);

} // namespace circreg
