#pragma once

#include "circreg/asymptotic.hpp"
#include "circreg/study.hpp"

#include <Eigen/Dense>

#include <iosfwd>
#include <span>
#include <vector>

namespace circreg {

/// Exponent r of the oracle bandwidth schedule h = c * n^-r: 1/(2q + d) where
/// q is the interior bias order (2 for degrees 0 and 1, 4 for degrees 2 and 3).
double bandwidth_rate_exponent(int dimension, int degree);

/// Theoretical log-log slope of the mean squared error against n, -2q/(2q + d).
double theoretical_log_slope(int dimension, int degree);

struct RateProbeConfig {
    /// Model, kappa, kernel, seed and threads are taken from here; n,
    /// replicates, degree and bandwidth are overridden per probe point.
    StudyConfig base;
    std::vector<std::size_t> sample_sizes;
    int degree = 1;
    std::size_t replicates = 50;
    /// h(n) = bandwidth_constant * n^-r, applied as the scalar matrix h I.
    double bandwidth_constant = 0.5;
    /// Evaluation points stay this many bandwidth radii (of the largest h) from the boundary.
    double interior_factor = 1.5;
    int eval_per_axis = 5;
};

struct RateProbeResult {
    std::vector<std::size_t> sample_sizes;
    std::vector<double> bandwidths;
    std::vector<double> empirical_mse;       ///< mean CASE over interior evaluation points
    std::vector<double> empirical_sq_error;  ///< mean squared wrapped angular error, same points
    std::vector<double> predicted_amse;      ///< averaged amse_local; NaN when no analytic model
    double fitted_log_slope = 0.0;
    double theoretical_slope = 0.0;
    Eigen::MatrixXd eval_points;
};

/// Runs a fixed-bandwidth study per sample size and fits log(mse) ~ log(n).
/// Throws ProbeInvalid when an error curve is identically zero.
RateProbeResult rate_probe(const RateProbeConfig& config);

/// CSV with columns n,bandwidth,empirical_mse,empirical_sq_error,predicted_amse.
void write_rate_probe_csv(const RateProbeResult& result, std::ostream& out);

/// Least-squares slope of log(y) against log(x).
double log_log_slope(std::span<const double> x, std::span<const double> y);

struct PluginComparison {
    Eigen::VectorXd x;
    BandwidthMatrix bandwidth;
    double empirical_sq_error;
    double predicted_amse;
};

/// At each point, fits with the local AMSE-optimal bandwidth built from the
/// analytic model and compares the Monte-Carlo squared angular error with
/// amse_local's prediction. Points with indefinite curvature throw.
std::vector<PluginComparison> local_plugin_comparison(ModelKind model, double kappa, std::size_t n,
                                                      int degree, const Eigen::MatrixXd& points,
                                                      std::size_t replicates, std::uint64_t seed);

} // namespace circreg
