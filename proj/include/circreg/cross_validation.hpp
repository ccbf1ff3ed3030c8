#pragma once

#include "circreg/bandwidth_matrix.hpp"
#include "circreg/circular_fit.hpp"
#include "circreg/kernel.hpp"
#include "circreg/local_poly.hpp"
#include "circreg/nelder_mead.hpp"

#include <vector>

namespace circreg {

/// Circular leave-one-out cross-validation settings.
///
/// Scalar and diagonal modes search a geometric grid of `grid_per_axis`
/// values per axis spanning [grid_low, grid_high] * sd_axis * n^(-1/(d+4)).
/// Full mode runs Nelder-Mead over the log-Cholesky factor of H, started at
/// 1.5 * diag(sd_1, ..., sd_d).
struct CvConfig {
    MatrixKind matrix_kind = MatrixKind::diagonal;
    int grid_per_axis = 12;
    double grid_low = 0.25;
    double grid_high = 4.0;
    double simplex_tolerance = 1e-6;
    int max_iterations = 400;
    double undefined_penalty = 2.0;
    double stability_threshold = kDefaultStabilityThreshold;

    void validate() const;
};

struct CvEvaluation {
    double score = 0.0;
    std::size_t undefined = 0; ///< leave-one-out predictions charged the penalty
};

/// Sum over i of 1 - cos(Theta_i - leave-one-out prediction at X_i); undefined
/// predictions are charged `undefined_penalty`.
CvEvaluation cv_evaluate(const ObservationSet& data, const LocalFitSpec& spec,
                         double undefined_penalty = 2.0);

inline double cv_score(const ObservationSet& data, const LocalFitSpec& spec,
                       double undefined_penalty = 2.0) {
    return cv_evaluate(data, spec, undefined_penalty).score;
}

struct CvCandidate {
    BandwidthMatrix bandwidth;
    CvEvaluation evaluation;
};

struct CvSelection {
    BandwidthMatrix bandwidth;
    CvEvaluation evaluation;
    std::vector<CvCandidate> candidates; ///< grid modes: every candidate in search order
    int iterations = 0;                  ///< full mode only
    bool converged = false;
};

/// Sample standard deviation (n - 1 denominator) of each covariate column.
Eigen::VectorXd covariate_std_devs(const Eigen::MatrixXd& covariates);

/// Geometric per-axis grid used by the scalar/diagonal searches (axis-major, ascending).
std::vector<Eigen::VectorXd> cv_axis_grids(const ObservationSet& data, const CvConfig& config);

/// 1.5 * diag(sd_1, ..., sd_d), the full-mode starting matrix.
BandwidthMatrix initial_full_bandwidth(const ObservationSet& data);

/// Argmin of the CV score over an explicit candidate list; ties keep the
/// earliest candidate. Throws NoValidBandwidth if every candidate is fully penalized.
CvSelection select_from_candidates(const ObservationSet& data, int degree, const KernelSpec& kernel,
                                   const std::vector<BandwidthMatrix>& candidates,
                                   const CvConfig& config);

CvSelection select_bandwidth_cv_detailed(const ObservationSet& data, int degree,
                                         const KernelSpec& kernel, const CvConfig& config);

inline BandwidthMatrix select_bandwidth_cv(const ObservationSet& data, int degree,
                                           const KernelSpec& kernel, const CvConfig& config) {
    return select_bandwidth_cv_detailed(data, degree, kernel, config).bandwidth;
}

/// Log-Cholesky parameterization: theta packs the lower triangle of L row by
/// row with log-transformed diagonal, and H = L L^T.
Eigen::MatrixXd bandwidth_from_log_cholesky(const Eigen::VectorXd& theta, int dimension);
Eigen::VectorXd log_cholesky_from_bandwidth(const BandwidthMatrix& bandwidth);

} // namespace circreg
