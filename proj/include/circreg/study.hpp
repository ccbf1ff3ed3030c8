#pragma once

#include "circreg/bandwidth_matrix.hpp"
#include "circreg/circular_fit.hpp"
#include "circreg/cross_validation.hpp"
#include "circreg/kernel.hpp"
#include "circreg/metrics.hpp"
#include "circreg/models.hpp"
#include "circreg/random.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace circreg {

/// Either cross-validated selection or a fixed matrix used for every replicate.
using BandwidthMode = std::variant<CvConfig, BandwidthMatrix>;

/// Monte-Carlo study over a regular design grid in the unit hypercube.
struct StudyConfig {
    StudyModel model = StudyModel::builtin(ModelKind::m1);
    std::size_t n = 225;
    double kappa = 5.0;
    std::size_t replicates = 100;
    int degree = 1;
    KernelFamily kernel = KernelFamily::epanechnikov_spherical;
    BandwidthMode bandwidth = CvConfig{};
    std::uint64_t seed = 1;
    /// Points per axis of the pointwise-metric grid on [0,1]^d; 0 disables it.
    int eval_grid = 20;
    /// Explicit evaluation points (rows); overrides eval_grid when set.
    std::optional<Eigen::MatrixXd> eval_points;
    unsigned threads = 1;

    int dimension() const noexcept { return model.dimension; }
    void validate() const;
};

/// Points per axis for a regular grid of n points in d dimensions; throws
/// InvalidInput when n is not a perfect d-th power of an integer >= 2.
int grid_points_per_axis(std::size_t n, int dimension);

/// k^d equispaced points on [0,1]^d including both endpoints, first axis slowest.
Eigen::MatrixXd regular_grid(int points_per_axis, int dimension);

/// Covariates on the regular grid, responses wrap(m(X_i) + eps_i) with eps_i ~ vM(0, kappa).
ObservationSet generate_sample(const StudyConfig& config, RandomStream& rng);

struct ReplicateResult {
    bool ok = false;
    std::string failure;
    double case_value = 0.0;
    std::size_t undefined = 0;
    Eigen::MatrixXd bandwidth;
    double eval_case = 0.0;      ///< CASE over the evaluation points
    double eval_sq_error = 0.0;  ///< mean squared wrapped angular error over the evaluation points
    std::vector<MaybeAngle> eval_estimates;
};

struct PointwiseCell {
    Eigen::VectorXd x;
    Angle truth;
    PointwiseMetrics metrics;
};

struct StudyReport {
    double mean_case = 0.0;
    std::vector<double> per_replicate_case; ///< successful replicates, in replicate order
    std::vector<ReplicateResult> replicates;
    std::size_t failed = 0;
    double mean_eval_case = 0.0;
    double mean_eval_sq_error = 0.0;
    std::optional<std::vector<PointwiseCell>> pointwise;
};

/// Runs every replicate (in parallel when threads > 1) and aggregates.
/// Replicate r uses RandomStream::substream(seed, r), so the report does not
/// depend on the thread count. Throws Error when every replicate fails.
StudyReport run_study(const StudyConfig& config);

/// The evaluation points a config resolves to (possibly empty).
Eigen::MatrixXd evaluation_points(const StudyConfig& config);

} // namespace circreg
