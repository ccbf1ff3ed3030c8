#pragma once

#include "circreg/circular_fit.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <vector>

namespace circreg {

/// Regular prediction grid over the covariate box, filtered to points that
/// are (a) within `max_cell_distance` grid cells of some observation and
/// (b) backed by well-conditioned smoothing weights.
struct GridFilterConfig {
    int resolution = 100;
    double max_cell_distance = 15.0;
    bool require_stability = true;
    /// Grid box; defaults to the bounding box of the observed covariates.
    std::optional<Eigen::VectorXd> lower;
    std::optional<Eigen::VectorXd> upper;

    void validate() const;
};

struct PredictionGrid {
    Eigen::MatrixXd points;         ///< every grid point, resolution^d rows, first axis slowest
    Eigen::VectorXd cell;           ///< grid spacing per axis
    std::vector<bool> near_data;    ///< rule (a)
    std::vector<bool> stable;       ///< rule (b), independent of rule (a)
    std::vector<bool> kept;
    std::vector<CircularPrediction> predictions; ///< one per grid point

    std::size_t kept_count() const;
    Eigen::MatrixXd kept_points() const;
};

/// Distance from g to the nearest observation, measured in grid cells per axis:
/// min_o sqrt(sum_k ((g_k - o_k) / cell_k)^2).
double cell_distance_to_data(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& point,
                             const Eigen::VectorXd& cell);

PredictionGrid build_prediction_grid(const ObservationSet& data, const GridFilterConfig& config,
                                     const CircularFit& fit);

/// Adds independent uniform noise in [-scale * cell_k, scale * cell_k] to the
/// covariates of every row whose covariate vector occurs more than once.
ObservationSet jitter_duplicates(const ObservationSet& data, double scale, const Eigen::VectorXd& cell,
                                 std::uint64_t seed);

/// Grid spacing of a resolution-point grid over the bounding box of the covariates.
Eigen::VectorXd bounding_box_cell(const Eigen::MatrixXd& covariates, int resolution);

} // namespace circreg
