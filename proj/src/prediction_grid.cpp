#include "circreg/prediction_grid.hpp"

#include "circreg/errors.hpp"
#include "circreg/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace circreg {

void GridFilterConfig::validate() const {
    if (resolution < 2) {
        throw InvalidInput("grid resolution must be at least 2");
    }
    if (!(max_cell_distance > 0.0)) {
        throw InvalidInput("max cell distance must be positive");
    }
    if (lower.has_value() != upper.has_value()) {
        throw InvalidInput("grid bounds need both lower and upper corners");
    }
}

std::size_t PredictionGrid::kept_count() const {
    return static_cast<std::size_t>(std::count(kept.begin(), kept.end(), true));
}

Eigen::MatrixXd PredictionGrid::kept_points() const {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(kept_count()), points.cols());
    Eigen::Index r = 0;
    for (std::size_t i = 0; i < kept.size(); ++i) {
        if (kept[i]) {
            out.row(r++) = points.row(static_cast<Eigen::Index>(i));
        }
    }
    return out;
}

double cell_distance_to_data(const Eigen::MatrixXd& covariates, const Eigen::VectorXd& point,
                             const Eigen::VectorXd& cell) {
    double best = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < covariates.rows(); ++i) {
        const double d2 = ((covariates.row(i).transpose() - point).array() / cell.array()).square().sum();
        best = std::min(best, d2);
    }
    return std::sqrt(best);
}

Eigen::VectorXd bounding_box_cell(const Eigen::MatrixXd& covariates, int resolution) {
    const Eigen::VectorXd span = covariates.colwise().maxCoeff() - covariates.colwise().minCoeff();
    Eigen::VectorXd cell = span / static_cast<double>(resolution - 1);
    for (Eigen::Index k = 0; k < cell.size(); ++k) {
        if (!(cell(k) > 0.0)) {
            cell(k) = 1.0;
        }
    }
    return cell;
}

PredictionGrid build_prediction_grid(const ObservationSet& data, const GridFilterConfig& config,
                                     const CircularFit& fit) {
    config.validate();
    const int d = data.dimension();
    const Eigen::VectorXd lower = config.lower ? *config.lower : Eigen::VectorXd(data.covariates().colwise().minCoeff().transpose());
    const Eigen::VectorXd upper = config.upper ? *config.upper : Eigen::VectorXd(data.covariates().colwise().maxCoeff().transpose());
    if (lower.size() != d || upper.size() != d) {
        throw InvalidInput("grid bounds have the wrong dimension");
    }

    PredictionGrid grid;
    const int res = config.resolution;
    Eigen::Index total = 1;
    for (int a = 0; a < d; ++a) {
        total *= res;
    }
    grid.cell = (upper - lower) / static_cast<double>(res - 1);
    // A degenerate axis collapses onto one coordinate; measure it in unit cells.
    Eigen::VectorXd measure = grid.cell;
    for (Eigen::Index k = 0; k < d; ++k) {
        if (!(measure(k) > 0.0)) {
            measure(k) = 1.0;
        }
    }
    grid.points.resize(total, d);
    for (Eigen::Index r = 0; r < total; ++r) {
        Eigen::Index rest = r;
        for (int a = d - 1; a >= 0; --a) {
            grid.points(r, a) = lower(a) + static_cast<double>(rest % res) * grid.cell(a);
            rest /= res;
        }
    }

    grid.predictions = fit.predict_surface(grid.points);
    const auto m = static_cast<std::size_t>(total);
    grid.near_data.resize(m);
    grid.stable.resize(m);
    grid.kept.resize(m);
    for (std::size_t i = 0; i < m; ++i) {
        const Eigen::VectorXd g = grid.points.row(static_cast<Eigen::Index>(i)).transpose();
        grid.near_data[i] = cell_distance_to_data(data.covariates(), g, measure) <= config.max_cell_distance;
        grid.stable[i] = grid.predictions[i].smoother_stable;
        grid.kept[i] = grid.near_data[i] && (!config.require_stability || grid.stable[i]);
    }
    return grid;
}

ObservationSet jitter_duplicates(const ObservationSet& data, double scale, const Eigen::VectorXd& cell,
                                 std::uint64_t seed) {
    if (!(scale >= 0.0)) {
        throw InvalidInput("jitter scale must be nonnegative");
    }
    const Eigen::MatrixXd& x = data.covariates();
    if (cell.size() != x.cols()) {
        throw InvalidInput("jitter cell sizes have the wrong dimension");
    }
    std::map<std::vector<double>, int> counts;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Eigen::RowVectorXd row = x.row(i);
        ++counts[std::vector<double>(row.data(), row.data() + row.size())];
    }
    RandomStream rng(splitmix64(seed));
    Eigen::MatrixXd out = x;
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        const Eigen::RowVectorXd row = x.row(i);
        if (counts[std::vector<double>(row.data(), row.data() + row.size())] < 2) {
            continue;
        }
        for (Eigen::Index k = 0; k < x.cols(); ++k) {
            out(i, k) += scale * cell(k) * (2.0 * rng.uniform() - 1.0);
        }
    }
    return ObservationSet(std::move(out), data.responses());
}

} // namespace circreg
