#include "circreg/cross_validation.hpp"

#include "circreg/errors.hpp"

#include <cmath>

namespace circreg {

void CvConfig::validate() const {
    if (grid_per_axis < 3) {
        throw InvalidInput("cv grid needs at least 3 values per axis");
    }
    if (!(grid_low > 0.0) || !(grid_high > grid_low)) {
        throw InvalidInput("cv grid range must satisfy 0 < low < high");
    }
    if (!(simplex_tolerance > 0.0)) {
        throw InvalidInput("simplex tolerance must be positive");
    }
    if (max_iterations < 0) {
        throw InvalidInput("max iterations must be nonnegative");
    }
    if (!(undefined_penalty >= 0.0 && undefined_penalty <= 2.0)) {
        throw InvalidInput("undefined penalty must lie in [0, 2]");
    }
}

CvEvaluation cv_evaluate(const ObservationSet& data, const LocalFitSpec& spec,
                         double undefined_penalty) {
    if (data.size() < 2) {
        throw InvalidInput("cross-validation needs at least two observations");
    }
    const CircularFit fit(data, spec);
    CvEvaluation ev;
    for (std::size_t i = 0; i < data.size(); ++i) {
        const CircularPrediction p = fit.predict_leave_one_out(i);
        if (p.stable) {
            ev.score += angular_loss(data.responses()[i], p.direction);
        } else {
            ev.score += undefined_penalty;
            ++ev.undefined;
        }
    }
    return ev;
}

Eigen::VectorXd covariate_std_devs(const Eigen::MatrixXd& covariates) {
    const Eigen::Index n = covariates.rows();
    if (n < 2) {
        throw InvalidInput("standard deviations need at least two observations");
    }
    const Eigen::RowVectorXd mean = covariates.colwise().mean();
    const Eigen::MatrixXd centered = covariates.rowwise() - mean;
    Eigen::VectorXd sd = (centered.colwise().squaredNorm() / static_cast<double>(n - 1)).cwiseSqrt();
    if (sd.minCoeff() <= 0.0) {
        throw InvalidInput("a covariate has zero spread; cannot scale a bandwidth grid");
    }
    return sd;
}

std::vector<Eigen::VectorXd> cv_axis_grids(const ObservationSet& data, const CvConfig& config) {
    config.validate();
    const int d = data.dimension();
    Eigen::VectorXd sd = covariate_std_devs(data.covariates());
    if (config.matrix_kind == MatrixKind::scalar) {
        const double geometric = std::exp(sd.array().log().mean());
        sd = Eigen::VectorXd::Constant(1, geometric);
    }
    const double rate = std::pow(static_cast<double>(data.size()), -1.0 / (d + 4.0));
    const int g = config.grid_per_axis;
    std::vector<Eigen::VectorXd> grids;
    for (Eigen::Index a = 0; a < sd.size(); ++a) {
        Eigen::VectorXd axis(g);
        for (int k = 0; k < g; ++k) {
            const double t = static_cast<double>(k) / (g - 1);
            axis(k) = sd(a) * rate * config.grid_low * std::pow(config.grid_high / config.grid_low, t);
        }
        grids.push_back(std::move(axis));
    }
    return grids;
}

BandwidthMatrix initial_full_bandwidth(const ObservationSet& data) {
    return BandwidthMatrix::full((1.5 * covariate_std_devs(data.covariates())).asDiagonal().toDenseMatrix());
}

CvSelection select_from_candidates(const ObservationSet& data, int degree, const KernelSpec& kernel,
                                   const std::vector<BandwidthMatrix>& candidates,
                                   const CvConfig& config) {
    config.validate();
    if (candidates.empty()) {
        throw InvalidInput("no bandwidth candidates supplied");
    }
    std::vector<CvCandidate> evaluated;
    evaluated.reserve(candidates.size());
    std::size_t best = 0;
    for (std::size_t c = 0; c < candidates.size(); ++c) {
        const LocalFitSpec spec{degree, kernel, candidates[c], config.stability_threshold};
        evaluated.push_back({candidates[c], cv_evaluate(data, spec, config.undefined_penalty)});
        if (evaluated[c].evaluation.score < evaluated[best].evaluation.score) {
            best = c;
        }
    }
    if (evaluated[best].evaluation.undefined == data.size()) {
        throw NoValidBandwidth("every bandwidth candidate leaves all leave-one-out fits undefined");
    }
    CvSelection sel{evaluated[best].bandwidth, evaluated[best].evaluation, std::move(evaluated)};
    return sel;
}

Eigen::MatrixXd bandwidth_from_log_cholesky(const Eigen::VectorXd& theta, int dimension) {
    if (theta.size() != dimension * (dimension + 1) / 2) {
        throw InvalidInput("log-Cholesky vector has the wrong length");
    }
    Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(dimension, dimension);
    Eigen::Index k = 0;
    for (int r = 0; r < dimension; ++r) {
        for (int c = 0; c <= r; ++c) {
            lower(r, c) = r == c ? std::exp(theta(k)) : theta(k);
            ++k;
        }
    }
    return lower * lower.transpose();
}

Eigen::VectorXd log_cholesky_from_bandwidth(const BandwidthMatrix& bandwidth) {
    const auto d = static_cast<int>(bandwidth.dimension());
    const Eigen::MatrixXd lower = bandwidth.matrix().llt().matrixL();
    Eigen::VectorXd theta(d * (d + 1) / 2);
    Eigen::Index k = 0;
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c <= r; ++c) {
            theta(k++) = r == c ? std::log(lower(r, c)) : lower(r, c);
        }
    }
    return theta;
}

namespace {

CvSelection select_full(const ObservationSet& data, int degree, const KernelSpec& kernel,
                        const CvConfig& config) {
    const int d = data.dimension();
    const BandwidthMatrix start = initial_full_bandwidth(data);
    const Eigen::VectorXd theta0 = log_cholesky_from_bandwidth(start);

    // Steps: 0.25 in log-diagonal, 0.25 * column scale off the diagonal.
    const Eigen::MatrixXd lower0 = start.matrix().llt().matrixL();
    Eigen::VectorXd steps(theta0.size());
    Eigen::Index k = 0;
    for (int r = 0; r < d; ++r) {
        for (int c = 0; c <= r; ++c) {
            steps(k++) = r == c ? 0.25 : 0.25 * lower0(c, c);
        }
    }

    const double worst = static_cast<double>(data.size()) * config.undefined_penalty + 1.0;
    auto objective = [&](const Eigen::VectorXd& theta) {
        try {
            const auto h = BandwidthMatrix::full(bandwidth_from_log_cholesky(theta, d));
            return cv_evaluate(data, {degree, kernel, h, config.stability_threshold},
                               config.undefined_penalty)
                .score;
        } catch (const InvalidBandwidth&) {
            return worst;
        }
    };

    NelderMeadOptions options;
    options.tolerance = config.simplex_tolerance;
    options.max_iterations = config.max_iterations;
    const NelderMeadResult nm = nelder_mead_minimize(objective, theta0, steps, options);

    const auto best = BandwidthMatrix::full(bandwidth_from_log_cholesky(nm.x, d));
    const CvEvaluation ev =
        cv_evaluate(data, {degree, kernel, best, config.stability_threshold}, config.undefined_penalty);
    if (ev.undefined == data.size()) {
        throw NoValidBandwidth("simplex search found no bandwidth with a defined leave-one-out fit");
    }
    CvSelection sel{best, ev, {}};
    sel.iterations = nm.iterations;
    sel.converged = nm.converged;
    return sel;
}

} // namespace

CvSelection select_bandwidth_cv_detailed(const ObservationSet& data, int degree,
                                         const KernelSpec& kernel, const CvConfig& config) {
    config.validate();
    if (data.size() < 2) {
        throw InvalidInput("cross-validation needs at least two observations");
    }
    if (kernel.dimension != data.dimension()) {
        throw InvalidInput("kernel dimension does not match the covariates");
    }
    if (config.matrix_kind == MatrixKind::full) {
        return select_full(data, degree, kernel, config);
    }

    const auto grids = cv_axis_grids(data, config);
    std::vector<BandwidthMatrix> candidates;
    if (config.matrix_kind == MatrixKind::scalar) {
        for (Eigen::Index k = 0; k < grids[0].size(); ++k) {
            candidates.push_back(BandwidthMatrix::scalar(grids[0](k), data.dimension()));
        }
    } else {
        // Lexicographic order, first axis slowest and every axis ascending, so
        // strict-improvement scanning breaks ties toward smaller bandwidths.
        const auto d = static_cast<Eigen::Index>(grids.size());
        const Eigen::Index g = grids[0].size();
        Eigen::Index total = 1;
        for (Eigen::Index a = 0; a < d; ++a) {
            total *= g;
        }
        Eigen::VectorXd diag(d);
        for (Eigen::Index c = 0; c < total; ++c) {
            Eigen::Index rest = c;
            for (Eigen::Index a = d - 1; a >= 0; --a) {
                diag(a) = grids[static_cast<std::size_t>(a)](rest % g);
                rest /= g;
            }
            candidates.push_back(BandwidthMatrix::diagonal(diag));
        }
    }
    return select_from_candidates(data, degree, kernel, candidates, config);
}

} // namespace circreg
