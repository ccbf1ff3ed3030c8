#include "circreg/study.hpp"

#include "circreg/errors.hpp"
#include "circreg/von_mises.hpp"

#include <atomic>
#include <cmath>
#include <numbers>
#include <thread>

namespace circreg {

void StudyConfig::validate() const {
    if (model.dimension < 1) {
        throw InvalidInput("model dimension must be positive");
    }
    if ((model.kind == ModelKind::m1 || model.kind == ModelKind::m2) && model.dimension != 2) {
        throw InvalidInput("M1 and M2 are bivariate models");
    }
    if (std::isnan(kappa) || kappa < 0.0) {
        throw InvalidInput("kappa must be nonnegative");
    }
    if (replicates < 1) {
        throw InvalidInput("at least one replicate is required");
    }
    if (degree < 0 || (model.dimension > 1 && degree > 1)) {
        throw InvalidInput("degree must be 0 or 1 for multivariate designs");
    }
    if (eval_grid != 0 && eval_grid < 2) {
        throw InvalidInput("eval_grid must be 0 or at least 2");
    }
    if (eval_points && eval_points->rows() > 0 && eval_points->cols() != model.dimension) {
        throw InvalidInput("evaluation points have the wrong dimension");
    }
    if (const auto* cv = std::get_if<CvConfig>(&bandwidth)) {
        cv->validate();
    } else if (std::get<BandwidthMatrix>(bandwidth).dimension() != model.dimension) {
        throw InvalidBandwidth("fixed bandwidth dimension does not match the model");
    }
    grid_points_per_axis(n, model.dimension);
}

int grid_points_per_axis(std::size_t n, int dimension) {
    if (dimension < 1) {
        throw InvalidInput("grid dimension must be positive");
    }
    const auto k = static_cast<long>(std::llround(std::pow(static_cast<double>(n), 1.0 / dimension)));
    long total = 1;
    for (int a = 0; a < dimension; ++a) {
        total *= k;
    }
    if (k < 2 || total != static_cast<long>(n)) {
        throw InvalidInput("sample size " + std::to_string(n) + " does not form a regular grid in " +
                           std::to_string(dimension) + " dimensions");
    }
    return static_cast<int>(k);
}

Eigen::MatrixXd regular_grid(int points_per_axis, int dimension) {
    if (points_per_axis < 2 || dimension < 1) {
        throw InvalidInput("regular grid needs at least 2 points per axis");
    }
    Eigen::Index total = 1;
    for (int a = 0; a < dimension; ++a) {
        total *= points_per_axis;
    }
    Eigen::MatrixXd grid(total, dimension);
    const double step = 1.0 / (points_per_axis - 1);
    for (Eigen::Index r = 0; r < total; ++r) {
        Eigen::Index rest = r;
        for (int a = dimension - 1; a >= 0; --a) {
            grid(r, a) = static_cast<double>(rest % points_per_axis) * step;
            rest /= points_per_axis;
        }
    }
    return grid;
}

ObservationSet generate_sample(const StudyConfig& config, RandomStream& rng) {
    const int k = grid_points_per_axis(config.n, config.dimension());
    Eigen::MatrixXd x = regular_grid(k, config.dimension());
    const AngleSeries noise = sample_von_mises(Angle(0.0), config.kappa, config.n, rng);
    std::vector<Angle> theta;
    theta.reserve(config.n);
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
        theta.push_back(config.model.truth(x.row(i).transpose()) + noise[static_cast<std::size_t>(i)].value());
    }
    return ObservationSet(std::move(x), AngleSeries(std::move(theta)));
}

Eigen::MatrixXd evaluation_points(const StudyConfig& config) {
    if (config.eval_points) {
        return *config.eval_points;
    }
    if (config.eval_grid >= 2) {
        return regular_grid(config.eval_grid, config.dimension());
    }
    return Eigen::MatrixXd(0, config.dimension());
}

namespace {

MaybeAngle as_estimate(const CircularPrediction& p) {
    return p.stable ? MaybeAngle(p.direction) : std::nullopt;
}

ReplicateResult run_replicate(const StudyConfig& config, std::size_t index,
                              const Eigen::MatrixXd& eval, const AngleSeries& eval_truth) {
    ReplicateResult rep;
    RandomStream rng = RandomStream::substream(config.seed, index);
    const ObservationSet data = generate_sample(config, rng);
    const KernelSpec kernel{config.kernel, config.dimension()};

    std::optional<BandwidthMatrix> h;
    try {
        if (const auto* cv = std::get_if<CvConfig>(&config.bandwidth)) {
            h = select_bandwidth_cv(data, config.degree, kernel, *cv);
        } else {
            h = std::get<BandwidthMatrix>(config.bandwidth);
        }
    } catch (const NoValidBandwidth& e) {
        rep.failure = e.what();
        return rep;
    }
    rep.bandwidth = h->matrix();

    double threshold = kDefaultStabilityThreshold;
    if (const auto* cv = std::get_if<CvConfig>(&config.bandwidth)) {
        threshold = cv->stability_threshold;
    }
    const CircularFit fit(data, {config.degree, kernel, *h, threshold});

    std::vector<MaybeAngle> design_estimates;
    design_estimates.reserve(data.size());
    std::vector<Angle> design_truth;
    design_truth.reserve(data.size());
    for (Eigen::Index i = 0; i < data.covariates().rows(); ++i) {
        const Eigen::VectorXd x = data.covariates().row(i).transpose();
        design_estimates.push_back(as_estimate(fit.predict(x)));
        design_truth.push_back(config.model.truth(x));
    }
    const CaseResult cr = metric_case(AngleSeries(std::move(design_truth)), design_estimates);
    rep.case_value = cr.value;
    rep.undefined = cr.undefined;

    if (eval.rows() > 0) {
        rep.eval_estimates.reserve(static_cast<std::size_t>(eval.rows()));
        double sq = 0.0;
        for (Eigen::Index i = 0; i < eval.rows(); ++i) {
            const MaybeAngle e = as_estimate(fit.predict(eval.row(i).transpose()));
            const Angle t = eval_truth[static_cast<std::size_t>(i)];
            // Undefined estimates count as the antipodal error.
            const double err = e ? signed_difference(*e, t) : std::numbers::pi;
            sq += err * err;
            rep.eval_estimates.push_back(e);
        }
        rep.eval_case = metric_case(eval_truth, rep.eval_estimates).value;
        rep.eval_sq_error = sq / static_cast<double>(eval.rows());
    }
    rep.ok = true;
    return rep;
}

} // namespace

StudyReport run_study(const StudyConfig& config) {
    config.validate();
    const Eigen::MatrixXd eval = evaluation_points(config);
    std::vector<Angle> truth_values;
    for (Eigen::Index i = 0; i < eval.rows(); ++i) {
        truth_values.push_back(config.model.truth(eval.row(i).transpose()));
    }
    const AngleSeries eval_truth(std::move(truth_values));

    StudyReport report;
    report.replicates.resize(config.replicates);
    auto work = [&](std::size_t r) { report.replicates[r] = run_replicate(config, r, eval, eval_truth); };
    const unsigned threads = std::max(1U, config.threads);
    if (threads == 1) {
        for (std::size_t r = 0; r < config.replicates; ++r) {
            work(r);
        }
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::jthread> pool;
        for (unsigned t = 0; t < threads; ++t) {
            pool.emplace_back([&] {
                for (std::size_t r = next++; r < config.replicates; r = next++) {
                    work(r);
                }
            });
        }
    }

    double case_sum = 0.0;
    double eval_case_sum = 0.0;
    double eval_sq_sum = 0.0;
    for (const ReplicateResult& rep : report.replicates) {
        if (!rep.ok) {
            ++report.failed;
            continue;
        }
        report.per_replicate_case.push_back(rep.case_value);
        case_sum += rep.case_value;
        eval_case_sum += rep.eval_case;
        eval_sq_sum += rep.eval_sq_error;
    }
    const std::size_t ok = report.per_replicate_case.size();
    if (ok == 0) {
        throw Error("every replicate failed: " + report.replicates.front().failure);
    }
    report.mean_case = case_sum / static_cast<double>(ok);
    report.mean_eval_case = eval_case_sum / static_cast<double>(ok);
    report.mean_eval_sq_error = eval_sq_sum / static_cast<double>(ok);

    if (eval.rows() > 0) {
        std::vector<PointwiseCell> cells;
        cells.reserve(static_cast<std::size_t>(eval.rows()));
        std::vector<MaybeAngle> column;
        for (Eigen::Index i = 0; i < eval.rows(); ++i) {
            column.clear();
            for (const ReplicateResult& rep : report.replicates) {
                if (rep.ok) {
                    column.push_back(rep.eval_estimates[static_cast<std::size_t>(i)]);
                }
            }
            const Angle t = eval_truth[static_cast<std::size_t>(i)];
            cells.push_back({eval.row(i).transpose(), t, metric_pointwise(column, t)});
        }
        report.pointwise = std::move(cells);
    }
    return report;
}

} // namespace circreg
