#include "circreg/rate_probe.hpp"

#include "circreg/errors.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>

#include "circreg/text_format.hpp"

namespace circreg {

namespace {

int bias_order(int degree) {
    if (degree < 0) {
        throw InvalidInput("degree must be nonnegative");
    }
    return degree % 2 == 1 ? degree + 1 : degree + 2;
}

} // namespace

double bandwidth_rate_exponent(int dimension, int degree) {
    return 1.0 / (2.0 * bias_order(degree) + dimension);
}

double theoretical_log_slope(int dimension, int degree) {
    const double q = bias_order(degree);
    return -2.0 * q / (2.0 * q + dimension);
}

double log_log_slope(std::span<const double> x, std::span<const double> y) {
    if (x.size() != y.size() || x.size() < 2) {
        throw InvalidInput("slope fit needs at least two paired values");
    }
    double mx = 0.0;
    double my = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= static_cast<double>(x.size());
    my /= static_cast<double>(x.size());
    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx;
        sxy += dx * (std::log(y[i]) - my);
        sxx += dx * dx;
    }
    return sxy / sxx;
}

RateProbeResult rate_probe(const RateProbeConfig& config) {
    const auto& sizes = config.sample_sizes;
    if (sizes.size() < 3) {
        throw InvalidInput("rate probe needs at least three sample sizes");
    }
    for (std::size_t i = 1; i < sizes.size(); ++i) {
        if (sizes[i] <= sizes[i - 1]) {
            throw InvalidInput("rate probe sample sizes must be strictly increasing");
        }
    }
    if (!(config.bandwidth_constant > 0.0) || !(config.interior_factor >= 0.0) || config.eval_per_axis < 1) {
        throw InvalidInput("invalid rate probe bandwidth or evaluation settings");
    }
    const int d = config.base.dimension();
    const double rate = bandwidth_rate_exponent(d, config.degree);

    RateProbeResult result;
    result.sample_sizes = sizes;
    result.theoretical_slope = theoretical_log_slope(d, config.degree);
    for (std::size_t n : sizes) {
        result.bandwidths.push_back(config.bandwidth_constant * std::pow(static_cast<double>(n), -rate));
    }

    // Fixed interior evaluation set shared by every sample size.
    const double margin = config.interior_factor * result.bandwidths.front();
    if (margin >= 0.5) {
        throw InvalidInput("bandwidth too large: no interior evaluation region remains");
    }
    const int k = config.eval_per_axis;
    Eigen::MatrixXd eval = k == 1 ? Eigen::MatrixXd::Constant(1, d, 0.5) : regular_grid(k, d);
    eval = (eval.array() * (1.0 - 2.0 * margin) + margin).matrix();
    result.eval_points = eval;

    const bool analytic = config.base.model.kind != ModelKind::custom && config.degree <= 1;
    const KernelConstants kc = kernel_constants({config.base.kernel, d});
    const Estimator est = config.degree == 0 ? Estimator::nw : Estimator::ll;

    for (std::size_t i = 0; i < sizes.size(); ++i) {
        StudyConfig sc = config.base;
        sc.n = sizes[i];
        sc.replicates = config.replicates;
        sc.degree = config.degree;
        sc.bandwidth = BandwidthMatrix::scalar(result.bandwidths[i], d);
        sc.eval_grid = 0;
        sc.eval_points = eval;
        const StudyReport report = run_study(sc);
        if (!(report.mean_eval_case > 1e-20)) {
            throw ProbeInvalid("empirical error is zero at n = " + std::to_string(sizes[i]) +
                               "; the probe cannot estimate a rate");
        }
        result.empirical_mse.push_back(report.mean_eval_case);
        result.empirical_sq_error.push_back(report.mean_eval_sq_error);

        double predicted = std::numeric_limits<double>::quiet_NaN();
        if (analytic) {
            const AsymptoticModel am = analytic_model(config.base.model.kind, config.base.kappa);
            const auto h = BandwidthMatrix::scalar(result.bandwidths[i], d);
            predicted = 0.0;
            for (Eigen::Index r = 0; r < eval.rows(); ++r) {
                predicted += amse_local(am.inputs_at(eval.row(r).transpose(), sizes[i], kc), h, est);
            }
            predicted /= static_cast<double>(eval.rows());
        }
        result.predicted_amse.push_back(predicted);
    }

    std::vector<double> xs(sizes.begin(), sizes.end());
    result.fitted_log_slope = log_log_slope(xs, result.empirical_mse);
    return result;
}

void write_rate_probe_csv(const RateProbeResult& result, std::ostream& out) {
    out << "n,bandwidth,empirical_mse,empirical_sq_error,predicted_amse\n";
    for (std::size_t i = 0; i < result.sample_sizes.size(); ++i) {
        out << result.sample_sizes[i] << ',' << format_double(result.bandwidths[i]) << ','
            << format_double(result.empirical_mse[i]) << ',' << format_double(result.empirical_sq_error[i])
            << ',' << format_double(result.predicted_amse[i]) << '\n';
    }
}

std::vector<PluginComparison> local_plugin_comparison(ModelKind model, double kappa, std::size_t n,
                                                      int degree, const Eigen::MatrixXd& points,
                                                      std::size_t replicates, std::uint64_t seed) {
    if (degree < 0 || degree > 1) {
        throw InvalidInput("plug-in comparison supports degree 0 or 1");
    }
    if (replicates < 1) {
        throw InvalidInput("at least one replicate is required");
    }
    const KernelSpec kernel = KernelSpec::epanechnikov(2);
    const KernelConstants kc = kernel_constants(kernel);
    const AsymptoticModel am = analytic_model(model, kappa);
    const Estimator est = degree == 0 ? Estimator::nw : Estimator::ll;

    std::vector<PluginComparison> out;
    for (Eigen::Index r = 0; r < points.rows(); ++r) {
        const Eigen::VectorXd x = points.row(r).transpose();
        const AsymptoticInputs in = am.inputs_at(x, n, kc);
        const BandwidthMatrix h = h_opt_local(in, est);
        out.push_back({x, h, 0.0, amse_local(in, h, est)});
    }

    StudyConfig sc;
    sc.model = StudyModel::builtin(model);
    sc.n = n;
    sc.kappa = kappa;
    for (std::size_t rep = 0; rep < replicates; ++rep) {
        RandomStream rng = RandomStream::substream(seed, rep);
        const ObservationSet data = generate_sample(sc, rng);
        for (PluginComparison& pc : out) {
            const CircularFit fit(data, {degree, kernel, pc.bandwidth});
            const CircularPrediction p = fit.predict(pc.x);
            const double err = p.stable ? signed_difference(p.direction, regression_truth(model, pc.x))
                                        : std::numbers::pi;
            pc.empirical_sq_error += err * err;
        }
    }
    for (PluginComparison& pc : out) {
        pc.empirical_sq_error /= static_cast<double>(replicates);
    }
    return out;
}

} // namespace circreg
