// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Criteria 1 and 2 share one Monte-Carlo table.

#include "oracles.hpp"

#include "circreg/asymptotic.hpp"
#include "circreg/circular_fit.hpp"
#include "circreg/cli.hpp"
#include "circreg/local_poly.hpp"
#include "circreg/models.hpp"
#include "circreg/rate_probe.hpp"
#include "circreg/study.hpp"
#include "circreg/von_mises.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <random>
#include <sstream>
#include <thread>

using namespace circreg;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

unsigned worker_count() {
    return std::max(1u, std::thread::hardware_concurrency());
}

// ---------------------------------------------------------------------------
// Monte-Carlo table

struct Cell {
    ModelKind model;
    double kappa;
    std::size_t n;
    int degree;
    auto key() const { return std::tuple(model, kappa, n, degree); }
    bool operator<(const Cell& o) const { return key() < o.key(); }
};

using Table = std::map<Cell, double>;

const std::vector<double> kKappas{5.0, 10.0, 15.0};
const std::vector<std::size_t> kSizes{64, 100, 225, 400};

Table run_table() {
    Table t;
    for (ModelKind model : {ModelKind::m1, ModelKind::m2}) {
        for (double kappa : kKappas) {
            for (std::size_t n : kSizes) {
                for (int degree : {0, 1}) {
                    StudyConfig c;
                    c.model = StudyModel::builtin(model);
                    c.kappa = kappa;
                    c.n = n;
                    c.degree = degree;
                    c.replicates = 100;
                    c.bandwidth = CvConfig{};
                    c.seed = 20240501;
                    c.eval_grid = 0;
                    c.threads = worker_count();
                    const auto start = std::chrono::steady_clock::now();
                    t[{model, kappa, n, degree}] = run_study(c).mean_case;
                    const double secs =
                        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
                    std::cout << fmt("  cell %s kappa=%-4g n=%-3zu %s  mean CASE %.5f  (%.0fs)\n",
                                     std::string(to_string(model)).c_str(), kappa, n, degree == 0 ? "NW" : "LL",
                                     t[{model, kappa, n, degree}], secs)
                              << std::flush;
                }
            }
        }
    }
    return t;
}

Outcome criterion_spot_values(const Table& t) {
    struct Target {
        ModelKind model;
        double kappa;
        int degree;
        double reference;
    };
    const std::vector<Target> targets{{ModelKind::m1, 5.0, 0, 0.0057},
                                      {ModelKind::m1, 5.0, 1, 0.0049},
                                      {ModelKind::m2, 15.0, 0, 0.0107},
                                      {ModelKind::m2, 15.0, 1, 0.0046}};
    Outcome o;
    for (const auto& g : targets) {
        const double v = t.at({g.model, g.kappa, 225, g.degree});
        const double rel = (v - g.reference) / g.reference;
        const bool ok = std::abs(rel) <= 0.40;
        o.pass = o.pass && ok;
        o.detail += fmt("%s k=%g %s %.4f vs %.4f (%+.0f%%%s); ", std::string(to_string(g.model)).c_str(), g.kappa,
                        g.degree == 0 ? "NW" : "LL", v, g.reference, 100.0 * rel, ok ? "" : ", outside 40%");
    }
    return o;
}

Outcome criterion_orderings(const Table& t) {
    const auto excluded = [](ModelKind m, double kappa, std::size_t n) {
        return m == ModelKind::m2 && kappa == 10.0 && n == 100;
    };
    Outcome o;
    int checks = 0;
    std::string failures;
    const auto check = [&](bool ok, const std::string& what) {
        ++checks;
        if (!ok) {
            o.pass = false;
            failures += what + "; ";
        }
    };
    for (ModelKind m : {ModelKind::m1, ModelKind::m2}) {
        const std::string name(to_string(m));
        for (int p : {0, 1}) {
            const char* est = p == 0 ? "NW" : "LL";
            for (double kappa : kKappas) {
                std::vector<std::size_t> ns;
                for (std::size_t n : kSizes) {
                    if (!excluded(m, kappa, n)) {
                        ns.push_back(n);
                    }
                }
                for (std::size_t i = 1; i < ns.size(); ++i) {
                    const double a = t.at({m, kappa, ns[i - 1], p});
                    const double b = t.at({m, kappa, ns[i], p});
                    check(b < a, fmt("%s %s k=%g: n=%zu %.4f !< n=%zu %.4f", name.c_str(), est, kappa, ns[i],
                                     b, ns[i - 1], a));
                }
            }
            for (std::size_t n : kSizes) {
                std::vector<double> ks;
                for (double kappa : kKappas) {
                    if (!excluded(m, kappa, n)) {
                        ks.push_back(kappa);
                    }
                }
                for (std::size_t i = 1; i < ks.size(); ++i) {
                    const double a = t.at({m, ks[i - 1], n, p});
                    const double b = t.at({m, ks[i], n, p});
                    check(b < a, fmt("%s %s n=%zu: k=%g %.4f !< k=%g %.4f", name.c_str(), est, n, ks[i], b,
                                     ks[i - 1], a));
                }
            }
        }
    }
    for (double kappa : kKappas) {
        for (std::size_t n : kSizes) {
            if (excluded(ModelKind::m2, kappa, n)) {
                continue;
            }
            const double nw = t.at({ModelKind::m2, kappa, n, 0});
            const double ll = t.at({ModelKind::m2, kappa, n, 1});
            check(ll <= nw, fmt("M2 k=%g n=%zu: LL %.4f > NW %.4f", kappa, n, ll, nw));
        }
    }
    o.detail = fmt("%d comparisons", checks);
    if (!failures.empty()) {
        o.detail += "; violated: " + failures;
    }
    return o;
}

// ---------------------------------------------------------------------------
// Oracle equivalence

Outcome criterion_oracle_equivalence() {
    std::mt19937_64 rng(301);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    double worst_real = 0.0;
    double worst_angle = 0.0;
    int compared = 0;
    int mismatched_flags = 0;
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 5 + static_cast<int>(u(rng) * 36.0);
        Eigen::MatrixXd x(n, d);
        std::vector<double> y(static_cast<std::size_t>(n));
        std::vector<double> theta(static_cast<std::size_t>(n));
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < d; ++k) {
                x(i, k) = u(rng);
            }
            y[static_cast<std::size_t>(i)] = 10.0 * u(rng) - 5.0;
            theta[static_cast<std::size_t>(i)] = 2.0 * x(i, 0) + 1.5 * u(rng);
        }
        Eigen::VectorXd at(d);
        for (int k = 0; k < d; ++k) {
            at(k) = u(rng);
        }
        const BandwidthMatrix h = BandwidthMatrix::full(oracle::random_spd(d, 0.25, 0.9, rng));
        const LocalFitSpec spec{0, KernelSpec::epanechnikov(d), h};

        const auto a = local_fit_real(x, y, at, spec);
        const auto b = nw_direct(x, y, at, spec.kernel, h);
        if (a.stable != b.stable) {
            ++mismatched_flags;
            continue;
        }
        if (!a.stable) {
            continue;
        }
        ++compared;
        worst_real = std::max(worst_real, std::abs(a.estimate - b.estimate));

        // Weighted circular mean with normalized kernel weights.
        std::vector<double> w(static_cast<std::size_t>(n));
        double total = 0.0;
        for (int i = 0; i < n; ++i) {
            w[static_cast<std::size_t>(i)] = oracle::epanechnikov_oracle(h.inverse() * (x.row(i).transpose() - at));
            total += w[static_cast<std::size_t>(i)];
        }
        for (double& v : w) {
            v /= total;
        }
        const AngleSeries series(theta);
        const auto mean = circ_mean_and_resultant(series, std::span<const double>(w));
        const auto fit = fit_circular_at(CircularFit(ObservationSet(x, series), spec), at);
        if (mean.undefined || !fit.stable) {
            mismatched_flags += mean.undefined != !fit.stable ? 1 : 0;
            continue;
        }
        worst_angle = std::max(worst_angle, std::abs(signed_difference(fit.direction, mean.mean_direction)));
    }
    Outcome o;
    o.pass = worst_real <= 1e-10 && worst_angle <= 1e-10 && mismatched_flags == 0 && compared >= 150;
    o.detail = fmt("%d supported instances; max |local_fit_real - nw_direct| %.1e; max angular gap to weighted "
                   "circular mean %.1e; stability disagreements %d",
                   compared, worst_real, worst_angle, mismatched_flags);
    return o;
}

// ---------------------------------------------------------------------------
// Identity suite

Outcome criterion_identities() {
    std::mt19937_64 rng(401);
    std::uniform_real_distribution<double> u(0.0, 1.0);

    double worst_identity = 0.0;
    for (int i = 0; i < 1000; ++i) {
        const double angle = kTwoPi * u(rng);
        const double f1 = std::sin(angle);
        const double f2 = std::cos(angle);
        const double ell = u(rng);
        const double s1 = 0.5 * u(rng);
        const double s2 = 0.5 * u(rng);
        const double s12 = (u(rng) - 0.5) * std::sqrt(s1 * s2);
        const auto m = error_moments_from_truth(f1, f2, ell, s1, s2, s12);
        const double m1 = f1 * ell;
        const double m2 = f2 * ell;
        const double lhs =
            f1 * f1 * (m2 * m2 + m.s2_sq) + f2 * f2 * (m1 * m1 + m.s1_sq) - 2.0 * f1 * f2 * (m1 * m2 + m.c);
        worst_identity = std::max(worst_identity, std::abs(lhs - s1));
    }

    double worst_rotation = 0.0;
    for (int p = 0; p <= 3; ++p) {
        const int d = p <= 1 ? 2 : 1;
        for (int trial = 0; trial < 25; ++trial) {
            const int n = 40;
            Eigen::MatrixXd x(n, d);
            std::vector<double> theta(n);
            for (int i = 0; i < n; ++i) {
                for (int k = 0; k < d; ++k) {
                    x(i, k) = u(rng);
                }
                theta[static_cast<std::size_t>(i)] = 3.0 * x(i, 0) + 0.6 * u(rng);
            }
            const ObservationSet data(x, AngleSeries(theta));
            const LocalFitSpec spec{p, KernelSpec::epanechnikov(d), BandwidthMatrix::scalar(0.45, d)};
            const double delta = kTwoPi * u(rng);
            const CircularFit a(data, spec);
            const CircularFit b(data.rotated(delta), spec);
            for (int t = 0; t < 5; ++t) {
                Eigen::VectorXd at(d);
                for (int k = 0; k < d; ++k) {
                    at(k) = 0.2 + 0.6 * u(rng);
                }
                const auto pa = a.predict(at);
                const auto pb = b.predict(at);
                if (pa.stable != pb.stable) {
                    worst_rotation = INFINITY;
                } else if (pa.stable) {
                    worst_rotation =
                        std::max(worst_rotation, std::abs(signed_difference(pb.direction, pa.direction + delta)));
                }
            }
        }
    }

    double worst_affine = 0.0;
    for (int trial = 0; trial < 50; ++trial) {
        const int d = 1 + trial % 3;
        const int n = 40;
        Eigen::MatrixXd x(n, d);
        std::vector<double> y(n);
        Eigen::VectorXd b(d);
        for (int k = 0; k < d; ++k) {
            b(k) = 4.0 * u(rng) - 2.0;
        }
        const double a0 = u(rng);
        for (int i = 0; i < n; ++i) {
            for (int k = 0; k < d; ++k) {
                x(i, k) = u(rng);
            }
            y[static_cast<std::size_t>(i)] = a0 + b.dot(x.row(i).transpose());
        }
        const Eigen::VectorXd at = Eigen::VectorXd::Constant(d, 0.5);
        const auto r = local_fit_real(x, y, at, {1, KernelSpec::epanechnikov(d), BandwidthMatrix::scalar(0.6, d)});
        worst_affine = r.stable ? std::max(worst_affine, std::abs(r.estimate - (a0 + b.dot(at)))) : INFINITY;
    }

    double worst_poly = 0.0;
    for (int p = 0; p <= 3; ++p) {
        Eigen::MatrixXd x(31, 1);
        std::vector<double> y(31);
        std::vector<double> coef(static_cast<std::size_t>(p + 1));
        for (double& c : coef) {
            c = 2.0 * u(rng) - 1.0;
        }
        const auto poly = [&](double v) {
            double s = 0.0;
            for (int k = p; k >= 0; --k) {
                s = s * v + coef[static_cast<std::size_t>(k)];
            }
            return s;
        };
        for (int i = 0; i < 31; ++i) {
            x(i, 0) = i / 30.0;
            y[static_cast<std::size_t>(i)] = poly(x(i, 0));
        }
        for (double at : {0.3, 0.5, 0.71}) {
            Eigen::VectorXd v(1);
            v << at;
            const auto r = local_fit_real(x, y, v, {p, KernelSpec::epanechnikov(1), BandwidthMatrix::scalar(0.25, 1)});
            worst_poly = r.stable ? std::max(worst_poly, std::abs(r.estimate - poly(at))) : INFINITY;
        }
    }

    Outcome o;
    o.pass = worst_identity <= 1e-12 && worst_rotation <= 1e-10 && worst_affine <= 1e-8 && worst_poly <= 1e-8;
    o.detail = fmt("variance identity max err %.1e (1000 draws); rotation p=0..3 max err %.1e; affine "
                   "reproduction %.1e; degree-p polynomial reproduction %.1e",
                   worst_identity, worst_rotation, worst_affine, worst_poly);
    return o;
}

// ---------------------------------------------------------------------------
// von Mises sampler

Outcome criterion_von_mises() {
    Outcome o;
    for (double kappa : {0.5, 5.0, 10.0, 15.0}) {
        RandomStream rng = RandomStream::substream(501, static_cast<std::uint64_t>(kappa * 10));
        const std::size_t n = 100000;
        const AngleSeries s = sample_von_mises(Angle(0.0), kappa, n, rng);
        double c = 0.0;
        double c2 = 0.0;
        for (const Angle a : s) {
            c += a.cos();
            c2 += a.cos() * a.cos();
        }
        const double mean_cos = c / n;
        const double se = std::sqrt((c2 / n - mean_cos * mean_cos) / n);
        const double rbar = circ_mean_and_resultant(s).resultant_length;
        const double target = oracle::bessel_ratio_series(1, kappa);
        const double z = (rbar - target) / se;
        const bool ok = std::abs(z) <= 3.0;
        o.pass = o.pass && ok;
        o.detail += fmt("k=%g R=%.5f I1/I0=%.5f z=%+.2f; ", kappa, rbar, target, z);
    }
    return o;
}

// ---------------------------------------------------------------------------
// Rate probe

Outcome criterion_rate() {
    RateProbeConfig cfg;
    cfg.base.model = StudyModel::builtin(ModelKind::m1);
    cfg.base.kappa = 5.0;
    cfg.base.seed = 601;
    cfg.base.threads = worker_count();
    cfg.sample_sizes = {64, 225, 400, 900};
    cfg.degree = 1;
    cfg.replicates = 50;
    const RateProbeResult r = rate_probe(cfg);
    Outcome o;
    o.pass = r.fitted_log_slope >= -0.95 && r.fitted_log_slope <= -0.40;
    o.detail = fmt("fitted slope %.3f (theory %.3f, band [-0.95, -0.40]); mean CASE", r.fitted_log_slope,
                   r.theoretical_slope);
    for (std::size_t i = 0; i < r.sample_sizes.size(); ++i) {
        o.detail += fmt(" n=%zu:%.2e", r.sample_sizes[i], r.empirical_mse[i]);
    }
    return o;
}

// ---------------------------------------------------------------------------
// Local optimal bandwidth bracket

Outcome criterion_hopt_bracket() {
    const double kappa = 5.0;
    const double ell = oracle::bessel_ratio_series(1, kappa);
    const double sigma1_sq = 0.5 * (1.0 - oracle::bessel_ratio_series(2, kappa));
    const KernelConstants kc = kernel_constants(KernelSpec::epanechnikov(2));

    std::mt19937_64 rng(701);
    std::uniform_real_distribution<double> u(0.1, 0.9);
    int points = 0;
    int draws = 0;
    double worst = -INFINITY; // largest relative excess of amse(H_opt) over a bracket end
    while (points < 25 && draws < 100000) {
        ++draws;
        const Eigen::Vector2d x(u(rng), u(rng));
        AsymptoticInputs in;
        in.grad_m = regression_gradient(ModelKind::m1, x);
        in.hessian_m = regression_hessian(ModelKind::m1, x);
        in.density = 1.0;
        in.grad_density = Eigen::Vector2d::Zero();
        in.ell = ell;
        in.grad_ell = Eigen::Vector2d::Zero();
        in.sigma1_sq = sigma1_sq;
        in.n = 225;
        in.kernel = kc;
        for (Estimator est : {Estimator::nw, Estimator::ll}) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(bias_curvature(in, est));
            const auto lambda = eig.eigenvalues();
            if (lambda(0) * lambda(1) <= 0.0) {
                goto next_draw;
            }
        }
        for (Estimator est : {Estimator::nw, Estimator::ll}) {
            const BandwidthMatrix h = h_opt_local(in, est);
            const double at = amse_local(in, h, est);
            for (double f : {0.5, 2.0}) {
                const double other = amse_local(in, h.scaled(f), est);
                worst = std::max(worst, (at - other) / other);
            }
        }
        ++points;
    next_draw:;
    }
    Outcome o;
    o.pass = points == 25 && worst <= 1e-9;
    o.detail = fmt("%d interior points with definite curvature (%d draws); max relative excess of AMSE(H_opt) "
                   "over AMSE(0.5 H_opt), AMSE(2 H_opt): %.2e",
                   points, draws, worst);
    return o;
}

// ---------------------------------------------------------------------------
// Determinism

std::string slurp(const std::filesystem::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

Outcome criterion_determinism() {
    namespace fs = std::filesystem;
    const fs::path dir = fs::temp_directory_path() / "circreg_acceptance_determinism";
    fs::remove_all(dir);
    fs::create_directories(dir);
    const fs::path cfg = dir / "study.cfg";
    std::ofstream(cfg) << "model = M2\nn = 100\nkappa = 10\nreplicates = 12\ndegree = 1\n"
                          "bandwidth.mode = cv-diag\neval_grid = 5\n";
    const std::vector<std::pair<std::string, std::string>> runs{{"a", "1"}, {"b", "1"}, {"c", "4"}};
    std::ostringstream sink;
    Outcome o;
    for (const auto& [name, threads] : runs) {
        const int code = run_cli({"simulate", "--config", cfg.string(), "--seed", "7", "--threads", threads, "--out",
                                  (dir / name).string()},
                                 sink, sink);
        if (code != 0) {
            o.pass = false;
            o.detail = "simulate exited with " + std::to_string(code) + ": " + sink.str();
        }
    }
    if (o.pass) {
        for (const char* ext : {".csv", ".json", "_pointwise.csv"}) {
            const std::string a = slurp(dir / ("a" + std::string(ext)));
            const bool same = !a.empty() && a == slurp(dir / ("b" + std::string(ext))) &&
                              a == slurp(dir / ("c" + std::string(ext)));
            o.pass = o.pass && same;
            o.detail += fmt("%s %s (%zu bytes); ", ext, same ? "identical" : "DIFFERS", a.size());
        }
        o.detail += "runs: 1 thread twice, 4 threads once";
    }
    fs::remove_all(dir);
    return o;
}

} // namespace

int main() {
    std::vector<std::pair<std::string, Outcome>> results;
    const auto record = [&](int id, const std::string& name, const Outcome& o) {
        results.emplace_back(fmt("%s criterion %d (%s): ", o.pass ? "PASS" : "FAIL", id, name.c_str()) + o.detail,
                             o);
        std::cout << results.back().first << '\n' << std::flush;
    };

    record(3, "oracle equivalence", criterion_oracle_equivalence());
    record(4, "identity suite", criterion_identities());
    record(5, "von Mises sampler", criterion_von_mises());
    record(7, "h_opt bracket", criterion_hopt_bracket());
    record(8, "determinism", criterion_determinism());
    record(6, "convergence rate", criterion_rate());

    std::cout << "Monte-Carlo table (100 replicates per cell, CV diagonal bandwidths):\n" << std::flush;
    const Table table = run_table();
    record(1, "reference CASE spot values", criterion_spot_values(table));
    record(2, "CASE orderings", criterion_orderings(table));

    std::cout << "\nSummary\n";
    std::sort(results.begin(), results.end(), [](const auto& a, const auto& b) {
        return a.first.substr(a.first.find("criterion")) < b.first.substr(b.first.find("criterion"));
    });
    bool all = true;
    for (const auto& [line, o] : results) {
        std::cout << line << '\n';
        all = all && o.pass;
    }
    return all ? 0 : 1;
}
