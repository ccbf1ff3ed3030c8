#include "circreg/cli.hpp"

#include "circreg/cross_validation.hpp"
#include "circreg/dataset_io.hpp"
#include "circreg/errors.hpp"
#include "circreg/prediction_grid.hpp"
#include "circreg/rate_probe.hpp"
#include "circreg/study_io.hpp"
#include "circreg/text_format.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <fstream>
#include <numbers>
#include <ostream>
#include <sstream>

namespace circreg {

namespace {

using nlohmann::ordered_json;

/// Bad flag values detected after CLI11 has accepted the command line.
class UsageError : public std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DataFlags {
    std::string data;
    std::string response;
    std::string covariates;
    bool degrees = false;
    double jitter = 0.0;
    std::uint64_t seed = 1;
};

struct ModelFlags {
    int degree = 1;
    std::string kernel = "epanechnikov";
    std::string bandwidth = "cv-diag";
};

struct Options {
    DataFlags data;
    ModelFlags model;
    std::string out;
    std::string fit_file;
    std::string config;
    std::optional<std::uint64_t> seed_override;
    unsigned threads = 1;
    int grid_resolution = 100;
    double max_cell_distance = 15.0;
    bool no_stability_filter = false;
    std::string sizes = "64,225,400,900";
    std::size_t probe_replicates = 50;
    double bandwidth_constant = 0.5;
};

void add_data_flags(CLI::App& cmd, Options& o) {
    cmd.add_option("--data", o.data.data, "Comma-separated input file with a header row")->required();
    cmd.add_option("--response", o.data.response, "Response column")->required();
    cmd.add_option("--covariates", o.data.covariates, "Covariate columns, comma-separated")->required();
    cmd.add_flag("--degrees", o.data.degrees, "Angles are in degrees (input and output)");
    cmd.add_option("--jitter", o.data.jitter, "Uniform noise of +-scale grid cells on repeated covariates");
    cmd.add_option("--seed", o.data.seed, "Seed for jittering");
}

void add_model_flags(CLI::App& cmd, Options& o) {
    cmd.add_option("--degree", o.model.degree, "Local polynomial degree");
    cmd.add_option("--kernel", o.model.kernel, "epanechnikov | gaussian");
    cmd.add_option("--bandwidth", o.model.bandwidth, "fixed:h11,h22,... | cv-diag | cv-scalar | cv-full");
    cmd.add_option("--grid-resolution", o.grid_resolution, "Grid points per axis");
}

KernelFamily kernel_flag(const std::string& text) {
    try {
        return parse_kernel_family(text);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

BandwidthMode bandwidth_flag(const std::string& text, int d) {
    try {
        return parse_bandwidth_mode(text, d);
    } catch (const Error& e) {
        throw UsageError(e.what());
    }
}

ObservationSet load_data(const DataFlags& f, int grid_resolution) {
    DatasetFile file{f.data, f.degrees ? AngleUnit::degrees : AngleUnit::radians, f.response,
                     split_list(f.covariates)};
    ObservationSet data = parse_dataset(file);
    if (f.jitter > 0.0) {
        data = jitter_duplicates(data, f.jitter, bounding_box_cell(data.covariates(), grid_resolution),
                                 f.seed);
    }
    return data;
}

ordered_json matrix_json(const Eigen::MatrixXd& m) {
    ordered_json rows = ordered_json::array();
    for (Eigen::Index r = 0; r < m.rows(); ++r) {
        ordered_json row = ordered_json::array();
        for (Eigen::Index c = 0; c < m.cols(); ++c) {
            row.push_back(m(r, c));
        }
        rows.push_back(row);
    }
    return rows;
}

Eigen::MatrixXd matrix_from_json(const ordered_json& j) {
    const auto d = static_cast<Eigen::Index>(j.size());
    Eigen::MatrixXd m(d, d);
    for (Eigen::Index r = 0; r < d; ++r) {
        if (j[r].size() != j.size()) {
            throw InvalidInput("fit file: bandwidth must be a square matrix");
        }
        for (Eigen::Index c = 0; c < d; ++c) {
            m(r, c) = j[r][c].get<double>();
        }
    }
    return m;
}

void emit(const Options& o, const std::string& text, std::ostream& out) {
    if (o.out.empty()) {
        out << text;
    } else {
        write_file_atomic(o.out, text);
    }
}

struct ResolvedFit {
    LocalFitSpec spec;
    std::optional<CvSelection> selection;
    std::string mode;
};

ResolvedFit resolve_fit(const ObservationSet& data, const ModelFlags& m) {
    const int d = data.dimension();
    const KernelSpec kernel{kernel_flag(m.kernel), d};
    const BandwidthMode mode = bandwidth_flag(m.bandwidth, d);
    if (const auto* fixed = std::get_if<BandwidthMatrix>(&mode)) {
        LocalFitSpec spec{m.degree, kernel, *fixed};
        spec.validate();
        return {spec, std::nullopt, "fixed"};
    }
    const auto& cv = std::get<CvConfig>(mode);
    CvSelection sel = select_bandwidth_cv_detailed(data, m.degree, kernel, cv);
    LocalFitSpec spec{m.degree, kernel, sel.bandwidth, cv.stability_threshold};
    return {spec, std::move(sel), bandwidth_mode_name(mode)};
}

ordered_json fit_record(const ResolvedFit& fit, const ObservationSet& data, const Options& o) {
    ordered_json j;
    j["degree"] = fit.spec.degree;
    j["kernel"] = std::string(to_string(fit.spec.kernel.family));
    j["bandwidth"] = matrix_json(fit.spec.bandwidth.matrix());
    j["bandwidth_mode"] = fit.mode;
    j["n"] = data.size();
    j["response"] = o.data.response;
    j["covariates"] = split_list(o.data.covariates);
    if (fit.selection) {
        j["cv_score"] = fit.selection->evaluation.score;
        j["cv_undefined"] = fit.selection->evaluation.undefined;
    }
    return j;
}

int cmd_fit(const Options& o, std::ostream& out) {
    const ObservationSet data = load_data(o.data, o.grid_resolution);
    const ResolvedFit fit = resolve_fit(data, o.model);
    emit(o, fit_record(fit, data, o).dump(2) + "\n", out);
    return kExitOk;
}

int cmd_cv(const Options& o, std::ostream& out) {
    const ObservationSet data = load_data(o.data, o.grid_resolution);
    const int d = data.dimension();
    const BandwidthMode mode = bandwidth_flag(o.model.bandwidth, d);
    const auto* cv = std::get_if<CvConfig>(&mode);
    if (cv == nullptr) {
        throw UsageError("cv needs --bandwidth cv-diag, cv-scalar or cv-full");
    }
    const KernelSpec kernel{kernel_flag(o.model.kernel), d};
    const CvSelection sel = select_bandwidth_cv_detailed(data, o.model.degree, kernel, *cv);

    ordered_json j;
    j["mode"] = bandwidth_mode_name(mode);
    j["degree"] = o.model.degree;
    j["kernel"] = std::string(to_string(kernel.family));
    j["n"] = data.size();
    j["selected"] = matrix_json(sel.bandwidth.matrix());
    j["score"] = sel.evaluation.score;
    j["undefined"] = sel.evaluation.undefined;
    if (cv->matrix_kind == MatrixKind::full) {
        j["iterations"] = sel.iterations;
        j["converged"] = sel.converged;
    }
    ordered_json surface = ordered_json::array();
    for (const CvCandidate& c : sel.candidates) {
        ordered_json row;
        row["bandwidth"] = matrix_json(c.bandwidth.matrix());
        row["score"] = c.evaluation.score;
        row["undefined"] = c.evaluation.undefined;
        surface.push_back(row);
    }
    j["surface"] = surface;
    emit(o, j.dump(2) + "\n", out);
    return kExitOk;
}

int cmd_predict(const Options& o, std::ostream& out, std::ostream& err) {
    const ObservationSet data = load_data(o.data, o.grid_resolution);
    const int d = data.dimension();
    LocalFitSpec spec{o.model.degree, KernelSpec{kernel_flag(o.model.kernel), d},
                      BandwidthMatrix::scalar(1.0, d)};
    if (!o.fit_file.empty()) {
        std::ifstream in(o.fit_file);
        if (!in) {
            throw InvalidInput("cannot open fit file '" + o.fit_file + "'");
        }
        ordered_json j;
        try {
            j = ordered_json::parse(in);
            spec.degree = j.at("degree").get<int>();
            spec.kernel.family = parse_kernel_family(j.at("kernel").get<std::string>());
            spec.bandwidth = BandwidthMatrix::full(matrix_from_json(j.at("bandwidth")));
        } catch (const nlohmann::json::exception& e) {
            throw InvalidInput(std::string("fit file: ") + e.what());
        }
        spec.validate();
    } else {
        spec = resolve_fit(data, o.model).spec;
    }

    GridFilterConfig grid;
    grid.resolution = o.grid_resolution;
    grid.max_cell_distance = o.max_cell_distance;
    grid.require_stability = !o.no_stability_filter;
    grid.validate();

    const CircularFit fit(data, spec);
    const PredictionGrid result = build_prediction_grid(data, grid, fit);

    const std::vector<std::string> names = split_list(o.data.covariates);
    std::ostringstream csv;
    for (const auto& name : names) {
        csv << name << ',';
    }
    csv << (o.data.degrees ? "direction_degrees" : "direction_radians") << ",ell_hat,stable\n";
    const double scale = o.data.degrees ? 180.0 / std::numbers::pi : 1.0;
    for (std::size_t g = 0; g < result.kept.size(); ++g) {
        if (!result.kept[g]) {
            continue;
        }
        const auto row = static_cast<Eigen::Index>(g);
        for (Eigen::Index k = 0; k < d; ++k) {
            csv << format_double(result.points(row, k)) << ',';
        }
        const CircularPrediction& p = result.predictions[g];
        csv << (p.stable ? format_double(p.direction.value() * scale) : "nan") << ','
            << format_double(p.ell_hat) << ',' << (p.stable ? 1 : 0) << '\n';
    }
    if (result.kept_count() == 0) {
        err << "warning: no grid point survived the filters; writing an empty table\n";
    }
    emit(o, csv.str(), out);
    return kExitOk;
}

StudyConfig load_study_config(const Options& o) {
    std::ifstream in(o.config);
    if (!in) {
        throw InvalidInput("cannot open config '" + o.config + "'");
    }
    StudyConfig config = parse_study_config(in);
    if (o.seed_override) {
        config.seed = *o.seed_override;
    }
    config.threads = o.threads;
    return config;
}

int cmd_simulate(const Options& o) {
    const StudyConfig config = load_study_config(o);
    const StudyReport report = run_study(config);
    const std::string prefix = o.out.empty() ? "study" : o.out;

    std::ostringstream csv;
    write_study_csv(report, config.dimension(), csv);
    write_file_atomic(prefix + ".csv", csv.str());
    write_file_atomic(prefix + ".json", study_summary_json(config, report));
    if (report.pointwise) {
        std::ostringstream pw;
        write_pointwise_csv(report, pw);
        write_file_atomic(prefix + "_pointwise.csv", pw.str());
    }
    return kExitOk;
}

int cmd_rate_probe(const Options& o, std::ostream& out) {
    RateProbeConfig probe;
    probe.base = load_study_config(o);
    for (const auto& item : split_list(o.sizes)) {
        std::size_t n = 0;
        try {
            n = static_cast<std::size_t>(std::stoull(item));
        } catch (const std::exception&) {
            throw UsageError("--sizes: cannot parse '" + item + "'");
        }
        probe.sample_sizes.push_back(n);
    }
    probe.degree = probe.base.degree;
    probe.replicates = o.probe_replicates;
    probe.bandwidth_constant = o.bandwidth_constant;
    const RateProbeResult result = rate_probe(probe);
    std::ostringstream csv;
    write_rate_probe_csv(result, csv);
    emit(o, csv.str(), out);
    if (!o.out.empty()) {
        out << "fitted_slope=" << format_double(result.fitted_log_slope)
            << " theoretical_slope=" << format_double(result.theoretical_slope) << '\n';
    }
    return kExitOk;
}

} // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Circular-response local polynomial regression"};
    app.require_subcommand(1);
    Options o;

    CLI::App* fit = app.add_subcommand("fit", "Select or accept a bandwidth and write the fit parameters");
    add_data_flags(*fit, o);
    add_model_flags(*fit, o);
    fit->add_option("--out", o.out, "Output JSON file (default stdout)");

    CLI::App* predict = app.add_subcommand("predict", "Evaluate a fit over a filtered grid");
    add_data_flags(*predict, o);
    add_model_flags(*predict, o);
    predict->add_option("--fit", o.fit_file, "Fit record written by `fit`; overrides model flags");
    predict->add_option("--max-cell-distance", o.max_cell_distance, "Keep grid points this close to data");
    predict->add_flag("--no-stability-filter", o.no_stability_filter, "Keep unstable grid points");
    predict->add_option("--threads", o.threads, "Worker threads");
    predict->add_option("--out", o.out, "Output CSV file (default stdout)");

    CLI::App* cv = app.add_subcommand("cv", "Report the cross-validation surface and selection");
    add_data_flags(*cv, o);
    add_model_flags(*cv, o);
    cv->add_option("--out", o.out, "Output JSON file (default stdout)");

    CLI::App* simulate = app.add_subcommand("simulate", "Run a Monte-Carlo study from a config file");
    simulate->add_option("--config", o.config, "Study config file")->required();
    simulate->add_option("--seed", o.seed_override, "Override the config seed");
    simulate->add_option("--threads", o.threads, "Worker threads (does not change results)");
    simulate->add_option("--out", o.out, "Output prefix; writes <prefix>.csv, <prefix>.json and <prefix>_pointwise.csv");

    CLI::App* probe = app.add_subcommand("rate-probe", "Fixed-bandwidth error decay against n");
    probe->add_option("--config", o.config, "Study config file (model, kappa, degree, kernel, seed)")
        ->required();
    probe->add_option("--sizes", o.sizes, "Sample sizes, comma-separated");
    probe->add_option("--replicates", o.probe_replicates, "Replicates per sample size");
    probe->add_option("--bandwidth-constant", o.bandwidth_constant, "c in h = c n^-r");
    probe->add_option("--seed", o.seed_override, "Override the config seed");
    probe->add_option("--threads", o.threads, "Worker threads");
    probe->add_option("--out", o.out, "Output CSV file (default stdout)");

    std::vector<std::string> owned{"circreg"};
    owned.insert(owned.end(), args.begin(), args.end());
    std::vector<char*> argv;
    for (auto& a : owned) {
        argv.push_back(a.data());
    }
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n' << "run with --help for usage\n";
        return kExitUsage;
    }

    try {
        if (*fit) {
            return cmd_fit(o, out);
        }
        if (*predict) {
            return cmd_predict(o, out, err);
        }
        if (*cv) {
            return cmd_cv(o, out);
        }
        if (*simulate) {
            return cmd_simulate(o);
        }
        return cmd_rate_probe(o, out);
    } catch (const UsageError& e) {
        err << "error: " << e.what() << '\n';
        return kExitUsage;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitFailure;
    }
}

} // namespace circreg
