#include "circreg/study_io.hpp"

#include "circreg/dataset_io.hpp"
#include "circreg/errors.hpp"
#include "circreg/text_format.hpp"

#include "json.hpp"

#include <charconv>
#include <istream>
#include <map>
#include <ostream>

namespace circreg {

namespace {

std::string trim(const std::string& s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string::npos) {
        return {};
    }
    return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
}

template <typename T>
T parse_value(const std::string& key, const std::string& text) {
    T v{};
    const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
    if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
        throw InvalidInput("config key '" + key + "': cannot parse '" + text + "'");
    }
    return v;
}

} // namespace

BandwidthMatrix parse_bandwidth_entries(const std::string& entries, int dimension) {
    std::vector<double> v;
    for (const auto& item : split_list(entries)) {
        v.push_back(parse_value<double>("bandwidth", item));
    }
    const auto d = static_cast<std::size_t>(dimension);
    if (v.size() == 1) {
        return BandwidthMatrix::scalar(v[0], dimension);
    }
    if (v.size() == d) {
        return BandwidthMatrix::diagonal(Eigen::Map<const Eigen::VectorXd>(v.data(), dimension));
    }
    if (v.size() == d * d) {
        return BandwidthMatrix::full(
            Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
                v.data(), dimension, dimension));
    }
    throw InvalidInput("bandwidth needs 1, d or d*d entries, got " + std::to_string(v.size()));
}

BandwidthMode parse_bandwidth_mode(const std::string& text, int dimension) {
    CvConfig cv;
    if (text == "cv-diag") {
        cv.matrix_kind = MatrixKind::diagonal;
        return cv;
    }
    if (text == "cv-scalar") {
        cv.matrix_kind = MatrixKind::scalar;
        return cv;
    }
    if (text == "cv-full") {
        cv.matrix_kind = MatrixKind::full;
        return cv;
    }
    if (text.rfind("fixed:", 0) == 0) {
        return parse_bandwidth_entries(text.substr(6), dimension);
    }
    throw InvalidInput("bandwidth must be fixed:<entries>, cv-diag, cv-scalar or cv-full; got '" + text + "'");
}

std::string bandwidth_mode_name(const BandwidthMode& mode) {
    if (const auto* cv = std::get_if<CvConfig>(&mode)) {
        switch (cv->matrix_kind) {
        case MatrixKind::scalar:
            return "cv-scalar";
        case MatrixKind::diagonal:
            return "cv-diag";
        case MatrixKind::full:
            return "cv-full";
        }
    }
    return "fixed";
}

StudyConfig parse_study_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t[0] == '#') {
            continue;
        }
        const auto eq = t.find('=');
        if (eq == std::string::npos) {
            throw ParseError(line_no, "expected key = value");
        }
        kv[trim(t.substr(0, eq))] = trim(t.substr(eq + 1));
    }

    StudyConfig c;
    std::string mode = "cv-diag";
    std::optional<std::string> fixed;
    std::optional<int> grid_per_axis;
    std::optional<int> max_iterations;
    std::optional<double> tolerance;
    std::optional<double> grid_low;
    std::optional<double> grid_high;
    for (const auto& [key, value] : kv) {
        if (key == "model") {
            c.model = StudyModel::builtin(parse_model_kind(value));
        } else if (key == "n") {
            c.n = parse_value<std::size_t>(key, value);
        } else if (key == "kappa") {
            c.kappa = parse_value<double>(key, value);
        } else if (key == "replicates") {
            c.replicates = parse_value<std::size_t>(key, value);
        } else if (key == "degree") {
            c.degree = parse_value<int>(key, value);
        } else if (key == "kernel") {
            c.kernel = parse_kernel_family(value);
        } else if (key == "seed") {
            c.seed = parse_value<std::uint64_t>(key, value);
        } else if (key == "eval_grid") {
            c.eval_grid = parse_value<int>(key, value);
        } else if (key == "threads") {
            c.threads = parse_value<unsigned>(key, value);
        } else if (key == "bandwidth.mode") {
            mode = value;
        } else if (key == "bandwidth.fixed") {
            fixed = value;
        } else if (key == "bandwidth.grid_per_axis") {
            grid_per_axis = parse_value<int>(key, value);
        } else if (key == "bandwidth.max_iterations") {
            max_iterations = parse_value<int>(key, value);
        } else if (key == "bandwidth.grid_low") {
            grid_low = parse_value<double>(key, value);
        } else if (key == "bandwidth.grid_high") {
            grid_high = parse_value<double>(key, value);
        } else if (key == "bandwidth.tolerance") {
            tolerance = parse_value<double>(key, value);
        } else {
            throw InvalidInput("unknown config key '" + key + "'");
        }
    }
    if (mode == "fixed") {
        if (!fixed) {
            throw InvalidInput("bandwidth.mode = fixed needs bandwidth.fixed");
        }
        c.bandwidth = parse_bandwidth_entries(*fixed, c.dimension());
    } else {
        c.bandwidth = parse_bandwidth_mode(mode, c.dimension());
        auto& cv = std::get<CvConfig>(c.bandwidth);
        if (grid_per_axis) {
            cv.grid_per_axis = *grid_per_axis;
        }
        if (max_iterations) {
            cv.max_iterations = *max_iterations;
        }
        if (tolerance) {
            cv.simplex_tolerance = *tolerance;
        }
        if (grid_low) {
            cv.grid_low = *grid_low;
        }
        if (grid_high) {
            cv.grid_high = *grid_high;
        }
    }
    c.validate();
    return c;
}

void write_study_csv(const StudyReport& report, int dimension, std::ostream& out) {
    out << "replicate,ok,case,undefined";
    for (int r = 1; r <= dimension; ++r) {
        for (int c = 1; c <= dimension; ++c) {
            out << ",h_" << r << '_' << c;
        }
    }
    out << '\n';
    for (std::size_t i = 0; i < report.replicates.size(); ++i) {
        const ReplicateResult& rep = report.replicates[i];
        out << i << ',' << (rep.ok ? 1 : 0) << ',' << (rep.ok ? format_double(rep.case_value) : "") << ','
            << rep.undefined;
        for (int r = 0; r < dimension; ++r) {
            for (int c = 0; c < dimension; ++c) {
                out << ',' << (rep.ok ? format_double(rep.bandwidth(r, c)) : "");
            }
        }
        out << '\n';
    }
}

std::string study_summary_json(const StudyConfig& config, const StudyReport& report) {
    nlohmann::ordered_json j;
    j["model"] = config.model.name();
    j["n"] = config.n;
    j["kappa"] = config.kappa;
    j["replicates"] = config.replicates;
    j["degree"] = config.degree;
    j["kernel"] = std::string(to_string(config.kernel));
    j["bandwidth_mode"] = bandwidth_mode_name(config.bandwidth);
    j["seed"] = config.seed;
    j["eval_grid"] = config.eval_grid;
    j["mean_case"] = report.mean_case;
    j["failed_replicates"] = report.failed;
    j["per_replicate_case"] = report.per_replicate_case;
    if (report.pointwise) {
        j["mean_eval_case"] = report.mean_eval_case;
    }
    return j.dump(2) + "\n";
}

void write_pointwise_csv(const StudyReport& report, std::ostream& out) {
    if (!report.pointwise || report.pointwise->empty()) {
        return;
    }
    const auto d = report.pointwise->front().x.size();
    for (Eigen::Index k = 1; k <= d; ++k) {
        out << 'x' << k << ',';
    }
    out << "truth,cb,cvar,cmse,used,excluded\n";
    for (const PointwiseCell& cell : *report.pointwise) {
        for (Eigen::Index k = 0; k < d; ++k) {
            out << format_double(cell.x(k)) << ',';
        }
        out << format_double(cell.truth.value()) << ',' << format_double(cell.metrics.cb) << ','
            << format_double(cell.metrics.cvar) << ',' << format_double(cell.metrics.cmse) << ','
            << cell.metrics.used << ',' << cell.metrics.excluded << '\n';
    }
}

} // namespace circreg
