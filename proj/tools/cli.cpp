#include "cli.hpp"

#include "hypdim/dimension.hpp"
#include "hypdim/error.hpp"
#include "hypdim/model_json.hpp"
#include "hypdim/pressure.hpp"
#include "hypdim/serialize.hpp"
#include "hypdim/symbolic.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <regex>
#include <sstream>

namespace hypdim::cli {

namespace {

using nlohmann::json;

constexpr int kMaxSweepRows = 1000;

struct Config {
    std::string command;
    std::string model_spec;
    std::string model_file;
    std::string potential;
    std::string method = "spectral";
    std::optional<double> eps;
    std::optional<double> delta;
    std::optional<int> kmax;
    std::optional<int> kmin;
    std::optional<int> grid;
    std::string scales;
    std::string set = "invariant";
    int depth = 10;
    int s_kmax = 8;
    std::uint64_t seed = 0;
    bool jitter = false;
    int threads = 1;
    std::string out;
    std::string csv;
    std::string plot_data;
    std::string summary;
    bool check_srb = false;
    std::string sweep;
    std::optional<double> target_dim;
    std::optional<double> tol;
    bool require_verdict = false;
};

/// Files are written only after every computation succeeded, each through a temporary and a rename.
struct PendingWrites {
    std::vector<std::pair<std::string, std::string>> files;

    void add(const std::string& path, std::string content) {
        if (!path.empty()) files.emplace_back(path, std::move(content));
    }

    void commit() const {
        for (const auto& [path, content] : files) {
            const std::filesystem::path target(path);
            std::filesystem::path tmp = target;
            tmp += ".tmp";
            {
                std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
                if (!f) throw Error(ErrorCode::ParameterOutOfRange, "cannot write " + tmp.string());
                f << content;
                f.flush();
                if (!f) {
                    std::error_code ec;
                    std::filesystem::remove(tmp, ec);
                    throw Error(ErrorCode::ParameterOutOfRange, "failed writing " + tmp.string());
                }
            }
            std::error_code ec;
            std::filesystem::rename(tmp, target, ec);
            if (ec) {
                std::filesystem::remove(tmp, ec);
                throw Error(ErrorCode::ParameterOutOfRange, "cannot rename onto " + target.string());
            }
        }
    }
};

std::vector<double> parse_numbers(const std::string& text, char sep) {
    std::vector<double> values;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, sep)) {
        std::size_t used = 0;
        double v = 0.0;
        try {
            v = std::stod(item, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used == 0 || used != item.size()) throw Error(ErrorCode::ParameterOutOfRange, "bad number '" + item + "'");
        values.push_back(v);
    }
    return values;
}

std::vector<int> parse_kept_digits(const std::string& text) {
    std::vector<int> kept;
    if (text.find('/') != std::string::npos) {
        for (double v : parse_numbers(text, '/')) kept.push_back(static_cast<int>(v));
        return kept;
    }
    for (char c : text) {
        if (c < '0' || c > '9') throw Error(ErrorCode::ParameterOutOfRange, "cantor digits must be 0-9");
        kept.push_back(c - '0');
    }
    return kept;
}

bool is_integer(double v) { return std::floor(v) == v; }

json provenance(const Config& cfg, double tolerance) {
    json config = {{"command", cfg.command}};
    if (!cfg.model_spec.empty()) config["model"] = cfg.model_spec;
    if (!cfg.model_file.empty()) config["model_file"] = cfg.model_file;
    if (!cfg.potential.empty()) config["potential"] = cfg.potential;
    if (cfg.command == "pressure") config["method"] = cfg.method;
    if (cfg.eps) config["eps"] = *cfg.eps;
    if (cfg.delta) config["delta"] = *cfg.delta;
    if (cfg.kmax) config["kmax"] = *cfg.kmax;
    if (cfg.kmin) config["kmin"] = *cfg.kmin;
    if (cfg.grid) config["grid"] = *cfg.grid;
    if (!cfg.scales.empty()) config["scales"] = cfg.scales;
    if (cfg.command == "dimension" || cfg.command == "report") {
        config["set"] = cfg.set;
        config["depth"] = cfg.depth;
    }
    config["s_kmax"] = cfg.s_kmax;
    config["seed"] = cfg.seed;
    config["jitter"] = cfg.jitter;
    if (!cfg.out.empty()) config["out"] = cfg.out;
    if (!cfg.csv.empty()) config["csv"] = cfg.csv;
    if (!cfg.plot_data.empty()) config["plot_data"] = cfg.plot_data;
    if (!cfg.summary.empty()) config["summary"] = cfg.summary;
    config["check_srb"] = cfg.check_srb;
    if (!cfg.sweep.empty()) config["sweep"] = cfg.sweep;
    if (cfg.target_dim) config["target_dim"] = *cfg.target_dim;
    config["require_verdict"] = cfg.require_verdict;
    return {{"tool", "hypdim"},
            {"version", HYPDIM_VERSION},
            {"config", config},
            {"tolerances",
             {{"exact", kExactTolerance}, {"estimator", kEstimatorTolerance}, {"classification", tolerance}}},
            {"caps",
             {{"word_bits", kWordCapBits},
              {"grid_cells", 1ULL << 28},
              {"max_dim", kMaxDim},
              {"excluded_coarse_scales", kExcludedCoarseScales}}}};
}

ModelSystem load_model(const Config& cfg, const char* fallback = nullptr) {
    if (!cfg.model_spec.empty() && !cfg.model_file.empty()) {
        throw Error(ErrorCode::ParameterOutOfRange, "use either --model or --model-file");
    }
    if (!cfg.model_file.empty()) return load_model_file(cfg.model_file);
    if (!cfg.model_spec.empty()) return parse_model_spec(cfg.model_spec);
    if (fallback != nullptr) return parse_model_spec(fallback);
    throw Error(ErrorCode::ParameterOutOfRange, "a model is required (--model or --model-file)");
}

std::optional<PotentialLabel> parse_label(const std::string& text) {
    if (text.empty()) return std::nullopt;
    if (text == "phi_u") return PotentialLabel::PhiU;
    if (text == "phi_s") return PotentialLabel::PhiS;
    if (text == "phi") return PotentialLabel::Phi;
    throw Error(ErrorCode::ParameterOutOfRange, "unknown potential '" + text + "'");
}

PotentialLabel default_label(const ModelSystem& model) {
    return model.kind() == MapKind::Diffeomorphism ? PotentialLabel::PhiU : PotentialLabel::Phi;
}

Potential resolve_potential(const ModelSystem& model, const std::string& text) {
    if (text == "zero") return zero_potential(model);
    const auto label = parse_label(text);
    return potential(model, label.value_or(default_label(model)));
}

struct ScaleSpec {
    double base;
    int m_lo;
    int m_hi;
};

ScaleSpec parse_scales(const std::string& text) {
    static const std::regex pattern(R"(^\s*([0-9]+(?:\.[0-9]+)?)\^-([0-9]+)\s*\.\.\s*([0-9]+(?:\.[0-9]+)?)\^-([0-9]+)\s*$)");
    std::smatch m;
    if (!std::regex_match(text, m, pattern)) {
        throw Error(ErrorCode::ParameterOutOfRange, "scales must look like 3^-2..3^-9");
    }
    const double base = std::stod(m[1].str());
    if (std::stod(m[3].str()) != base) throw Error(ErrorCode::ParameterOutOfRange, "scale bases differ");
    return {base, std::stoi(m[2].str()), std::stoi(m[4].str())};
}

int floor_log2(int v) {
    int r = 0;
    while ((2 << r) <= v) ++r;
    return r;
}

struct MeasuredDimension {
    std::string set;
    DimensionEstimate estimate;
    std::size_t points = 0;
};

MeasuredDimension measure_dimension(const ModelSystem& model, const Config& cfg, const std::string& set) {
    MeasuredDimension result;
    result.set = set;
    std::vector<ScaleCount> counts;
    if (set == "invariant") {
        const ScaleSpec spec = cfg.scales.empty() ? ScaleSpec{2.0, 1, 10} : parse_scales(cfg.scales);
        const auto scales = geometric_scales(spec.base, spec.m_lo, spec.m_hi);
        const auto cover = RepellerCover::finer_than(model, scales.back() / 4.0);
        result.points = cover.rects().size();
        for (double s : scales) counts.push_back({s, box_count(cover, s)});
    } else if (set == "stable") {
        StableSetOptions options;
        options.epsilon = cfg.eps.value_or(0.05);
        options.depth = cfg.depth;
        options.resolution = cfg.grid.value_or(2048);
        options.threads = cfg.threads;
        options.jitter = cfg.jitter;
        options.seed = cfg.seed;
        const ScaleSpec spec =
            cfg.scales.empty() ? ScaleSpec{2.0, 1, floor_log2(options.resolution) - 1} : parse_scales(cfg.scales);
        const auto scales = geometric_scales(spec.base, spec.m_lo, spec.m_hi);
        if (scales.back() < 1.0 / options.resolution) {
            throw Error(ErrorCode::GridTooCoarse, "finest scale is below the sampling grid spacing");
        }
        const auto cloud = sample_local_stable_set(model, options);
        result.points = cloud.size();
        for (double s : scales) counts.push_back({s, box_count(cloud, model.dim(), s)});
    } else {
        throw Error(ErrorCode::ParameterOutOfRange, "--set must be 'invariant' or 'stable'");
    }
    result.estimate = box_dimension(counts);
    return result;
}

json dimension_json(const MeasuredDimension& m) {
    json doc = to_json(m.estimate);
    doc["set"] = m.set;
    doc[m.set == "stable" ? "cloud_points" : "cover_rectangles"] = m.points;
    return doc;
}

int verdict_exit(bool demanded, Classification c) {
    return demanded && c == Classification::Inconclusive ? kInconclusive : kOk;
}

void emit(const Config& cfg, const json& doc, PendingWrites& writes, std::ostream& out) {
    std::string text = doc.dump(2) + "\n";
    if (cfg.out.empty()) {
        writes.commit();
        out << text;
    } else {
        writes.add(cfg.out, std::move(text));
        writes.commit();
    }
}

int cmd_pressure(const Config& cfg, std::ostream& out) {
    const ModelSystem model = load_model(cfg);
    const Potential pot = resolve_potential(model, cfg.potential);
    PendingWrites writes;
    PressureEstimate estimate;
    json result;
    double tol = kExactTolerance;
    if (cfg.method == "spectral") {
        estimate = pressure_spectral_estimate(model, pot);
    } else if (cfg.method == "partition") {
        const int kmax = cfg.kmax.value_or(12);
        estimate = pressure_from_partition_sums(model, pot, kmax, cfg.delta);
        writes.add(cfg.csv, partition_curve_csv(estimate));
    } else if (cfg.method == "volume") {
        if (!cfg.potential.empty() && pot.label != default_label(model)) {
            throw Error(ErrorCode::IncompatibleLabel, "volume growth estimates the pressure of the geometric potential");
        }
        const int kmax = cfg.kmax.value_or(10);
        const int kmin = cfg.kmin.value_or(1);
        const int grid = cfg.grid.value_or(model.dim() == 1 ? 4096 : 2048);
        const auto curve = volume_curve(model, cfg.eps.value_or(default_volume_epsilon(model)), kmax, grid, cfg.threads);
        estimate = pressure_from_volume_growth(curve, kmin, kmax);
        result["volume_curve"] = to_json(curve);
        writes.add(cfg.csv, volume_curve_csv(curve));
        tol = kEstimatorTolerance;
    } else {
        throw Error(ErrorCode::ParameterOutOfRange, "--method must be spectral, partition or volume");
    }
    tol = cfg.tol.value_or(tol);
    const Classification verdict = classify(estimate, tol);
    result["estimate"] = to_json(estimate);
    result["model"] = model.name();
    result["potential"] = pot.label == PotentialLabel::Custom ? std::string("zero") : to_string(pot.label);
    result["classification"] = to_string(verdict);
    json doc = {{"provenance", provenance(cfg, tol)}, {"result", result}};
    doc["provenance"]["model_definition"] = model_to_json(model);
    emit(cfg, doc, writes, out);
    return verdict_exit(cfg.require_verdict, verdict);
}

BoundReport make_bound_report(const ModelSystem& model, const Config& cfg, double tol) {
    const auto label = parse_label(cfg.potential);
    if (cfg.check_srb) {
        if (label && *label != default_label(model)) {
            throw Error(ErrorCode::IncompatibleLabel, "the equivalence report uses the default potential");
        }
        return srb_equivalence_report(model, tol);
    }
    return bound_report(model, label, cfg.s_kmax, tol);
}

int cmd_bound(const Config& cfg, std::ostream& out) {
    const ModelSystem model = load_model(cfg);
    const double tol = cfg.tol.value_or(kExactTolerance);
    const BoundReport report = make_bound_report(model, cfg, tol);
    PendingWrites writes;
    json doc = {{"provenance", provenance(cfg, tol)}, {"result", to_json(report)}};
    doc["provenance"]["model_definition"] = model_to_json(model);
    emit(cfg, doc, writes, out);
    return verdict_exit(cfg.require_verdict, report.classification);
}

int cmd_dimension(const Config& cfg, std::ostream& out) {
    const ModelSystem model = load_model(cfg);
    const MeasuredDimension measured = measure_dimension(model, cfg, cfg.set);
    PendingWrites writes;
    writes.add(cfg.csv, dimension_csv(measured.estimate));
    json result = dimension_json(measured);
    result["model"] = model.name();
    json doc = {{"provenance", provenance(cfg, kEstimatorTolerance)}, {"result", result}};
    doc["provenance"]["model_definition"] = model_to_json(model);
    emit(cfg, doc, writes, out);
    return kOk;
}

struct ReportRow {
    ModelSystem model;
    std::optional<double> lambda_u;
    std::optional<double> lambda_s;
};

std::vector<ReportRow> report_rows(const Config& cfg) {
    std::vector<ReportRow> rows;
    if (!cfg.sweep.empty() && cfg.target_dim) {
        throw Error(ErrorCode::ParameterOutOfRange, "--sweep and --target-dim are exclusive");
    }
    if (!cfg.sweep.empty() || cfg.target_dim) {
        if (!cfg.model_file.empty()) throw Error(ErrorCode::ParameterOutOfRange, "sweeps need the horseshoe family");
        double lu = 3.0;
        double ls = 0.25;
        if (!cfg.model_spec.empty()) {
            const auto colon = cfg.model_spec.find(':');
            if (cfg.model_spec.substr(0, colon) != "horseshoe") {
                throw Error(ErrorCode::ParameterOutOfRange, "sweeps need the horseshoe family");
            }
            if (colon != std::string::npos) {
                const auto p = parse_numbers(cfg.model_spec.substr(colon + 1), ',');
                if (p.empty() || p.size() > 2) throw Error(ErrorCode::ParameterOutOfRange, "horseshoe:lambda_u[,lambda_s]");
                lu = p[0];
                if (p.size() == 2) ls = p[1];
            }
        }
        if (cfg.target_dim) {
            rows.push_back({horseshoe_for_target_dimension(*cfg.target_dim, ls), std::nullopt, ls});
            rows.back().lambda_u = std::pow(2.0, 1.0 / (*cfg.target_dim - 1.0));
            return rows;
        }
        static const std::regex pattern(R"(^(lambda_u|lambda_s)=([^:]+):([^:]+):([^:]+)$)");
        std::smatch m;
        if (!std::regex_match(cfg.sweep, m, pattern)) {
            throw Error(ErrorCode::ParameterOutOfRange, "--sweep must look like lambda_u=2.2:4.0:0.2");
        }
        const double a = parse_numbers(m[2].str(), ',').at(0);
        const double b = parse_numbers(m[3].str(), ',').at(0);
        const double step = parse_numbers(m[4].str(), ',').at(0);
        if (!(step > 0.0) || b < a) throw Error(ErrorCode::ParameterOutOfRange, "sweep needs a <= b and step > 0");
        const auto n = static_cast<long>(std::floor((b - a) / step + 1e-9)) + 1;
        if (n > kMaxSweepRows) throw Error(ErrorCode::CapExceeded, "sweep has too many rows");
        for (long i = 0; i < n; ++i) {
            const double v = a + static_cast<double>(i) * step;
            const double row_lu = m[1].str() == "lambda_u" ? v : lu;
            const double row_ls = m[1].str() == "lambda_s" ? v : ls;
            rows.push_back({build_linear_horseshoe(row_lu, row_ls), row_lu, row_ls});
        }
        return rows;
    }
    const ModelSystem model = load_model(cfg);
    std::optional<double> lu;
    std::optional<double> ls;
    if (model.name() == "horseshoe") {
        lu = model.lambda_u().front();
        ls = model.lambda_s().front();
    }
    rows.push_back({model, lu, ls});
    return rows;
}

std::string optional_text(const std::optional<double>& v) { return v ? format_double(*v) : std::string(""); }

std::string pad(std::string s, std::size_t width) {
    if (s.size() < width) s.insert(0, width - s.size(), ' ');
    return s;
}

std::string fixed(double v, int digits) {
    std::ostringstream os;
    os.imbue(std::locale::classic());
    os.setf(std::ios::fixed);
    os.precision(digits);
    os << v;
    return os.str();
}

int cmd_report(const Config& cfg, std::ostream& out, std::ostream& err) {
    const double tol = cfg.tol.value_or(kExactTolerance);
    const auto rows = report_rows(cfg);
    json row_docs = json::array();
    json reports = json::array();
    std::string table = pad("model", 10) + pad("lambda_u", 10) + pad("P", 12) + pad("s", 10) + pad("bound", 10) +
                        pad("measured", 10) + pad("set", 10) + "  classification\n";
    std::string csv = "model,lambda_u,lambda_s,pressure,s,bound,measured_dim,set,classification\n";
    std::string plot = "series,x,y\n";
    bool inconclusive = false;
    for (const auto& row : rows) {
        const BoundReport report = make_bound_report(row.model, cfg, tol);
        const std::string set = row.model.kind() == MapKind::Diffeomorphism ? "stable" : "invariant";
        const MeasuredDimension measured = measure_dimension(row.model, cfg, set);
        inconclusive = inconclusive || report.classification == Classification::Inconclusive;
        json r = {{"model", row.model.name()},
                  {"pressure", report.pressure.value},
                  {"s", report.s.value},
                  {"bound", report.bound},
                  {"measured_dimension", measured.estimate.slope},
                  {"dimension_residual", measured.estimate.residual},
                  {"set", set},
                  {"classification", to_string(report.classification)}};
        if (row.lambda_u) r["lambda_u"] = *row.lambda_u;
        if (row.lambda_s) r["lambda_s"] = *row.lambda_s;
        row_docs.push_back(r);
        json full = to_json(report);
        full["dimension"] = dimension_json(measured);
        reports.push_back(full);

        table += pad(row.model.name(), 10) + pad(row.lambda_u ? fixed(*row.lambda_u, 4) : "-", 10) +
                 pad(fixed(report.pressure.value, 6), 12) + pad(fixed(report.s.value, 4), 10) +
                 pad(fixed(report.bound, 6), 10) + pad(fixed(measured.estimate.slope, 4), 10) + pad(set, 10) + "  " +
                 to_string(report.classification) + "\n";
        csv += row.model.name() + "," + optional_text(row.lambda_u) + "," + optional_text(row.lambda_s) + "," +
               format_double(report.pressure.value) + "," + format_double(report.s.value) + "," +
               format_double(report.bound) + "," + format_double(measured.estimate.slope) + "," + set + "," +
               to_string(report.classification) + "\n";
        if (rows.size() > 1 && row.lambda_u) {
            plot += "bound," + format_double(*row.lambda_u) + "," + format_double(report.bound) + "\n";
            plot += "measured," + format_double(*row.lambda_u) + "," + format_double(measured.estimate.slope) + "\n";
        } else {
            for (const auto& c : measured.estimate.counts) {
                plot += "box_count," + format_double(-std::log(c.scale)) + "," +
                        format_double(std::log(static_cast<double>(c.count))) + "\n";
            }
        }
    }
    json doc = {{"provenance", provenance(cfg, tol)}, {"rows", row_docs}, {"reports", reports}};
    if (cfg.target_dim) {
        const auto& r = rows.front();
        doc["target"] = {{"target_dim", *cfg.target_dim},
                         {"lambda_u", *r.lambda_u},
                         {"lambda_s", *r.lambda_s},
                         {"t_u_plus_1", horseshoe_unstable_dimension(*r.lambda_u) + 1.0}};
    }
    PendingWrites writes;
    writes.add(cfg.csv, csv);
    writes.add(cfg.plot_data, plot);
    if (cfg.summary.empty()) {
        err << table;
    } else {
        writes.add(cfg.summary, table);
    }
    emit(cfg, doc, writes, out);
    return cfg.require_verdict && inconclusive ? kInconclusive : kOk;
}

void add_model_options(CLI::App* app, Config& cfg) {
    app->add_option("--model", cfg.model_spec, "Built-in model, name[:params]");
    app->add_option("--model-file", cfg.model_file, "JSON model file");
}

void add_output_options(CLI::App* app, Config& cfg) {
    app->add_option("--out", cfg.out, "Write the JSON document here instead of stdout");
    app->add_option("--csv", cfg.csv, "CSV side file");
    app->add_option("--tol", cfg.tol, "Classification tolerance")->check(CLI::PositiveNumber);
    app->add_flag("--require-verdict", cfg.require_verdict, "Exit 4 when the classification is inconclusive");
    app->add_option("--threads", cfg.threads, "Worker threads (results do not depend on this)")
        ->check(CLI::Range(1, 256));
    app->add_option("--seed", cfg.seed, "Seed for sampled computations");
}

void add_stable_options(CLI::App* app, Config& cfg) {
    app->add_option("--eps", cfg.eps, "Neighbourhood radius")->check(CLI::PositiveNumber);
    app->add_option("--depth", cfg.depth, "Orbit depth for stable-set sampling")->check(CLI::Range(1, 60000));
    app->add_option("--grid", cfg.grid, "Grid points per axis")->check(CLI::Range(1, 1 << 28));
    app->add_option("--scales", cfg.scales, "Box sizes, e.g. 3^-2..3^-9");
    app->add_flag("--jitter", cfg.jitter, "Seeded offsets inside grid cells");
}

}  // namespace

ModelSystem parse_model_spec(const std::string& spec) {
    const auto colon = spec.find(':');
    const std::string name = spec.substr(0, colon);
    const std::string params = colon == std::string::npos ? std::string() : spec.substr(colon + 1);
    if (colon != std::string::npos && params.empty()) throw Error(ErrorCode::ParameterOutOfRange, "empty parameters");
    if (name == "horseshoe") {
        const auto p = params.empty() ? std::vector<double>{3.0, 0.25} : parse_numbers(params, ',');
        if (p.empty() || p.size() > 2) throw Error(ErrorCode::ParameterOutOfRange, "horseshoe:lambda_u[,lambda_s]");
        return build_linear_horseshoe(p[0], p.size() == 2 ? p[1] : 0.25);
    }
    if (name == "doubling") {
        const auto p = params.empty() ? std::vector<double>{2.0} : parse_numbers(params, ',');
        if (p.size() != 1 || !is_integer(p[0])) throw Error(ErrorCode::ParameterOutOfRange, "doubling:d with integer d");
        return build_doubling_map(static_cast<int>(p[0]));
    }
    if (name == "cantor") {
        const std::string text = params.empty() ? std::string("3,02") : params;
        const auto comma = text.find(',');
        if (comma == std::string::npos) throw Error(ErrorCode::ParameterOutOfRange, "cantor:slope,digits");
        const auto slope = parse_numbers(text.substr(0, comma), ',');
        if (slope.size() != 1 || !is_integer(slope[0])) throw Error(ErrorCode::ParameterOutOfRange, "integer slope");
        return build_cantor_repeller(static_cast<int>(slope[0]), parse_kept_digits(text.substr(comma + 1)));
    }
    if (name == "catmap" && params.empty()) return build_cat_map();
    if (name == "golden" && params.empty()) return build_golden_map();
    throw Error(ErrorCode::ParameterOutOfRange, "unknown model '" + spec + "'");
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    Config cfg;
    CLI::App app{"Pressure, expansion rates and dimension estimates for hyperbolic model systems", "hypdim-cli"};
    app.require_subcommand(1);
    app.set_version_flag("--version", HYPDIM_VERSION);

    auto* pressure = app.add_subcommand("pressure", "Topological pressure of a potential");
    add_model_options(pressure, cfg);
    add_output_options(pressure, cfg);
    pressure->add_option("--potential", cfg.potential, "phi_u, phi_s, phi or zero");
    pressure->add_option("--method", cfg.method, "spectral, partition or volume");
    pressure->add_option("--eps", cfg.eps, "Neighbourhood radius (volume)")->check(CLI::PositiveNumber);
    pressure->add_option("--delta", cfg.delta, "Separation (partition)")->check(CLI::PositiveNumber);
    pressure->add_option("--kmax", cfg.kmax, "Largest orbit length")->check(CLI::Range(1, 60000));
    pressure->add_option("--kmin", cfg.kmin, "Smallest orbit length in the fit window (volume)")
        ->check(CLI::Range(1, 60000));
    pressure->add_option("--grid", cfg.grid, "Grid points per axis (volume)")->check(CLI::Range(1, 1 << 28));

    auto* bound = app.add_subcommand("bound", "Dimension bound n + P/s and attractor classification");
    add_model_options(bound, cfg);
    add_output_options(bound, cfg);
    bound->add_option("--potential", cfg.potential, "phi_u, phi_s or phi");
    bound->add_option("--s-kmax", cfg.s_kmax, "Orbit length for the expansion rate")->check(CLI::Range(1, 64));
    bound->add_flag("--check-srb", cfg.check_srb, "Add the attractor/SRB equivalence checks");

    auto* dimension = app.add_subcommand("dimension", "Box-counting dimension estimate");
    add_model_options(dimension, cfg);
    add_output_options(dimension, cfg);
    add_stable_options(dimension, cfg);
    dimension->add_option("--set", cfg.set, "invariant or stable");

    auto* report = app.add_subcommand("report", "Bound, measured dimension and classification per model");
    add_model_options(report, cfg);
    add_output_options(report, cfg);
    add_stable_options(report, cfg);
    report->add_option("--potential", cfg.potential, "phi_u, phi_s or phi");
    report->add_option("--s-kmax", cfg.s_kmax, "Orbit length for the expansion rate")->check(CLI::Range(1, 64));
    report->add_flag("--check-srb", cfg.check_srb, "Add the attractor/SRB equivalence checks");
    report->add_option("--sweep", cfg.sweep, "lambda_u=a:b:step or lambda_s=a:b:step (horseshoe family)");
    report->add_option("--target-dim", cfg.target_dim, "Synthesize a horseshoe with this bound");
    report->add_option("--plot-data", cfg.plot_data, "CSV of series,x,y rows");
    report->add_option("--summary", cfg.summary, "Write the text table here instead of stderr");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kOk : kInvalid;
    }

    try {
        if (pressure->parsed()) {
            cfg.command = "pressure";
            return cmd_pressure(cfg, out);
        }
        if (bound->parsed()) {
            cfg.command = "bound";
            return cmd_bound(cfg, out);
        }
        if (dimension->parsed()) {
            cfg.command = "dimension";
            return cmd_dimension(cfg, out);
        }
        cfg.command = "report";
        return cmd_report(cfg, out, err);
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return e.code() == ErrorCode::CapExceeded ? kCapExceeded : kInvalid;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kInvalid;
    }
}

}  // namespace hypdim::cli
