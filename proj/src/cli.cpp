#include "krylov/cli.hpp"

#include <CLI11.hpp>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <json.hpp>
#include <set>

#include "krylov/error.hpp"
#include "krylov/io.hpp"
#include "krylov/presets.hpp"

namespace krylov {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

const std::vector<std::string> kParamNames = {"j",  "alpha", "gamma", "delta", "omega0", "omega",  "b0",  "eta",  "f0",
                                              "g",  "h",     "eta0",  "tau",   "g1",     "g2",     "period", "chi", "k_max"};
const std::set<std::string> kGlobalNames = {"output", "format", "plot", "tol", "threads", "config"};
const std::set<std::string> kSubcommands = {"repro", "run", "sweep", "lanczos"};

std::string flag_of(const std::string& name) {
    std::string f = name;
    std::replace(f.begin(), f.end(), '_', '-');
    return "--" + f;
}

struct Globals {
    std::string output;
    std::string format;
    std::string plot;
    double tol = 1e-8;
    int threads = 0;
    std::string config;
};

struct ModelFlags {
    std::string family;
    std::map<std::string, double> params;
    int truncation = 0;
    double t_start = 0.0;
    double t_end = 10.0;
    int samples = 1001;
    std::string method = "closed";
    bool probabilities = false;
    int cost_exponent = 1;
};

void add_model_flags(CLI::App* sub, ModelFlags& m) {
    sub->add_option("--family", m.family, "su2-static|su2-driven|su2-damped|su2-kicked|h1|su11|quench|su3")->required();
    for (const auto& name : kParamNames) {
        sub->add_option(flag_of(name), m.params[name], "model parameter " + name);
    }
    sub->add_option("--truncation", m.truncation, "Fock truncation for h1/su11/quench (0 = automatic)");
    sub->add_option("--t-start", m.t_start, "first time sample");
    sub->add_option("--t-end", m.t_end, "last time sample");
    sub->add_option("--samples", m.samples, "number of time samples");
    sub->add_option("--method", m.method, "closed|numeric|both")->check(CLI::IsMember({"closed", "numeric", "both"}));
    sub->add_flag("--probabilities", m.probabilities, "emit Krylov level probabilities p0..pN");
    sub->add_option("--cost-exponent", m.cost_exponent, "cost weights c_n = n^k")->check(CLI::IsMember({1, 2}));
}

ModelSpec build_spec(const CLI::App* sub, const ModelFlags& m) {
    ModelSpec spec;
    spec.family = parse_family(m.family);
    for (const auto& name : kParamNames) {
        if (sub->count(flag_of(name)) > 0) spec.params[name] = m.params.at(name);
    }
    spec.truncation = m.truncation;
    if (m.truncation < 0) throw InvalidModel("truncation must be non-negative");
    spec.validate();
    return spec;
}

std::vector<double> build_grid(const ModelSpec& spec, const ModelFlags& m) {
    if (spec.family == Family::SU2Kicked && spec.params.count("k_max")) {
        const double k_max = spec.get("k_max");
        if (!(k_max >= 1.0) || k_max != std::floor(k_max) || k_max > 1e6) {
            throw InvalidModel("k_max must be a positive integer");
        }
        std::vector<double> t;
        for (int k = 0; k <= static_cast<int>(k_max); ++k) t.push_back(k * spec.get("period"));
        return t;
    }
    if (!(m.t_end > m.t_start)) throw InvalidModel("empty time range: t-end must exceed t-start");
    if (m.samples < 2) throw InvalidModel("samples must be at least 2");
    if (m.t_start < 0.0) throw InvalidModel("t-start must be non-negative");
    return linear_grid(m.t_start, m.t_end, m.samples);
}

RunOptions build_options(const ModelFlags& m, const Globals& g) {
    RunOptions opt;
    opt.method = parse_method(m.method);
    opt.tol = g.tol;
    opt.probabilities = m.probabilities;
    opt.cost_exponent = m.cost_exponent;
    return opt;
}

void emit(const std::string& text, const std::string& path, std::ostream& out) {
    if (path.empty()) out << text;
    else write_text(path, text);
}

// Plotting never changes the exit code.
void try_plot(const std::string& path, const std::string& svg, std::ostream& err) {
    try {
        write_text(path, svg);
    } catch (const Error& e) {
        err << "warning: plot not written: " << e.what() << "\n";
    }
}

std::string json_token(const std::string& key, const json& v) {
    if (v.is_number_integer()) return std::to_string(v.get<long long>());
    if (v.is_number()) return format_double(v.get<double>());
    if (v.is_string()) return v.get<std::string>();
    throw InvalidModel("config key '" + key + "' must be a number, string or boolean");
}

// Expands the flat JSON config into flag tokens placed ahead of the command
// line ones, so explicit flags win under the take-last policy.
std::vector<std::string> with_config(const std::vector<std::string>& args) {
    std::string path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size()) path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0) path = args[i].substr(9);
    }
    if (path.empty()) return args;
    const json cfg = json::parse(read_text(path));
    if (!cfg.is_object()) throw InvalidModel("config file must hold a flat JSON object");

    std::vector<std::string> global, local;
    for (const auto& [key, value] : cfg.items()) {
        std::string name = key;
        std::replace(name.begin(), name.end(), '-', '_');
        auto& dst = kGlobalNames.count(name) ? global : local;
        if (name == "config") continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) dst.push_back(flag_of(name));
            continue;
        }
        dst.push_back(flag_of(name));
        dst.push_back(json_token(key, value));
    }
    auto sub = std::find_if(args.begin(), args.end(), [](const std::string& a) { return kSubcommands.count(a) > 0; });
    std::vector<std::string> out = global;
    out.insert(out.end(), args.begin(), sub);
    if (sub != args.end()) {
        out.push_back(*sub);
        out.insert(out.end(), local.begin(), local.end());
        out.insert(out.end(), sub + 1, args.end());
    }
    return out;
}

int cmd_run(const CLI::App* sub, const ModelFlags& m, const Globals& g, std::ostream& out, std::ostream& err) {
    const ModelSpec spec = build_spec(sub, m);
    const auto grid = build_grid(spec, m);
    const RunOptions opt = build_options(m, g);
    const ComplexityTrace tr = run_model(spec, grid, opt);
    emit(g.format == "json" ? trace_json(spec, tr) : trace_csv(tr), g.output, out);
    if (!g.plot.empty()) {
        std::vector<Series> s = {{"C(t)", tr.C}};
        try_plot(g.plot, svg_plot(std::string(family_name(spec.family)) + " Krylov complexity", "t", tr.t, s), err);
    }
    auto bad = check_invariants(spec, tr, g.tol);
    if (opt.method == Method::Both && tr.max_route_deviation > kRouteTolerance) {
        bad.push_back("route deviation " + format_double(tr.max_route_deviation) + " exceeds " +
                      format_double(kRouteTolerance));
    }
    for (const auto& b : bad) err << "invariant violation: " << b << "\n";
    return bad.empty() ? 0 : 2;
}

int cmd_repro(std::vector<std::string> ids, const Globals& g, std::ostream& out, std::ostream& err) {
    if (ids.size() == 1 && ids[0] == "all") {
        ids.clear();
        for (const auto& p : figure_presets()) ids.push_back(p.id);
    }
    for (const auto& id : ids) find_preset(id);
    const fs::path dir = g.output.empty() ? fs::path(".") : fs::path(g.output);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (!fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir.string() + "'");
    const bool plot_dir = !g.plot.empty() && (ids.size() > 1 || fs::is_directory(g.plot) || g.plot.back() == '/');
    if (plot_dir) fs::create_directories(g.plot, ec);

    const std::string ext = g.format == "json" ? ".json" : ".csv";
    int code = 0;
    for (const auto& id : ids) {
        const FigurePreset& p = find_preset(id);
        PresetOutcome o;
        try {
            o = run_preset(p, g.tol);
        } catch (const Error& e) {
            out << id << " FAIL " << e.kind() << ": " << e.what() << "\n";
            code = std::max(code, 2);
            continue;
        }
        write_text((dir / (id + ext)).string(), g.format == "json" ? trace_json(p.spec, o.trace) : trace_csv(o.trace));
        if (!g.plot.empty()) {
            const std::string path = plot_dir ? (fs::path(g.plot) / (id + ".svg")).string() : g.plot;
            try_plot(path, svg_plot(id + ": " + p.caption, "t", o.trace.t, {{"C(t)", o.trace.C}}), err);
        }
        for (const auto& c : o.checks) {
            out << id << (c.passed ? " PASS " : " FAIL ") << c.name << ": " << c.detail << "\n";
        }
        if (!o.passed()) code = 2;
    }
    return code;
}

struct SweepFlags {
    std::string x_param, y_param;
    double x_lo = 0.0, x_hi = 0.0, y_lo = 0.0, y_hi = 0.0;
    int x_n = 1, y_n = 1;
    std::string stat = "max";
};

int cmd_sweep(const CLI::App* sub, const ModelFlags& m, const SweepFlags& s, const Globals& g, std::ostream& out,
              std::ostream& err) {
    const ModelSpec base = build_spec(sub, m);
    const auto grid = build_grid(base, m);
    const RunOptions opt = build_options(m, g);
    if (s.x_n < 1 || s.y_n < 1) throw InvalidModel("sweep axes need at least one point");
    const SweepAxis x{s.x_param, s.x_lo, s.x_hi, s.x_n};
    const SweepAxis y{s.y_param, s.y_lo, s.y_hi, s.y_n};
    const SweepResult r = sweep(base, x, y, grid, s.stat == "final" ? SweepStat::CFinal : SweepStat::CMax, opt);
    const bool regime = base.family == Family::SU11TwoMode;
    emit(g.format == "json" ? sweep_json(base, r, regime) : sweep_csv(r, regime), g.output, out);
    if (!g.plot.empty()) {
        std::vector<double> values;
        for (const auto& c : r.cells) values.push_back(c.value);
        try_plot(g.plot, svg_heatmap(std::string(family_name(base.family)) + " sweep", x, y, values), err);
    }
    std::size_t failed = 0;
    for (const auto& c : r.cells) failed += c.error.empty() ? 0 : 1;
    if (failed) err << "warning: " << failed << " of " << r.cells.size() << " cells failed\n";
    return 0;
}

Vector read_vector(const json& j, std::size_t dim, const std::string& what) {
    if (!j.contains("re") || !j["re"].is_array()) throw InvalidModel(what + ": missing \"re\" array");
    const auto re = j["re"].get<std::vector<double>>();
    const auto im = j.contains("im") ? j["im"].get<std::vector<double>>() : std::vector<double>(re.size(), 0.0);
    if (re.size() != dim || im.size() != dim) throw InvalidModel(what + ": expected " + std::to_string(dim) + " entries");
    Vector v(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) v[static_cast<Eigen::Index>(k)] = cplx(re[k], im[k]);
    return v;
}

int cmd_lanczos(const std::string& matrix_file, const std::string& seed_file, const std::string& method,
                const Globals& g, std::ostream& out) {
    const json mj = json::parse(read_text(matrix_file));
    if (!mj.contains("dim") || !mj["dim"].is_number_integer() || mj["dim"].get<long long>() < 1) {
        throw InvalidModel("matrix file: \"dim\" must be a positive integer");
    }
    const auto dim = static_cast<std::size_t>(mj["dim"].get<long long>());
    const Vector flat = read_vector(mj, dim * dim, "matrix file");
    Matrix h(dim, dim);
    for (std::size_t r = 0; r < dim; ++r)
        for (std::size_t c = 0; c < dim; ++c) h(r, c) = flat[static_cast<Eigen::Index>(r * dim + c)];
    Vector seed = Vector::Zero(static_cast<Eigen::Index>(dim));
    seed[0] = 1.0;
    if (!seed_file.empty()) seed = read_vector(json::parse(read_text(seed_file)), dim, "seed file");

    TridiagonalData td;
    if (method == "moments") {
        td = lanczos_from_moments(moments(h, seed, static_cast<int>(2 * dim - 1)));
    } else {
        td = tridiagonalize(h, seed);
    }
    std::string text;
    if (g.format == "csv") {
        text = "n,a,b\n";
        for (std::size_t n = 0; n < td.a.size(); ++n) {
            text += std::to_string(n) + "," + format_double(td.a[n]) + "," +
                    (n < td.b.size() ? format_double(td.b[n]) : std::string()) + "\n";
        }
    } else {
        text = lanczos_json(td, method, method == "direct");
    }
    emit(text, g.output, out);
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& raw_args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Krylov spread complexity for su(2), h(1), su(1,1) and su(3) optical Hamiltonians", "krylov"};
    app.option_defaults()->multi_option_policy(CLI::MultiOptionPolicy::TakeLast);
    app.require_subcommand(1);
    app.fallthrough();
    // Long form only: --h is a model parameter.
    app.set_help_flag("--help", "print this help message and exit");

    Globals g;
    app.add_option("--output", g.output, "output file (repro: output directory)");
    app.add_option("--format", g.format, "csv|json")->check(CLI::IsMember({"csv", "json"}));
    app.add_option("--plot", g.plot, "write an SVG plot to this path (repro: file or directory)");
    app.add_option("--tol", g.tol, "invariant tolerance")->check(CLI::PositiveNumber);
    app.add_option("--threads", g.threads, "worker threads, 0 = all")->check(CLI::NonNegativeNumber);
    app.add_option("--config", g.config, "flat JSON object of flag values; explicit flags win");

    std::vector<std::string> ids;
    auto* repro = app.add_subcommand("repro", "reproduce figure presets (ids or 'all') with both routes");
    repro->add_option("figure_id", ids, "figure ids")->required();

    ModelFlags run_flags;
    auto* run = app.add_subcommand("run", "evaluate one model on a time grid");
    add_model_flags(run, run_flags);

    ModelFlags sweep_flags;
    SweepFlags sf;
    auto* sw = app.add_subcommand("sweep", "evaluate a summary statistic over a two-parameter grid");
    add_model_flags(sw, sweep_flags);
    sw->add_option("--x-param", sf.x_param, "first swept parameter")->required();
    sw->add_option("--x-lo", sf.x_lo)->required();
    sw->add_option("--x-hi", sf.x_hi)->required();
    sw->add_option("--x-n", sf.x_n)->required();
    sw->add_option("--y-param", sf.y_param, "second swept parameter")->required();
    sw->add_option("--y-lo", sf.y_lo)->required();
    sw->add_option("--y-hi", sf.y_hi)->required();
    sw->add_option("--y-n", sf.y_n)->required();
    sw->add_option("--stat", sf.stat, "max|final")->check(CLI::IsMember({"max", "final"}));

    std::string matrix_file, seed_file, lmethod = "direct";
    auto* lz = app.add_subcommand("lanczos", "Lanczos coefficients of a Hermitian matrix");
    lz->add_option("--matrix", matrix_file, "JSON with dim, re, im (row-major)")->required();
    lz->add_option("--seed", seed_file, "JSON with re, im (default e0)");
    lz->add_option("--method", lmethod, "moments|direct")->check(CLI::IsMember({"moments", "direct"}));

    try {
        std::vector<std::string> args = with_config(raw_args);
        std::vector<char*> argv;
        std::string prog = "krylov";
        argv.push_back(prog.data());
        for (auto& a : args) argv.push_back(a.data());
        try {
            app.parse(static_cast<int>(argv.size()), argv.data());
        } catch (const CLI::ParseError& e) {
            return app.exit(e, out, err) == 0 ? 0 : 1;
        }
        set_thread_count(g.threads);
        if (app.got_subcommand(repro)) return cmd_repro(ids, g, out, err);
        if (app.got_subcommand(run)) return cmd_run(run, run_flags, g, out, err);
        if (app.got_subcommand(sw)) return cmd_sweep(sw, sweep_flags, sf, g, out, err);
        return cmd_lanczos(matrix_file, seed_file, lmethod, g, out);
    } catch (const Error& e) {
        err << (e.exit_code() == 1 ? "usage error: " : "error: ") << e.kind() << ": " << e.what() << "\n";
        return e.exit_code();
    } catch (const json::exception& e) {
        err << "usage error: invalid JSON: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace krylov
