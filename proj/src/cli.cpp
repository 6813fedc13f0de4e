#include "rforge/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "rforge/report.hpp"

namespace rforge {

namespace {

using nlohmann::json;

constexpr double kFidelityTol = 1e-12;  // assembled vs printed components
constexpr double kOde7Tol = 1e-9;
constexpr double kEq2ndTol = 1e-8;   // eq27, eq29: pure jet arithmetic
constexpr double kEq3rdTol = 1e-5;   // eq30: one finite-difference layer

struct Options {
    std::string model = "example1";
    std::string grid;
    std::string out;
    std::string format = "json";
    uint64_t seed = 20250814;
    unsigned threads = 0;
    size_t samples = 200;
    Margins margins;
    Tolerances tol;
    std::string corrupt;
    double mass = 1.0, c1 = 1.0, c2 = 0.0;
    std::string start, to;
    double step = 1e-3;
    double tan_cap = 1e6;
    double y_fixed = 0.0, z_fixed = 0.0;
    double t_slice = M_PI / 2.0;
    double x_slice = 0.0;
    std::string locus;
    std::string at;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, sep)) out.push_back(item);
    return out;
}

double parse_num(const std::string& s, const std::string& what) {
    char* end = nullptr;
    const double v = std::strtod(s.c_str(), &end);
    if (end == s.c_str() || *end != '\0')
        throw UsageError("bad " + what + " '" + s + "', expected a number");
    return v;
}

// "t=0.2:1.3:5,x=0.3:2:5"; unspecified axes keep the model default
GridSpec parse_grid(const std::string& spec, GridSpec grid) {
    for (const std::string& token : split(spec, ',')) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw UsageError("bad grid token '" + token + "', expected axis=min:max:count");
        const std::string axis = token.substr(0, eq);
        int idx;
        if (axis == "t")
            idx = 0;
        else if (axis == "x")
            idx = 1;
        else if (axis == "y")
            idx = 2;
        else if (axis == "z")
            idx = 3;
        else
            throw UsageError("bad grid axis '" + axis + "'");
        const auto parts = split(token.substr(eq + 1), ':');
        if (parts.size() != 3)
            throw UsageError("bad grid range '" + token + "', expected min:max:count");
        AxisSpec a;
        a.min = parse_num(parts[0], "grid min");
        a.max = parse_num(parts[1], "grid max");
        a.count = static_cast<int>(parse_num(parts[2], "grid count"));
        if (a.count < 1) throw UsageError("grid count must be >= 1 in '" + token + "'");
        grid.axes[idx] = a;
    }
    return grid;
}

std::vector<std::pair<std::string, double>> parse_kv(const std::string& spec,
                                                     const std::string& what) {
    std::vector<std::pair<std::string, double>> out;
    if (spec.empty()) return out;
    for (const std::string& token : split(spec, ',')) {
        const auto eq = token.find('=');
        if (eq == std::string::npos)
            throw UsageError("bad " + what + " token '" + token + "', expected key=value");
        out.emplace_back(token.substr(0, eq), parse_num(token.substr(eq + 1), what));
    }
    return out;
}

void emit(const Options& o, const std::string& text) {
    if (o.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw UsageError("cannot open output file '" + o.out + "'");
    f << text;
}

void emit_json(const Options& o, const json& report) { emit(o, report.dump(2) + "\n"); }

json margins_json(const Margins& m) {
    return json{{"sin_t_floor", m.sin_t_floor}, {"cos_t_floor", m.cos_t_floor},
                {"x_floor", m.x_floor}};
}

json tol_json(const Tolerances& t) {
    return json{{"ricci_tol", t.ricci_tol}, {"riemann_tol", t.riemann_tol},
                {"det_tol", t.det_tol}};
}

json base_config(const Options& o, const std::string& command, const GridSpec* grid) {
    json c{{"command", command},
           {"model", o.model},
           {"margins", margins_json(o.margins)},
           {"tolerances", tol_json(o.tol)},
           {"seed", o.seed},
           {"threads", o.threads},
           {"format", o.format}};
    if (grid) c["grid"] = grid_to_json(*grid);
    if (o.model == "schwarzschild") c["mass"] = o.mass;
    if (o.model == "theorem1_instance") {
        c["c1"] = o.c1;
        c["c2"] = o.c2;
    }
    return c;
}

ModelParams params_of(const Options& o) {
    ModelParams p;
    p.mass = o.mass;
    p.c1 = o.c1;
    p.c2 = o.c2;
    return p;
}

GridSpec effective_grid(const Options& o, const MetricModel& model) {
    return o.grid.empty() ? model.default_grid : parse_grid(o.grid, model.default_grid);
}

int cmd_scan(const Options& o) {
    MetricModel model = builtin(o.model, params_of(o));
    GridSpec grid = effective_grid(o, model);
    ScanReport rep = scan(model, grid, o.tol, o.margins, o.threads);
    if (o.format == "csv") {
        std::ostringstream ss;
        write_csv(ss, rep);
        emit(o, ss.str());
    } else {
        emit_json(o, wrap_report(o.model, base_config(o, "scan", &grid), to_json(rep),
                                 scan_summary_json(rep)));
    }
    return 0;
}

int cmd_verify(const Options& o) {
    if (o.format != "json") throw UsageError("verify reports are json only");
    MetricModel model = builtin(o.model, params_of(o));
    GridSpec grid = effective_grid(o, model);
    ScanReport rep = scan(model, grid, o.tol, o.margins, o.threads);
    const ScanSummary& s = rep.summary;

    json checks = json::array();
    bool pass = true;
    auto check = [&](const std::string& name, bool ok, double observed, double limit) {
        checks.push_back(json{{"name", name}, {"pass", ok}, {"observed", observed},
                              {"limit", limit}});
        pass = pass && ok;
    };

    check("ricci_vacuum", s.max_ricci_ratio < o.tol.ricci_tol, s.max_ricci_ratio,
          o.tol.ricci_tol);
    check("det_negative", s.det_sign_violations == 0, s.det_sign_violations, 0);
    check("minor_chain", s.minor_chain_violations == 0, s.minor_chain_violations, 0);
    if (model.det_closed)
        check("det_closed_form_grid", s.max_det_rel_err < o.tol.det_tol, s.max_det_rel_err,
              o.tol.det_tol);
    if (model.curvature_class == CurvatureClass::flat)
        check("flatness", s.max_riemann_ratio < o.tol.riemann_tol, s.max_riemann_ratio,
              o.tol.riemann_tol);
    if (model.curvature_class == CurvatureClass::curved_null_kret) {
        check("kretschmann_null", s.max_kretschmann_ratio < o.tol.riemann_tol,
              s.max_kretschmann_ratio, o.tol.riemann_tol);
        bool pat_ok = true;
        for (const auto& p : s.pattern_union)
            if (p != "0202" && p != "0303") pat_ok = false;
        check("riemann_pattern", pat_ok, pat_ok ? 1.0 : 0.0, 1.0);
    }

    // seeded off-grid events: determinant closed form and assembly fidelity
    std::vector<Point> events = sample_events(model, o.margins, o.samples, o.seed);
    json extra;
    if (model.det_closed) {
        double worst = 0.0;
        for (const Point& p : events) {
            const double d = determinant(model.evaluate(p));
            const double c = model.det_closed(p);
            const double den = std::max(std::abs(d), std::abs(c));
            if (den > 0.0) worst = std::max(worst, std::abs(d - c) / den);
        }
        check("det_closed_form_random", worst < o.tol.det_tol, worst, o.tol.det_tol);
        extra["det_random_max_rel_err"] = worst;
    }
    if (model.is_family &&
        (o.model == "example1" || o.model == "example2" || o.model == "example3")) {
        MetricModel direct = builtin(o.model + "_direct", params_of(o));
        double worst = 0.0;
        for (const Point& p : events) {
            const Mat4 a = model.evaluate(p).values();
            const Mat4 b = direct.evaluate(p).values();
            double mx = 0.0;
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) mx = std::max(mx, std::abs(b[i][j]));
            for (int i = 0; i < 4; ++i)
                for (int j = 0; j < 4; ++j) {
                    const double den =
                        std::max({std::abs(a[i][j]), std::abs(b[i][j]), 0.01 * mx});
                    if (den > 0.0)
                        worst = std::max(worst, std::abs(a[i][j] - b[i][j]) / den);
                }
        }
        check("assembly_fidelity", worst < kFidelityTol, worst, kFidelityTol);
        extra["assembly_max_rel_err"] = worst;
    }

    json results{{"scan_summary", scan_summary_json(rep)}};
    for (auto& [k, v] : extra.items()) results[k] = v;
    json summary{{"pass", pass}, {"checks", checks}};
    emit_json(o, wrap_report(o.model, base_config(o, "verify", &grid), results, summary));
    return pass ? 0 : 1;
}

int cmd_derive_check(const Options& o) {
    MetricModel model = builtin(o.model, params_of(o));
    if (!model.is_family)
        throw UsageError("derive-check applies to family models only; " + o.model +
                         " has no generator set");
    QuadratureSpec quad{model.gen.quad_y0, 1e-12};
    std::vector<Point> events = sample_events(model, o.margins, o.samples, o.seed);
    std::vector<std::pair<double, double>> ty;
    ty.reserve(events.size());
    for (const Point& p : events) ty.emplace_back(p[0], p[2]);

    const bool corrupt_v = o.corrupt == "v";
    const double v_offset = o.corrupt == "V" ? 0.1 : 0.0;

    std::vector<ResidualReport> reports;
    std::vector<double> limits;
    reports.push_back(sweep_ode7(model.gen, quad, events, corrupt_v));
    limits.push_back(kOde7Tol);
    for (ReducedEq eq : {ReducedEq::eq27, ReducedEq::eq29, ReducedEq::eq30}) {
        reports.push_back(sweep_reduced(model.gen, quad, eq, ty, v_offset));
        limits.push_back(eq == ReducedEq::eq30 ? kEq3rdTol : kEq2ndTol);
    }

    bool pass = true;
    json per_eq = json::array(), results = json::array();
    for (size_t i = 0; i < reports.size(); ++i) {
        const bool ok = reports[i].max_ratio < limits[i];
        pass = pass && ok;
        per_eq.push_back(json{{"equation", reports[i].equation},
                              {"max_ratio", reports[i].max_ratio},
                              {"limit", limits[i]},
                              {"pass", ok}});
        results.push_back(to_json(reports[i]));
    }
    if (o.format == "csv") {
        std::ostringstream ss;
        write_csv(ss, reports);
        emit(o, ss.str());
    } else {
        json config = base_config(o, "derive-check", nullptr);
        config["samples"] = o.samples;
        if (!o.corrupt.empty()) config["corrupt"] = o.corrupt;
        emit_json(o, wrap_report(o.model, config, results,
                                 json{{"pass", pass}, {"equations", per_eq}}));
    }
    return pass ? 0 : 1;
}

int cmd_null_curve(const Options& o) {
    MetricModel model = builtin(o.model, params_of(o));
    double t0 = NAN, c0 = NAN, c_end = NAN;
    std::string coord;
    for (const auto& [k, v] : parse_kv(o.start, "--start")) {
        if (k == "t")
            t0 = v;
        else if (k == "x" || k == "rho") {
            coord = k;
            c0 = v;
        } else
            throw UsageError("--start keys are t and one of x|rho, got '" + k + "'");
    }
    if (std::isnan(t0) || coord.empty())
        throw UsageError("--start needs t=<val> and x=<val> (or rho=<val>)");
    for (const auto& [k, v] : parse_kv(o.to, "--to")) {
        if (k != coord)
            throw UsageError("--to must drive the same coordinate as --start (" + coord + ")");
        c_end = v;
    }
    if (std::isnan(c_end)) throw UsageError("--to needs " + coord + "=<val>");

    NullCurve curve = integrate_null_curve(model, t0, c0, c_end, o.step, coord, o.y_fixed,
                                           o.z_fixed, o.margins, o.tan_cap);
    if (o.format == "csv") {
        std::ostringstream ss;
        write_csv(ss, curve);
        emit(o, ss.str());
    } else {
        json config = base_config(o, "null-curve", nullptr);
        config["start"] = o.start;
        config["to"] = o.to;
        config["step"] = o.step;
        config["tan_cap"] = o.tan_cap;
        json summary{{"halt_reason", curve.halt_reason},
                     {"samples", curve.samples.size()},
                     {"max_null_residual", curve.max_null_residual}};
        if (!curve.samples.empty())
            summary["final"] = json{{coord, curve.samples.back()[0]},
                                    {"t", curve.samples.back()[1]}};
        emit_json(o, wrap_report(o.model, config, to_json(curve), summary));
    }
    return 0;
}

int cmd_slice(const Options& o) {
    MetricModel model = builtin(o.model, params_of(o));
    GridSpec grid = effective_grid(o, model);
    SliceMetric s = slice_metric(model, o.t_slice, o.x_slice, grid.axes[2], grid.axes[3]);
    if (o.format == "csv") {
        std::ostringstream ss;
        write_csv(ss, s);
        emit(o, ss.str());
    } else {
        json config = base_config(o, "slice", &grid);
        config["t"] = o.t_slice;
        config["x"] = o.x_slice;
        json summary{{"degenerate", s.degenerate}};
        if (s.degenerate) summary["note"] = "degenerate: slice is a point";
        emit_json(o, wrap_report(o.model, config, to_json(s), summary));
    }
    return 0;
}

int cmd_classify(const Options& o) {
    MetricModel model = builtin(o.model, params_of(o));
    if (o.locus.empty()) throw UsageError("classify needs --locus, e.g. --locus t->pi/2");
    Point base{M_PI / 4.0, 1.0, 0.0, 0.0};
    for (const auto& [k, v] : parse_kv(o.at, "--at")) {
        if (k == "t")
            base[0] = v;
        else if (k == "x")
            base[1] = v;
        else if (k == "y")
            base[2] = v;
        else if (k == "z")
            base[3] = v;
        else
            throw UsageError("--at keys are t,x,y,z; got '" + k + "'");
    }
    std::vector<Point> probe = make_probe(model, o.locus, base);
    SingularityVerdict v = classify_singularity(model, o.locus, probe);
    if (o.format == "csv") {
        std::ostringstream ss;
        write_csv(ss, v);
        emit(o, ss.str());
    } else {
        json config = base_config(o, "classify", nullptr);
        config["locus"] = o.locus;
        config["at"] = json{base[0], base[1], base[2], base[3]};
        emit_json(o, wrap_report(o.model, config, to_json(v),
                                 json{{"kind", singularity_kind_name(v.kind)}}));
    }
    return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    Options o;
    CLI::App app{"ricci-forge: numerical verification of a family of time-periodic "
                 "vacuum space-times"};
    app.name("ricci-forge");

    app.add_option("--model", o.model, "builtin model name")->capture_default_str();
    app.add_option("--grid", o.grid, "grid spec, axis=min:max:count comma-joined");
    app.add_option("--out", o.out, "output path (default: stdout)");
    app.add_option("--format", o.format, "output format")
        ->check(CLI::IsMember({"json", "csv"}))
        ->capture_default_str();
    app.add_option("--seed", o.seed, "seed for randomized event sampling")
        ->capture_default_str();
    app.add_option("--threads", o.threads, "worker threads for scans (0 = hardware)");
    app.add_option("--samples", o.samples, "random events for seeded checks")
        ->capture_default_str();
    app.add_option("--sin-t-floor", o.margins.sin_t_floor, "singular margin on |sin t|")
        ->capture_default_str();
    app.add_option("--cos-t-floor", o.margins.cos_t_floor, "singular margin on |cos t|")
        ->capture_default_str();
    app.add_option("--x-floor", o.margins.x_floor, "singular margin on |x| where it applies")
        ->capture_default_str();
    app.add_option("--ricci-tol", o.tol.ricci_tol, "max |Ricci|/scale gate")
        ->capture_default_str();
    app.add_option("--riemann-tol", o.tol.riemann_tol, "flatness / pattern gate")
        ->capture_default_str();
    app.add_option("--det-tol", o.tol.det_tol, "determinant closed-form gate")
        ->capture_default_str();
    app.add_option("--corrupt", o.corrupt,
                   "negative control: v (wrong ode assembly) or V (offset V by 0.1)")
        ->check(CLI::IsMember({"v", "V"}));
    app.add_option("--mass", o.mass, "schwarzschild mass")->capture_default_str();
    app.add_option("--c1", o.c1, "theorem1_instance c1")->capture_default_str();
    app.add_option("--c2", o.c2, "theorem1_instance c2")->capture_default_str();
    app.add_option("--start", o.start, "null-curve start, t=<val>,x=<val> or t=,rho=");
    app.add_option("--to", o.to, "null-curve target, x=<val> or rho=<val>");
    app.add_option("--step", o.step, "null-curve RK4 step")->capture_default_str();
    app.add_option("--tan-cap", o.tan_cap, "null-curve |slope| halt cap")
        ->capture_default_str();
    app.add_option("--y", o.y_fixed, "null-curve fixed y")->capture_default_str();
    app.add_option("--z", o.z_fixed, "null-curve fixed z")->capture_default_str();
    app.add_option("--t", o.t_slice, "slice time")->capture_default_str();
    app.add_option("--x", o.x_slice, "slice x")->capture_default_str();
    app.add_option("--locus", o.locus, "classify locus, <axis>-><target>");
    app.add_option("--at", o.at, "classify probe base event, t=..,x=..,y=..,z=..");
    app.set_config("--config", "", "key=value config file mirroring the flags");

    app.fallthrough();  // app-level options may follow the subcommand name
    auto* verify = app.add_subcommand("verify", "scan + seeded cross-checks, exit 1 on failure");
    auto* derive = app.add_subcommand("derive-check", "residuals of the construction equations");
    auto* scan_cmd = app.add_subcommand("scan", "grid scan data dump");
    auto* null_cmd = app.add_subcommand("null-curve", "integrate the sloped null branch");
    auto* slice_cmd = app.add_subcommand("slice", "induced (y,z) metric of a t-slice");
    auto* classify_cmd = app.add_subcommand("classify", "probe and classify a singular locus");
    app.require_subcommand(1);

    try {
        std::vector<std::string> rev(args.rbegin(), args.rend());
        app.parse(rev);
    } catch (const CLI::CallForHelp&) {
        std::cout << app.help();
        return 0;
    } catch (const CLI::CallForAllHelp&) {
        std::cout << app.help("", CLI::AppFormatMode::All);
        return 0;
    } catch (const CLI::ParseError& e) {
        std::cerr << "ricci-forge: " << e.what() << "\n";
        return 2;
    }

    try {
        if (verify->parsed()) return cmd_verify(o);
        if (derive->parsed()) return cmd_derive_check(o);
        if (scan_cmd->parsed()) return cmd_scan(o);
        if (null_cmd->parsed()) return cmd_null_curve(o);
        if (slice_cmd->parsed()) return cmd_slice(o);
        if (classify_cmd->parsed()) return cmd_classify(o);
        return 2;
    } catch (const UsageError& e) {
        std::cerr << "ricci-forge: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "ricci-forge: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace rforge
