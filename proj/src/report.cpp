#include "rforge/report.hpp"

#include <cstdio>

namespace rforge {

using nlohmann::json;

namespace {

json point_json(const Point& p) { return json{p[0], p[1], p[2], p[3]}; }

json pattern_json(const std::set<std::string>& pat) {
    json a = json::array();
    for (const auto& s : pat) a.push_back(s);
    return a;
}

}  // namespace

json wrap_report(const std::string& model, const json& config, const json& results,
                 const json& summary) {
    return json{{"tool_version", kToolVersion},
                {"model", model},
                {"config", config},
                {"results", results},
                {"summary", summary}};
}

json grid_to_json(const GridSpec& g) {
    const char* names[4] = {"t", "x", "y", "z"};
    json out;
    for (int i = 0; i < 4; ++i)
        out[names[i]] = json{{"min", g.axes[i].min}, {"max", g.axes[i].max},
                             {"count", g.axes[i].count}};
    return out;
}

json to_json(const ScanReport& r) {
    json recs = json::array();
    for (const EventRecord& e : r.records) {
        json j{{"point", point_json(e.p)},
               {"det", e.det},
               {"minors", json{e.minors[0], e.minors[1], e.minors[2], e.minors[3]}},
               {"scale", e.scale},
               {"ricci_ratio", e.ricci_ratio},
               {"riemann_ratio", e.riemann_ratio},
               {"kretschmann", e.kretschmann},
               {"kretschmann_ratio", e.kretschmann_ratio},
               {"pattern", pattern_json(e.pattern)}};
        if (e.det_closed_rel_err >= 0.0) j["det_closed_rel_err"] = e.det_closed_rel_err;
        recs.push_back(std::move(j));
    }
    return recs;
}

json scan_summary_json(const ScanReport& r) {
    const ScanSummary& s = r.summary;
    return json{{"events", s.events},
                {"max_ricci_ratio", s.max_ricci_ratio},
                {"max_riemann_ratio", s.max_riemann_ratio},
                {"max_kretschmann_ratio", s.max_kretschmann_ratio},
                {"max_det_rel_err", s.max_det_rel_err},
                {"det_sign_violations", s.det_sign_violations},
                {"minor_chain_violations", s.minor_chain_violations},
                {"min_abs_det", s.min_abs_det},
                {"worst_ricci_event", point_json(s.worst_ricci_event)},
                {"pattern_union", pattern_json(s.pattern_union)}};
}

json to_json(const NullCurve& c) {
    json samples = json::array();
    for (const auto& s : c.samples) samples.push_back(json{s[0], s[1]});
    return json{{"coord", c.coord},
                {"y", c.y_fixed},
                {"z", c.z_fixed},
                {"step", c.step},
                {"samples", samples},
                {"halt_reason", c.halt_reason},
                {"max_null_residual", c.max_null_residual}};
}

json to_json(const SliceMetric& s) {
    json samples = json::array();
    for (const auto& q : s.samples)
        samples.push_back(json{{"y", q.y}, {"z", q.z}, {"g22", q.g22}, {"g33", q.g33}});
    return json{{"t", s.t}, {"x", s.x_fixed}, {"degenerate", s.degenerate},
                {"samples", samples}};
}

json to_json(const SingularityVerdict& v) {
    json trace = json::array();
    for (const ProbeStep& st : v.evidence.trace)
        trace.push_back(json{{"coord", st.coord},
                             {"abs_det", st.abs_det},
                             {"max_abs_component", st.max_abs_component},
                             {"riemann_significant", st.riemann_significant},
                             {"kretschmann", st.kretschmann}});
    return json{{"locus", v.locus},
                {"kind", singularity_kind_name(v.kind)},
                {"evidence", json{{"det_limit", v.evidence.det_limit},
                                  {"riemann_component_limit", v.evidence.riemann_component_limit},
                                  {"kretschmann_limit", v.evidence.kretschmann_limit},
                                  {"caveat", v.evidence.caveat},
                                  {"trace", trace}}}};
}

json to_json(const ResidualReport& r) {
    json worst = json::array();
    for (const Point& p : r.worst) worst.push_back(point_json(p));
    return json{{"equation", r.equation},
                {"max_abs_residual", r.max_abs_residual},
                {"max_ratio", r.max_ratio},
                {"scale", r.scale},
                {"worst", worst}};
}

std::string fmt17(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

void write_csv(std::ostream& os, const ScanReport& r) {
    os << "t,x,y,z,det,det_closed_rel_err,D1,D2,D3,D4,scale,ricci_ratio,riemann_ratio,"
          "kretschmann,kretschmann_ratio,pattern\n";
    for (const EventRecord& e : r.records) {
        os << fmt17(e.p[0]) << ',' << fmt17(e.p[1]) << ',' << fmt17(e.p[2]) << ','
           << fmt17(e.p[3]) << ',' << fmt17(e.det) << ',' << fmt17(e.det_closed_rel_err);
        for (double m : e.minors) os << ',' << fmt17(m);
        os << ',' << fmt17(e.scale) << ',' << fmt17(e.ricci_ratio) << ','
           << fmt17(e.riemann_ratio) << ',' << fmt17(e.kretschmann) << ','
           << fmt17(e.kretschmann_ratio) << ',';
        bool sep = false;
        for (const auto& p : e.pattern) {
            if (sep) os << ' ';
            os << p;
            sep = true;
        }
        os << '\n';
    }
}

void write_csv(std::ostream& os, const NullCurve& c) {
    os << c.coord << ",t\n";
    for (const auto& s : c.samples) os << fmt17(s[0]) << ',' << fmt17(s[1]) << '\n';
}

void write_csv(std::ostream& os, const SliceMetric& s) {
    os << "y,z,g22,g33\n";
    for (const auto& q : s.samples)
        os << fmt17(q.y) << ',' << fmt17(q.z) << ',' << fmt17(q.g22) << ',' << fmt17(q.g33)
           << '\n';
}

void write_csv(std::ostream& os, const SingularityVerdict& v) {
    os << "coord,abs_det,max_abs_component,riemann_significant,kretschmann\n";
    for (const ProbeStep& st : v.evidence.trace)
        os << fmt17(st.coord) << ',' << fmt17(st.abs_det) << ',' << fmt17(st.max_abs_component)
           << ',' << fmt17(st.riemann_significant) << ',' << fmt17(st.kretschmann) << '\n';
}

void write_csv(std::ostream& os, const std::vector<ResidualReport>& rs) {
    os << "equation,max_abs_residual,max_ratio,scale\n";
    for (const ResidualReport& r : rs)
        os << r.equation << ',' << fmt17(r.max_abs_residual) << ',' << fmt17(r.max_ratio) << ','
           << fmt17(r.scale) << '\n';
}

}  // namespace rforge
