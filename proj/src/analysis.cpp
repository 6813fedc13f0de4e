#include "rforge/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <mutex>
#include <thread>

namespace rforge {

namespace {

// Probes run right up to the singular sets, so the curvature bundle gets a
// floor that only guards representability, not conditioning.
constexpr double kProbeDetFloor = 1e-250;
constexpr double kDetRangeLo = 1e-250;
constexpr double kDetRangeHi = 1e250;
// Significance cut |R| > kNoiseFrac * gross: the real cancellation floor is
// eps * gross ~ 1e-16 * gross, so 1e-12 keeps a solid margin above roundoff
// while still keeping every honestly resolved digit-bearing value. Being
// relative to gross, accumulated roundoff can never cross it, so significant
// values are always genuine.
constexpr double kNoiseFrac = 1e-12;
constexpr double kTrendRatio = 1e6;  // wording threshold for limit statements
// Growth factor declaring a component unbounded. In skewed charts the
// noise cut truncates the observable window (the signal-to-gross ratio
// falls with a power of the driven coordinate), so this sits well below
// the window ceiling; bounded probes vary by O(10), so the gap is wide.
constexpr double kEssentialGrowth = 1e4;

std::string fmt_point(const Point& p) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "(t=%g, x=%g, y=%g, z=%g)", p[0], p[1], p[2], p[3]);
    return buf;
}

double max_abs_entry(const Mat4& m) {
    double mx = 0.0;
    for (const auto& row : m)
        for (double v : row) mx = std::max(mx, std::abs(v));
    return mx;
}

double max_abs_riemann(const Tens4& r) {
    double mx = 0.0;
    for (const auto& a : r)
        for (const auto& b : a)
            for (const auto& c : b)
                for (double v : c) mx = std::max(mx, std::abs(v));
    return mx;
}

double significant_riemann(const CurvatureBundle& b) {
    const double noise = kNoiseFrac * b.gross;
    double mx = 0.0;
    for (const auto& a : b.riemann_lowered)
        for (const auto& bb : a)
            for (const auto& c : bb)
                for (double v : c)
                    if (std::abs(v) > noise) mx = std::max(mx, std::abs(v));
    return mx;
}

struct Locus {
    int axis = 0;        // 0=t, 1=x, 2=y
    double target = 0.0; // +/-inf allowed
};

Locus parse_locus(const std::string& locus) {
    const auto arrow = locus.find("->");
    if (arrow == std::string::npos)
        throw UsageError("bad locus '" + locus + "', expected <axis>-><target> like t->pi/2");
    const std::string axis = locus.substr(0, arrow);
    const std::string target = locus.substr(arrow + 2);
    Locus out;
    if (axis == "t")
        out.axis = 0;
    else if (axis == "x")
        out.axis = 1;
    else if (axis == "y")
        out.axis = 2;
    else
        throw UsageError("bad locus axis '" + axis + "', expected t, x or y");
    if (target == "pi")
        out.target = M_PI;
    else if (target == "pi/2")
        out.target = M_PI / 2.0;
    else if (target == "+inf" || target == "inf")
        out.target = HUGE_VAL;
    else if (target == "-inf")
        out.target = -HUGE_VAL;
    else {
        char* end = nullptr;
        out.target = std::strtod(target.c_str(), &end);
        if (end == target.c_str() || *end != '\0')
            throw UsageError("bad locus target '" + target + "'");
    }
    return out;
}

std::string trend(double first, double last) {
    char buf[96];
    if (first == 0.0 && last == 0.0) return "0 throughout";
    if (first > 0.0 && last <= 1e-6 * first) {
        std::snprintf(buf, sizeof buf, "-> 0 (ratio %.3g over the probe)", last / first);
        return buf;
    }
    if (first == 0.0) {
        std::snprintf(buf, sizeof buf, "grows from 0 to %.3g", last);
        return buf;
    }
    if (last >= kTrendRatio * first) {
        std::snprintf(buf, sizeof buf, "-> infinity (growth %.3g over the probe)", last / first);
        return buf;
    }
    std::snprintf(buf, sizeof buf, "bounded (%.3g -> %.3g)", first, last);
    return buf;
}

}  // namespace

ScanReport scan(const MetricModel& model, const GridSpec& grid, const Tolerances& tol,
                const Margins& margins, unsigned threads) {
    std::vector<Point> events;
    for (double t : axis_values(grid.axes[0]))
        for (double x : axis_values(grid.axes[1]))
            for (double y : axis_values(grid.axes[2]))
                for (double z : axis_values(grid.axes[3])) events.push_back({t, x, y, z});

    std::string offenders;
    int bad = 0;
    for (const Point& p : events) {
        if (inside_margins(model, margins, p)) continue;
        if (++bad <= 5) offenders += (offenders.empty() ? "" : ", ") + fmt_point(p);
    }
    if (bad > 0) {
        if (bad > 5) offenders += " (+" + std::to_string(bad - 5) + " more)";
        throw UsageError("grid touches the singular margins of " + model.name + " at " +
                         offenders + "; shrink the grid or loosen the floors");
    }

    ScanReport rep;
    rep.model = model.name;
    rep.grid = grid;
    rep.margins = margins;
    rep.tol = tol;
    rep.records.resize(events.size());

    unsigned workers = threads ? threads : std::thread::hardware_concurrency();
    workers = std::max(1u, std::min<unsigned>(workers, events.size()));

    std::atomic<size_t> next{0};
    std::exception_ptr first_error;
    std::mutex err_mx;
    auto run = [&]() {
        for (;;) {
            const size_t i = next.fetch_add(1);
            if (i >= events.size()) return;
            try {
                const Point& p = events[i];
                MetricJets m = model.evaluate(p);
                EventRecord r;
                r.p = p;
                r.det = determinant(m);
                r.minors = leading_minors(m);
                if (model.det_closed) {
                    const double dc = model.det_closed(p);
                    const double den = std::max(std::abs(r.det), std::abs(dc));
                    r.det_closed_rel_err = den > 0.0 ? std::abs(r.det - dc) / den : 0.0;
                }
                CurvatureBundle b = compute_bundle(m, kProbeDetFloor);
                r.scale = b.scale;
                const double den = b.scale > 0.0 ? b.scale : 1.0;
                r.ricci_ratio = max_abs_entry(b.ricci) / den;
                r.riemann_ratio = max_abs_riemann(b.riemann_lowered) / den;
                r.kretschmann = b.kretschmann;
                r.kretschmann_ratio = std::abs(b.kretschmann) / (den * den);
                r.pattern = riemann_nonzero_pattern(b, tol.riemann_tol);
                rep.records[i] = std::move(r);
            } catch (...) {
                std::lock_guard<std::mutex> lock(err_mx);
                if (!first_error) first_error = std::current_exception();
                next.store(events.size());
                return;
            }
        }
    };
    if (workers == 1) {
        run();
    } else {
        std::vector<std::thread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(run);
        for (auto& th : pool) th.join();
    }
    if (first_error) std::rethrow_exception(first_error);

    ScanSummary& s = rep.summary;
    s.events = rep.records.size();
    s.min_abs_det = HUGE_VAL;
    for (const EventRecord& r : rep.records) {
        if (r.ricci_ratio >= s.max_ricci_ratio) {
            s.max_ricci_ratio = r.ricci_ratio;
            s.worst_ricci_event = r.p;
        }
        s.max_riemann_ratio = std::max(s.max_riemann_ratio, r.riemann_ratio);
        s.max_kretschmann_ratio = std::max(s.max_kretschmann_ratio, r.kretschmann_ratio);
        if (r.det_closed_rel_err >= 0.0)
            s.max_det_rel_err = std::max(s.max_det_rel_err, r.det_closed_rel_err);
        if (!(r.det < 0.0)) ++s.det_sign_violations;
        if (!(r.minors[0] > 0.0 && r.minors[1] < 0.0 && r.minors[2] > 0.0 && r.minors[3] < 0.0))
            ++s.minor_chain_violations;
        s.min_abs_det = std::min(s.min_abs_det, std::abs(r.det));
        s.pattern_union.insert(r.pattern.begin(), r.pattern.end());
    }
    if (rep.records.empty()) s.min_abs_det = 0.0;
    return rep;
}

const char* singularity_kind_name(SingularityKind k) {
    switch (k) {
        case SingularityKind::event_horizon_candidate: return "event_horizon_candidate";
        case SingularityKind::degenerate_point: return "degenerate_point";
        case SingularityKind::essential: return "essential";
        case SingularityKind::regular: return "regular";
    }
    return "?";
}

std::vector<Point> make_probe(const MetricModel& model, const std::string& locus,
                              const Point& base) {
    const Locus lc = parse_locus(locus);
    std::vector<Point> probe;
    if (std::isfinite(lc.target)) {
        const double gap = base[lc.axis] - lc.target;
        if (gap == 0.0) throw UsageError("probe base already sits on the locus " + locus);
        for (int k = 0; k < 20; ++k) {
            Point p = base;
            p[lc.axis] = lc.target + gap * std::ldexp(1.0, -k);
            probe.push_back(p);
        }
        return probe;
    }
    // Infinite target: doubling sequence, stopped once the determinant
    // leaves the representable window (the trend is long since settled).
    const double sign = lc.target > 0.0 ? 1.0 : -1.0;
    const double mag0 = std::max(std::abs(base[lc.axis]), 1.0);
    for (int k = 0; k < 64; ++k) {
        Point p = base;
        p[lc.axis] = sign * mag0 * std::ldexp(1.0, k);
        double det;
        try {
            det = determinant(model.evaluate(p));
        } catch (const std::exception&) {
            break;
        }
        if (!std::isfinite(det) || std::abs(det) < kDetRangeLo || std::abs(det) > kDetRangeHi)
            break;
        probe.push_back(p);
    }
    if (probe.size() < 3)
        throw UsageError("probe toward " + locus + " collapsed after " +
                         std::to_string(probe.size()) + " events; move the base event");
    return probe;
}

SingularityVerdict classify_singularity(const MetricModel& model, const std::string& locus,
                                        const std::vector<Point>& probe) {
    const Locus lc = parse_locus(locus);
    SingularityVerdict v;
    v.locus = locus;

    for (const Point& p : probe) {
        try {
            MetricJets m = model.evaluate(p);
            CurvatureBundle b = compute_bundle(m, kProbeDetFloor);
            ProbeStep step;
            step.coord = p[lc.axis];
            step.abs_det = std::abs(determinant(m));
            step.max_abs_component = max_abs_entry(m.values());
            step.riemann_significant = significant_riemann(b);
            step.kretschmann = b.kretschmann;
            v.evidence.trace.push_back(step);
        } catch (const std::exception&) {
            break;  // the trace ends where the metric leaves representable range
        }
    }
    if (v.evidence.trace.size() < 3)
        throw UsageError("probe toward " + locus + " yielded fewer than 3 usable events");

    const ProbeStep& first = v.evidence.trace.front();
    const ProbeStep& last = v.evidence.trace.back();

    // Deep in a probe the growing components eventually sink below the
    // cancellation-noise cut (gross grows faster than the signal), so the
    // growth verdict uses the peak along the trace, not the final step.
    double peak_sig = 0.0;
    for (const ProbeStep& st : v.evidence.trace)
        peak_sig = std::max(peak_sig, st.riemann_significant);

    const bool essential = first.riemann_significant > 0.0 &&
                           peak_sig > kEssentialGrowth * first.riemann_significant;
    const bool collapse_all = last.max_abs_component < 1e-6 * first.max_abs_component;
    const bool det_to_zero = last.abs_det < 1e-6 * first.abs_det;
    const bool finite_locus = std::isfinite(lc.target);

    if (essential)
        v.kind = SingularityKind::essential;
    else if (collapse_all)
        v.kind = SingularityKind::degenerate_point;
    else if (finite_locus && det_to_zero)
        v.kind = SingularityKind::event_horizon_candidate;
    else
        v.kind = SingularityKind::regular;

    v.evidence.det_limit = "|det| " + trend(first.abs_det, last.abs_det);
    if (essential) {
        char buf[160];
        if (last.riemann_significant < peak_sig)
            std::snprintf(buf, sizeof buf,
                          "significant |R_abmn| grows %.3g-fold along the probe, then sinks "
                          "below the cancellation-noise cut of this chart",
                          peak_sig / first.riemann_significant);
        else
            std::snprintf(buf, sizeof buf,
                          "significant |R_abmn| grows %.3g-fold along the probe without "
                          "saturating",
                          peak_sig / first.riemann_significant);
        v.evidence.riemann_component_limit = buf;
    } else {
        v.evidence.riemann_component_limit =
            "significant |R_abmn| " + trend(first.riemann_significant, last.riemann_significant);
    }
    if (model.curvature_class == CurvatureClass::curved_null_kret && peak_sig > 0.0)
        v.evidence.kretschmann_limit =
            "stays at roundoff scale although components do not: the invariant cancels "
            "identically for this family";
    else
        v.evidence.kretschmann_limit =
            "|K| " + trend(std::abs(first.kretschmann), std::abs(last.kretschmann));

    std::string caveat;
    if (v.kind == SingularityKind::event_horizon_candidate)
        caveat = "det -> 0 is a chart statement; candidate only, pending an invariant criterion";
    if (!finite_locus) {
        if (!caveat.empty()) caveat += "; ";
        caveat += "locus lies at infinite coordinate distance, statements are limits along "
                  "this chart ray";
    }
    if (v.kind == SingularityKind::essential) {
        if (!caveat.empty()) caveat += "; ";
        if (model.curvature_class == CurvatureClass::curved_null_kret)
            caveat += "growth shows in curvature components while scalar invariants cancel";
        else if (std::abs(last.kretschmann) < kTrendRatio * std::abs(first.kretschmann))
            caveat += "components grow in this chart while the Kretschmann invariant stays "
                      "bounded, so the blowup may be a chart artifact";
    }
    v.evidence.caveat = caveat;
    return v;
}

NullSlopes null_slopes(const MetricModel& model, const Point& event) {
    const Mat4 g = model.evaluate(event).values();
    if (g[0][0] == 0.0)
        throw DomainError("degenerate light cone: g00 = 0 at this event", event);
    return NullSlopes{-2.0 * g[0][1] / g[0][0]};
}

NullCurve integrate_null_curve(const MetricModel& model, double t0, double c0, double c_end,
                               double step, const std::string& coord, double y_fixed,
                               double z_fixed, const Margins& margins, double tan_cap) {
    if (coord != "x" && coord != "rho")
        throw UsageError("null-curve coordinate must be x or rho, got '" + coord + "'");
    if (!(step > 0.0)) throw UsageError("null-curve step must be positive");
    if (c_end == c0) throw UsageError("null-curve start and target coincide");
    const bool use_rho = coord == "rho";

    auto x_of = [&](double c) { return use_rho ? std::exp(0.5 * c) : c; };
    auto event_at = [&](double c, double t) { return Point{t, x_of(c), y_fixed, z_fixed}; };

    // dt/dc on the sloped null branch; in rho = 2 ln x terms dx/drho = x/2
    auto rhs = [&](double c, double t) {
        const double s = null_slopes(model, event_at(c, t)).slope;
        return use_rho ? s * 0.5 * x_of(c) : s;
    };

    if (!inside_margins(model, margins, event_at(c0, t0)))
        throw UsageError("null-curve start event " + fmt_point(event_at(c0, t0)) +
                         " violates the singular margins");

    NullCurve curve;
    curve.model = model.name;
    curve.coord = coord;
    curve.y_fixed = y_fixed;
    curve.z_fixed = z_fixed;
    curve.step = step;
    curve.halt_reason = "completed";

    const double dir = c_end > c0 ? 1.0 : -1.0;
    double c = c0, t = t0;
    curve.samples.push_back({c, t});

    while (dir * (c_end - c) > 0.0) {
        const double h = dir * std::min(step, dir * (c_end - c));
        double k1, k2, k3, k4;
        try {
            k1 = rhs(c, t);
            if (std::abs(k1) > tan_cap) {
                curve.halt_reason = "tan-cap";
                break;
            }
            k2 = rhs(c + 0.5 * h, t + 0.5 * h * k1);
            k3 = rhs(c + 0.5 * h, t + 0.5 * h * k2);
            k4 = rhs(c + h, t + h * k3);
        } catch (const std::exception&) {
            curve.halt_reason = "domain-edge";
            break;
        }
        const double t_next = t + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        const double c_next = c + h;
        if (!std::isfinite(t_next) ||
            !inside_margins(model, margins, event_at(c_next, t_next))) {
            curve.halt_reason = "domain-edge";
            break;
        }
        // discrete null residual of the accepted segment, at its midpoint
        const double x0 = x_of(c), x1 = x_of(c_next);
        const double s_curve = (t_next - t) / (x1 - x0);
        const Mat4 g = model.evaluate(event_at(0.5 * (c + c_next), 0.5 * (t + t_next))).values();
        const double res = std::abs(g[0][0] * s_curve * s_curve + 2.0 * g[0][1] * s_curve) /
                           (std::abs(g[0][0]) * (1.0 + s_curve * s_curve));
        curve.max_null_residual = std::max(curve.max_null_residual, res);

        c = c_next;
        t = t_next;
        curve.samples.push_back({c, t});
    }
    return curve;
}

SliceMetric slice_metric(const MetricModel& model, double t, double x_fixed,
                         const AxisSpec& y_axis, const AxisSpec& z_axis) {
    SliceMetric sm;
    sm.model = model.name;
    sm.t = t;
    sm.x_fixed = x_fixed;
    double mx = 0.0;
    for (double y : axis_values(y_axis))
        for (double z : axis_values(z_axis)) {
            const Mat4 g = model.evaluate({t, x_fixed, y, z}).values();
            sm.samples.push_back({y, z, g[2][2], g[3][3]});
            mx = std::max({mx, std::abs(g[2][2]), std::abs(g[3][3])});
        }
    sm.degenerate = mx < 1e-10;
    return sm;
}

}  // namespace rforge
