#ifndef RFORGE_ANALYSIS_HPP
#define RFORGE_ANALYSIS_HPP

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "rforge/curvature.hpp"

namespace rforge {

struct Tolerances {
    double ricci_tol = 1e-8;    // max|Ricci|/scale gate
    double riemann_tol = 1e-8;  // flatness / pattern / Kretschmann gate
    double det_tol = 1e-10;     // closed-form determinant relative error gate
};

struct EventRecord {
    Point p{};
    double det = 0.0;
    double det_closed_rel_err = -1.0;  // -1 when the model has no closed form
    std::array<double, 4> minors{};
    double scale = 0.0;
    double ricci_ratio = 0.0;        // max|Ricci|/scale
    double riemann_ratio = 0.0;      // max|R_lowered|/scale
    double kretschmann = 0.0;
    double kretschmann_ratio = 0.0;  // |K|/scale^2
    std::set<std::string> pattern;
};

struct ScanSummary {
    size_t events = 0;
    double max_ricci_ratio = 0.0;
    double max_riemann_ratio = 0.0;
    double max_kretschmann_ratio = 0.0;
    double max_det_rel_err = 0.0;         // over events, when closed form exists
    int det_sign_violations = 0;          // events with det >= 0
    int minor_chain_violations = 0;       // events breaking D1>0, D2<0, D3>0, D4<0
    double min_abs_det = 0.0;
    Point worst_ricci_event{};
    std::set<std::string> pattern_union;
};

struct ScanReport {
    std::string model;
    GridSpec grid;
    Margins margins;
    Tolerances tol;
    std::vector<EventRecord> records;
    ScanSummary summary;
};

// Evaluates det/minors/curvature at every grid event, fanned out over a
// worker pool. Throws UsageError (listing offenders) if any grid event
// violates the singular margins or the model's singular set.
ScanReport scan(const MetricModel& model, const GridSpec& grid, const Tolerances& tol,
                const Margins& margins, unsigned threads = 0);

enum class SingularityKind { event_horizon_candidate, degenerate_point, essential, regular };
const char* singularity_kind_name(SingularityKind k);

struct ProbeStep {
    double coord = 0.0;          // the driven coordinate's value
    double abs_det = 0.0;
    double max_abs_component = 0.0;
    double riemann_significant = 0.0;  // max |R_lowered| above the cancellation noise floor
    double kretschmann = 0.0;
};

struct SingularityEvidence {
    std::string det_limit;
    std::string riemann_component_limit;
    std::string kretschmann_limit;
    std::string caveat;  // chart-dependence and similar fine print
    std::vector<ProbeStep> trace;
};

struct SingularityVerdict {
    std::string locus;
    SingularityKind kind = SingularityKind::regular;
    SingularityEvidence evidence;
};

// Locus grammar: "<axis>-><target>", axis in {t,x,y}, target a number or
// pi, pi/2, +inf, -inf (e.g. "t->pi/2", "x->0", "y->+inf"). The probe
// approaches finite targets geometrically (halving the gap from the base
// event) and infinite ones by doubling, stopping adaptively when values
// leave representable range.
std::vector<Point> make_probe(const MetricModel& model, const std::string& locus,
                              const Point& base);

SingularityVerdict classify_singularity(const MetricModel& model, const std::string& locus,
                                        const std::vector<Point>& probe);

// In-plane null directions at an event: dt = 0 always, plus the sloped
// branch dt/dx = -2 g01/g00.
struct NullSlopes {
    double slope = 0.0;  // the sloped branch
};

NullSlopes null_slopes(const MetricModel& model, const Point& event);

struct NullCurve {
    std::string model;
    std::string coord;  // "x" or "rho" (rho = 2 ln|x|)
    double y_fixed = 0.0, z_fixed = 0.0;
    double step = 0.0;
    std::vector<std::array<double, 2>> samples;  // (coord value, t)
    std::string halt_reason;                     // completed | tan-cap | domain-edge
    double max_null_residual = 0.0;              // worst |g00 s^2 + 2 g01 s| / |g00|(1+s^2)
};

// RK4 on the sloped null branch in the (t, coord)-plane at fixed (y, z).
// Integration halts at the target, at the |tan t| cap (light cone
// degenerating toward a horizon), or at the domain edge.
NullCurve integrate_null_curve(const MetricModel& model, double t0, double c0, double c_end,
                               double step, const std::string& coord, double y_fixed,
                               double z_fixed, const Margins& margins, double tan_cap = 1e6);

struct SliceSample {
    double y = 0.0, z = 0.0;
    double g22 = 0.0, g33 = 0.0;
};

struct SliceMetric {
    std::string model;
    double t = 0.0;
    double x_fixed = 0.0;
    bool degenerate = false;  // all sampled components below 1e-10: slice is a point
    std::vector<SliceSample> samples;
};

// Induced metric of the t-slice on the (y,z) plane at fixed x.
SliceMetric slice_metric(const MetricModel& model, double t, double x_fixed,
                         const AxisSpec& y_axis, const AxisSpec& z_axis);

}  // namespace rforge

#endif
