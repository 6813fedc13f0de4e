#ifndef RFORGE_METRIC_HPP
#define RFORGE_METRIC_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "rforge/generators.hpp"

namespace rforge {

using Mat4 = std::array<std::array<double, 4>, 4>;
using Mat4Jet = std::array<std::array<Jet2, 4>, 4>;

struct MetricJets {
    Mat4Jet components;  // symmetric; zero pattern g03 = g11 = g12 = g13 = g23 = 0 for family models
    Point point;

    Mat4 values() const {
        Mat4 v{};
        for (int i = 0; i < 4; ++i)
            for (int j = 0; j < 4; ++j) v[i][j] = components[i][j].v;
        return v;
    }
};

struct AxisSpec {
    double min = 0.0, max = 0.0;
    int count = 1;
};

struct GridSpec {
    std::array<AxisSpec, 4> axes;  // t, x, y, z
};

std::vector<double> axis_values(const AxisSpec& a);

// Exclusion margins around the exact singular hypersurfaces; numerical work
// near |sin t| = 0 or |cos t| = 0 (and x = 0 for models singular there) is
// meaningless, so scans must keep clear of them.
struct Margins {
    double sin_t_floor = 0.05;
    double cos_t_floor = 0.05;
    double x_floor = 0.2;
};

enum class CurvatureClass {
    flat,              // every Riemann component ~ 0
    curved_null_kret,  // only R_0202/R_0303 survive, Kretschmann ~ 0
    generic            // no family claim (sanity fixtures)
};

struct MetricModel {
    std::string name;
    bool is_family = false;  // true when generated via GeneratorSet
    GeneratorSet gen;        // meaningful only when is_family
    std::function<MetricJets(const Point&)> evaluate;
    std::function<bool(const Point&)> singular_set;  // exact known singular hypersurfaces
    std::function<double(const Point&)> det_closed;  // closed-form determinant; empty if none
    bool x_margin_applies = false;                   // |x| >= margins.x_floor required (essential singularity at x = 0)
    std::array<std::array<double, 2>, 4> box{};      // evaluation-domain box per axis
    GridSpec default_grid;
    CurvatureClass curvature_class = CurvatureClass::generic;
};

// Assembles the ten independent components as jets from the generators.
MetricJets assemble_family(const GeneratorSet& gen, const Point& point);

// Named built-in models: example1/2/3 (family-assembled), their *_direct
// twins (printed closed forms), theorem1_instance, minkowski, schwarzschild.
struct ModelParams {
    double mass = 1.0;  // schwarzschild
    double c1 = 1.0;    // theorem1_instance kappa constants
    double c2 = 0.0;
};

MetricModel builtin(const std::string& name, const ModelParams& params = {});
std::vector<std::string> builtin_names();

double determinant(const MetricJets& m);
std::array<double, 4> leading_minors(const MetricJets& m);

// Inverse of the value matrix. Throws DegenerateEventError when |det| falls
// below the floor; callers probing near-singular loci pass a tiny floor.
Mat4 inverse_metric(const MetricJets& m, double det_floor = 1e-12);

// Max |second derivative| over all components: the "scale" normalizing
// every curvature tolerance (components grow like e^{6x}; absolute
// tolerances would be meaningless across a box).
double max_second_derivative(const MetricJets& m);

bool inside_margins(const MetricModel& model, const Margins& margins, const Point& p);

// Uniform rejection sampling of non-singular events in the model's box.
std::vector<Point> sample_events(const MetricModel& model, const Margins& margins, size_t n,
                                 uint64_t seed);

}  // namespace rforge

#endif
