#ifndef RFORGE_PIPELINE_HPP
#define RFORGE_PIPELINE_HPP

#include <string>
#include <vector>

#include "rforge/generators.hpp"

namespace rforge {

// Definite-integral realization of the indefinite integrals in the family:
// integrals run from y0 to the evaluation point. Changing y0 multiplies V
// by exp{q(t) const}, a gauge freedom of the solution family.
struct QuadratureSpec {
    double y0 = 0.0;
    double abs_tol = 1e-12;
};

// I(y) = integral_{y0}^{y} |N|^{-1/2} dy' as a jet in y. The value comes
// from adaptive Simpson; the derivative entries use the integrand directly
// (fundamental theorem of calculus), never differentiated quadrature.
Jet2 integral_jet(const GeneratorSet& gen, const QuadratureSpec& quad, double y);

// V = w(t)|N(y)|^{1/2} exp{q(t) I(y)} as a jet in (t, y).
Jet2 compute_V(const GeneratorSet& gen, const QuadratureSpec& quad, double t, double y);

// kappa(y) = c1 sqrt(|N|) exp{c2 I(y)} under the same integral convention.
double kappa(const JetFn1& N, double c1, double c2, const QuadratureSpec& quad, double y);

struct Residual {
    double value;  // the equation's left side
    double scale;  // max |term| entering the sum, the tolerance yardstick
};

// First-order ODE in v satisfied by the assembly v = VK_x, f = -K^2, h = NK^2:
//   (v_x/v)(f_x/f + h_x/h) + [(f_x/f)^2 + (h_x/h)^2]/2 - (f_xx/f + h_xx/h) = 0.
// corrupt_v replaces v by 2VK_x + 1, a deliberate wrong assembly used as a
// negative control (the residual must then be far from zero).
Residual residual_ode7(const GeneratorSet& gen, const QuadratureSpec& quad, const Point& point,
                       bool corrupt_v = false);

// The reduced field equations in (t, y). eq27/eq29 are the second-order
// forms (equivalent up to regrouping); eq28/eq30 contain third mixed
// partials V_yyt, obtained by one central-difference layer over t (step
// fd_dt) on second-order jet data, hence their looser tolerance.
enum class ReducedEq { eq27, eq28, eq29, eq30 };

Residual residual_reduced(const GeneratorSet& gen, const QuadratureSpec& quad, ReducedEq eq,
                          double t, double y, double v_offset = 0.0, double fd_dt = 1e-5);

const char* reduced_eq_name(ReducedEq eq);

struct ResidualReport {
    std::string equation;  // ode7 | eq27 | eq28 | eq29 | eq30
    double max_abs_residual = 0.0;
    double max_ratio = 0.0;  // max per-sample |residual|/scale
    double scale = 0.0;      // scale at the worst sample
    std::vector<Point> worst;  // events of the largest ratios, worst first
};

ResidualReport sweep_ode7(const GeneratorSet& gen, const QuadratureSpec& quad,
                          const std::vector<Point>& samples, bool corrupt_v = false);
ResidualReport sweep_reduced(const GeneratorSet& gen, const QuadratureSpec& quad, ReducedEq eq,
                             const std::vector<std::pair<double, double>>& ty_samples,
                             double v_offset = 0.0);

}  // namespace rforge

#endif
