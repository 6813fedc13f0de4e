#include "rforge/generators.hpp"

// The concrete generator sets behind the built-in family models. Every
// field, including the explicit derivative fields, is written as a plain
// closed form over jet arithmetic so each evaluation carries two more
// derivative orders for free.

namespace rforge {

GeneratorSet example1_generators() {
    GeneratorSet g;
    g.w = [](const Jet2& t) { return cos(t); };
    g.q = [](const Jet2&) { return Jet2(0.0); };
    g.K = [](const Jet2& t, const Jet2& x) { return exp(x) * sin(t); };
    g.K_t = [](const Jet2& t, const Jet2& x) { return exp(x) * cos(t); };
    g.K_x = [](const Jet2& t, const Jet2& x) { return exp(x) * sin(t); };
    g.N = [](const Jet2& y) {
        Jet2 s = 2.0 + sin(y);
        return -(s * s);
    };
    g.N_y = [](const Jet2& y) { return -2.0 * (2.0 + sin(y)) * cos(y); };
    // q = 0 kills the exponential factor: V = cos t (2 + sin y)
    g.V_closed = [](const Jet2& t, const Jet2& y) { return cos(t) * (2.0 + sin(y)); };
    return g;
}

GeneratorSet example2_generators() {
    GeneratorSet g;
    g.w = [](const Jet2& t) { return cos(t); };
    g.q = [](const Jet2& t) { return sin(t); };
    g.K = [](const Jet2& t, const Jet2& x) { return exp(x) * sin(t); };
    g.K_t = [](const Jet2& t, const Jet2& x) { return exp(x) * cos(t); };
    g.K_x = [](const Jet2& t, const Jet2& x) { return exp(x) * sin(t); };
    g.N = [](const Jet2& y) {
        Jet2 s = 2.0 + sin(y);
        return -1.0 / (s * s);
    };
    g.N_y = [](const Jet2& y) {
        Jet2 s = 2.0 + sin(y);
        return 2.0 * cos(y) / (s * s * s);
    };
    // antiderivative branch 2y - cos y; the matching quadrature base point
    // is the root of 2y = cos y (see docs)
    g.V_closed = [](const Jet2& t, const Jet2& y) {
        return cos(t) * exp((2.0 * y - cos(y)) * sin(t)) / (2.0 + sin(y));
    };
    g.quad_y0 = 0.45018361129487357;
    return g;
}

GeneratorSet example3_generators() {
    GeneratorSet g;
    g.w = [](const Jet2& t) { return cos(t); };
    g.q = [](const Jet2& t) { return sin(t); };
    g.K = [](const Jet2& t, const Jet2& x) { return sin(t) / (x * x); };
    g.K_t = [](const Jet2& t, const Jet2& x) { return cos(t) / (x * x); };
    g.K_x = [](const Jet2& t, const Jet2& x) { return -2.0 * sin(t) / (x * x * x); };
    g.N = [](const Jet2& y) {
        Jet2 c = 2.0 + cos(y);
        return -1.0 / (c * c);
    };
    g.N_y = [](const Jet2& y) {
        Jet2 c = 2.0 + cos(y);
        return -2.0 * sin(y) / (c * c * c);
    };
    // antiderivative branch 2y + sin y, base point y0 = 0
    g.V_closed = [](const Jet2& t, const Jet2& y) {
        return cos(t) * exp((2.0 * y + sin(y)) * sin(t)) / (2.0 + cos(y));
    };
    g.quad_y0 = 0.0;
    return g;
}

GeneratorSet theorem1_generators(double c1, double c2) {
    // V = rho(t) kappa(y) with rho = cos t, kappa = c1 sqrt|N| e^{c2 I}:
    // in family terms w(t) = c1 cos t, q(t) = c2, V built by quadrature.
    GeneratorSet g = example1_generators();
    g.w = [c1](const Jet2& t) { return c1 * cos(t); };
    g.q = [c2](const Jet2&) { return Jet2(c2); };
    g.V_closed.reset();
    g.quad_y0 = 0.0;
    return g;
}

}  // namespace rforge
