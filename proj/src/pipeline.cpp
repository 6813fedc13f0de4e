#include "rforge/pipeline.hpp"

#include <algorithm>
#include <cmath>

#include "rforge/errors.hpp"
#include "rforge/quadrature.hpp"

namespace rforge {

namespace {

double integrand_value(const GeneratorSet& gen, double y) {
    Jet2 n = gen.N(Jet2(y));
    if (n.v == 0.0) throw DomainError("N vanishes inside the integration interval");
    return 1.0 / std::sqrt(std::abs(n.v));
}

double max_abs(std::initializer_list<double> terms) {
    double m = 0.0;
    for (double t : terms) m = std::max(m, std::abs(t));
    return m;
}

double sum(std::initializer_list<double> terms) {
    double s = 0.0;
    for (double t : terms) s += t;
    return s;
}

struct Vderivs {
    double v, t, y, yy, yt;
};

Vderivs v_derivs(const GeneratorSet& gen, const QuadratureSpec& quad, double t, double y,
                 double v_offset) {
    Jet2 V = compute_V(gen, quad, t, y);
    return {V.v + v_offset, V.g[0], V.g[2], V.h[2][2], V.h[0][2]};
}

ResidualReport finish_report(std::string equation, std::vector<std::pair<double, Point>> rated,
                             double max_abs_residual, double scale_at_worst) {
    std::sort(rated.begin(), rated.end(),
              [](const auto& a, const auto& b) { return a.first > b.first; });
    ResidualReport rep;
    rep.equation = std::move(equation);
    rep.max_abs_residual = max_abs_residual;
    rep.max_ratio = rated.empty() ? 0.0 : rated.front().first;
    rep.scale = scale_at_worst;
    for (size_t i = 0; i < rated.size() && i < 3; ++i) rep.worst.push_back(rated[i].second);
    return rep;
}

}  // namespace

Jet2 integral_jet(const GeneratorSet& gen, const QuadratureSpec& quad, double y) {
    Jet2 I(adaptive_simpson([&](double yy) { return integrand_value(gen, yy); }, quad.y0, y,
                            quad.abs_tol));
    // dI/dy = integrand(y), d2I/dy2 = integrand'(y): both read off the jet
    // of the integrand itself, not off the quadrature.
    Point p{0.0, 0.0, y, 0.0};
    Jet2 f = 1.0 / abs_sqrt(gen.N(Jet2::seed(p, 2)));
    I.g[2] = f.v;
    I.h[2][2] = f.g[2];
    return I;
}

Jet2 compute_V(const GeneratorSet& gen, const QuadratureSpec& quad, double t, double y) {
    Point p{t, 0.0, y, 0.0};
    Jet2 T = Jet2::seed(p, 0);
    Jet2 Y = Jet2::seed(p, 2);
    return gen.w(T) * abs_sqrt(gen.N(Y)) * exp(gen.q(T) * integral_jet(gen, quad, y));
}

double kappa(const JetFn1& N, double c1, double c2, const QuadratureSpec& quad, double y) {
    Jet2 n = N(Jet2(y));
    if (n.v == 0.0) throw DomainError("N vanishes at the evaluation point");
    double I = adaptive_simpson(
        [&](double yy) {
            Jet2 ni = N(Jet2(yy));
            if (ni.v == 0.0) throw DomainError("N vanishes inside the integration interval");
            return 1.0 / std::sqrt(std::abs(ni.v));
        },
        quad.y0, y, quad.abs_tol);
    return c1 * std::sqrt(std::abs(n.v)) * std::exp(c2 * I);
}

Residual residual_ode7(const GeneratorSet& gen, const QuadratureSpec& quad, const Point& point,
                       bool corrupt_v) {
    return with_point(point, [&]() {
        Jet2 T = Jet2::seed(point, 0);
        Jet2 X = Jet2::seed(point, 1);
        Jet2 Y = Jet2::seed(point, 2);

        Jet2 V = compute_V(gen, quad, point[0], point[2]);
        Jet2 K = gen.K(T, X);
        Jet2 Kx = gen.K_x(T, X);
        Jet2 N = gen.N(Y);

        Jet2 v = V * Kx;
        if (corrupt_v) v = 2.0 * V * Kx + 1.0;
        Jet2 f = -(K * K);
        Jet2 h = N * (K * K);
        if (v.v == 0.0 || f.v == 0.0 || h.v == 0.0)
            throw DomainError("assembly component vanishes here (singular set of the model)");
        if (f.g[1] * h.v + f.v * h.g[1] == 0.0)
            throw DomainError("(f h)_x vanishes here, the first-order reduction does not apply");

        const double vx_v = v.g[1] / v.v;
        const double fx_f = f.g[1] / f.v;
        const double hx_h = h.g[1] / h.v;
        const double fxx_f = f.h[1][1] / f.v;
        const double hxx_h = h.h[1][1] / h.v;

        const double t1 = vx_v * fx_f;
        const double t2 = vx_v * hx_h;
        const double t3 = 0.5 * fx_f * fx_f;
        const double t4 = 0.5 * hx_h * hx_h;
        const double t5 = -fxx_f;
        const double t6 = -hxx_h;
        return Residual{sum({t1, t2, t3, t4, t5, t6}), max_abs({t1, t2, t3, t4, t5, t6})};
    });
}

Residual residual_reduced(const GeneratorSet& gen, const QuadratureSpec& quad, ReducedEq eq,
                          double t, double y, double v_offset, double fd_dt) {
    Point at{t, 0.0, y, 0.0};
    return with_point(at, [&]() {
        Jet2 N = gen.N(Jet2::seed(at, 2));
        if (N.v == 0.0) throw DomainError("N vanishes at the evaluation point");
        const double n = N.v, ny = N.g[2], nyy = N.h[2][2];

        Vderivs V = v_derivs(gen, quad, t, y, v_offset);
        if (V.v == 0.0) throw DomainError("V vanishes at the evaluation point");

        switch (eq) {
            case ReducedEq::eq27: {
                const double t1 = -nyy / n;
                const double t2 = 0.5 * (ny / n) * (ny / n);
                const double t3 = 2.0 * V.yy / V.v;
                const double t4 = ny * V.y / (n * V.v);
                const double t5 = -2.0 * (V.y / V.v) * (V.y / V.v);
                return Residual{sum({t1, t2, t3, t4, t5}), max_abs({t1, t2, t3, t4, t5})};
            }
            case ReducedEq::eq29: {
                // (V_y/V)_y and (N_y/N)_y expanded through the quotient rule
                const double wy = V.yy / V.v - (V.y / V.v) * (V.y / V.v);
                const double my = nyy / n - (ny / n) * (ny / n);
                const double t1 = 2.0 * wy;
                const double t2 = V.y * ny / (V.v * n);
                const double t3 = -my;
                const double t4 = -0.5 * (ny / n) * (ny / n);
                return Residual{sum({t1, t2, t3, t4}), max_abs({t1, t2, t3, t4})};
            }
            case ReducedEq::eq28: {
                // V_yyt by one central difference over t on jet-level V_yy
                Vderivs Vp = v_derivs(gen, quad, t + fd_dt, y, v_offset);
                Vderivs Vm = v_derivs(gen, quad, t - fd_dt, y, v_offset);
                const double vyyt = (Vp.yy - Vm.yy) / (2.0 * fd_dt);
                const double t1 = 4.0 * V.y * V.y * V.t;
                const double t2 = 2.0 * V.v * V.v * vyyt;
                const double t3 = -2.0 * V.v * V.yy * V.t;
                const double t4 = -4.0 * V.v * V.y * V.yt;
                const double t5 = -V.v * V.y * V.t * ny / n;
                const double t6 = V.v * V.v * V.yt * ny / n;
                return Residual{sum({t1, t2, t3, t4, t5, t6}),
                                max_abs({t1, t2, t3, t4, t5, t6})};
            }
            case ReducedEq::eq30: {
                // with W = V_y/V: residual = 2 W_yt + W_t N_y/N
                Vderivs Vp = v_derivs(gen, quad, t + fd_dt, y, v_offset);
                Vderivs Vm = v_derivs(gen, quad, t - fd_dt, y, v_offset);
                auto w_y = [](const Vderivs& d) {
                    return d.yy / d.v - (d.y / d.v) * (d.y / d.v);
                };
                const double wyt = (w_y(Vp) - w_y(Vm)) / (2.0 * fd_dt);
                const double wt = V.yt / V.v - V.y * V.t / (V.v * V.v);
                const double t1 = 2.0 * wyt;
                const double t2 = wt * ny / n;
                return Residual{sum({t1, t2}), max_abs({t1, t2})};
            }
        }
        throw UsageError("unknown reduced equation");
    });
}

const char* reduced_eq_name(ReducedEq eq) {
    switch (eq) {
        case ReducedEq::eq27: return "eq27";
        case ReducedEq::eq28: return "eq28";
        case ReducedEq::eq29: return "eq29";
        case ReducedEq::eq30: return "eq30";
    }
    return "?";
}

ResidualReport sweep_ode7(const GeneratorSet& gen, const QuadratureSpec& quad,
                          const std::vector<Point>& samples, bool corrupt_v) {
    std::vector<std::pair<double, Point>> rated;
    double max_res = 0.0, scale_at_worst = 0.0, best = -1.0;
    for (const Point& p : samples) {
        Residual r = residual_ode7(gen, quad, p, corrupt_v);
        const double ratio = r.scale > 0.0 ? std::abs(r.value) / r.scale : std::abs(r.value);
        rated.emplace_back(ratio, p);
        max_res = std::max(max_res, std::abs(r.value));
        if (ratio > best) {
            best = ratio;
            scale_at_worst = r.scale;
        }
    }
    return finish_report("ode7", std::move(rated), max_res, scale_at_worst);
}

ResidualReport sweep_reduced(const GeneratorSet& gen, const QuadratureSpec& quad, ReducedEq eq,
                             const std::vector<std::pair<double, double>>& ty_samples,
                             double v_offset) {
    std::vector<std::pair<double, Point>> rated;
    double max_res = 0.0, scale_at_worst = 0.0, best = -1.0;
    for (const auto& [t, y] : ty_samples) {
        Residual r = residual_reduced(gen, quad, eq, t, y, v_offset);
        const double ratio = r.scale > 0.0 ? std::abs(r.value) / r.scale : std::abs(r.value);
        rated.emplace_back(ratio, Point{t, 0.0, y, 0.0});
        max_res = std::max(max_res, std::abs(r.value));
        if (ratio > best) {
            best = ratio;
            scale_at_worst = r.scale;
        }
    }
    return finish_report(reduced_eq_name(eq), std::move(rated), max_res, scale_at_worst);
}

}  // namespace rforge
