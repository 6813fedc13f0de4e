#ifndef RFORGE_QUADRATURE_HPP
#define RFORGE_QUADRATURE_HPP

#include <cmath>
#include <functional>

namespace rforge {

// Adaptive Simpson on a smooth 1-D integrand, absolute-tolerance controlled
// with the usual Richardson error estimate |S2 - S1|/15.
namespace detail {

inline double simpson_step(double a, double fa, double b, double fb, double fm) {
    return (b - a) / 6.0 * (fa + 4.0 * fm + fb);
}

inline double simpson_recurse(const std::function<double(double)>& f, double a, double fa,
                              double b, double fb, double m, double fm, double whole,
                              double abs_tol, int depth) {
    const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
    const double flm = f(lm), frm = f(rm);
    const double left = simpson_step(a, fa, m, fm, flm);
    const double right = simpson_step(m, fm, b, fb, frm);
    const double delta = left + right - whole;
    if (depth <= 0 || std::abs(delta) <= 15.0 * abs_tol)
        return left + right + delta / 15.0;
    return simpson_recurse(f, a, fa, m, fm, lm, flm, left, 0.5 * abs_tol, depth - 1) +
           simpson_recurse(f, m, fm, b, fb, rm, frm, right, 0.5 * abs_tol, depth - 1);
}

}  // namespace detail

inline double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                               double abs_tol = 1e-12, int max_depth = 48) {
    if (a == b) return 0.0;
    if (a > b) return -adaptive_simpson(f, b, a, abs_tol, max_depth);
    const double fa = f(a), fb = f(b);
    const double m = 0.5 * (a + b), fm = f(m);
    const double whole = detail::simpson_step(a, fa, b, fb, fm);
    return detail::simpson_recurse(f, a, fa, b, fb, m, fm, whole, abs_tol, max_depth);
}

}  // namespace rforge

#endif
