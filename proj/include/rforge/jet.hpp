#ifndef RFORGE_JET_HPP
#define RFORGE_JET_HPP

#include <array>
#include <cmath>

#include "rforge/errors.hpp"

namespace rforge {

// Second-order forward-mode jet over the four coordinates (t,x,y,z):
// a value carried together with its gradient and (symmetric) Hessian.
// This is the whole differentiation substrate: curvature needs metric
// second derivatives and nothing higher, so second order is enough and
// four variables make dense storage the only sensible layout.
struct Jet2 {
    double v = 0.0;
    std::array<double, 4> g{};
    std::array<std::array<double, 4>, 4> h{};

    Jet2() = default;
    Jet2(double value) : v(value) {}  // implicit: constants mix freely with jets

    // Coordinate jet: value = point[axis], gradient = e_axis, Hessian = 0.
    static Jet2 seed(const Point& point, int axis) {
        if (axis < 0 || axis > 3) throw UsageError("jet seed axis must be 0..3");
        Jet2 j;
        j.v = point[axis];
        j.g[axis] = 1.0;
        return j;
    }

    static std::array<Jet2, 4> seed_all(const Point& point) {
        return {seed(point, 0), seed(point, 1), seed(point, 2), seed(point, 3)};
    }

    Jet2 operator-() const {
        Jet2 r;
        r.v = -v;
        for (int i = 0; i < 4; ++i) {
            r.g[i] = -g[i];
            for (int j = i; j < 4; ++j) {
                r.h[i][j] = -h[i][j];
                r.h[j][i] = r.h[i][j];
            }
        }
        return r;
    }

    friend Jet2 operator+(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v + b.v;
        for (int i = 0; i < 4; ++i) {
            r.g[i] = a.g[i] + b.g[i];
            for (int j = i; j < 4; ++j) {
                r.h[i][j] = a.h[i][j] + b.h[i][j];
                r.h[j][i] = r.h[i][j];
            }
        }
        return r;
    }

    friend Jet2 operator-(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v - b.v;
        for (int i = 0; i < 4; ++i) {
            r.g[i] = a.g[i] - b.g[i];
            for (int j = i; j < 4; ++j) {
                r.h[i][j] = a.h[i][j] - b.h[i][j];
                r.h[j][i] = r.h[i][j];
            }
        }
        return r;
    }

    // (ab)'' = a''b + a'⊗b' + b'⊗a' + ab''
    friend Jet2 operator*(const Jet2& a, const Jet2& b) {
        Jet2 r;
        r.v = a.v * b.v;
        for (int i = 0; i < 4; ++i) {
            r.g[i] = a.g[i] * b.v + a.v * b.g[i];
            for (int j = i; j < 4; ++j) {
                r.h[i][j] = a.h[i][j] * b.v + a.g[i] * b.g[j] + a.g[j] * b.g[i] + a.v * b.h[i][j];
                r.h[j][i] = r.h[i][j];
            }
        }
        return r;
    }

    // Quotient rule solved from a = qb, so the value lane is the correctly
    // rounded a.v/b.v (a reciprocal-then-multiply value can be off by 1 ulp
    // from plain scalar division):
    //   q' = (a' - q b')/b,  q'' = (a'' - q'⊗b' - b'⊗q' - q b'')/b
    friend Jet2 operator/(const Jet2& a, const Jet2& b) {
        if (b.v == 0.0) throw DomainError("division by zero-valued jet");
        Jet2 r;
        r.v = a.v / b.v;
        const double iv = 1.0 / b.v;
        for (int i = 0; i < 4; ++i) r.g[i] = (a.g[i] - r.v * b.g[i]) * iv;
        for (int i = 0; i < 4; ++i) {
            for (int j = i; j < 4; ++j) {
                r.h[i][j] =
                    (a.h[i][j] - r.g[i] * b.g[j] - r.g[j] * b.g[i] - r.v * b.h[i][j]) * iv;
                r.h[j][i] = r.h[i][j];
            }
        }
        return r;
    }
};

// f(a) by the second-order chain rule: needs f(a.v), f'(a.v), f''(a.v).
inline Jet2 chain(const Jet2& a, double f, double df, double ddf) {
    Jet2 r;
    r.v = f;
    for (int i = 0; i < 4; ++i) {
        r.g[i] = df * a.g[i];
        for (int j = i; j < 4; ++j) {
            r.h[i][j] = ddf * a.g[i] * a.g[j] + df * a.h[i][j];
            r.h[j][i] = r.h[i][j];
        }
    }
    return r;
}

inline Jet2 sin(const Jet2& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return chain(a, s, c, -s);
}

inline Jet2 cos(const Jet2& a) {
    const double s = std::sin(a.v), c = std::cos(a.v);
    return chain(a, c, -s, -c);
}

inline Jet2 exp(const Jet2& a) {
    const double e = std::exp(a.v);
    return chain(a, e, e, e);
}

inline Jet2 log(const Jet2& a) {
    if (a.v <= 0.0) throw DomainError("ln requires a positive argument");
    const double iv = 1.0 / a.v;
    return chain(a, std::log(a.v), iv, -iv * iv);
}

inline Jet2 pow(const Jet2& a, double p) {
    if (a.v == 0.0) throw DomainError("pow at zero base");
    if (a.v < 0.0 && p != std::floor(p))
        throw DomainError("pow of negative base needs an integer exponent");
    const double f = std::pow(a.v, p);
    const double df = p * std::pow(a.v, p - 1.0);
    const double ddf = p * (p - 1.0) * std::pow(a.v, p - 2.0);
    return chain(a, f, df, ddf);
}

// |a|^{1/2}. The metric family takes |N(y)|^{1/2} with N strictly negative,
// so this is a first-class primitive with a clean error at zero instead of
// a pow(abs(.), .5) that would hide the kink.
inline Jet2 abs_sqrt(const Jet2& a) {
    if (a.v == 0.0) throw DomainError("|.|^{1/2} at zero argument");
    const double sign = a.v > 0.0 ? 1.0 : -1.0;
    const double u = sign * a.v;
    const double s = std::sqrt(u);
    // chain through u = sign*a: f' = sign/(2s), f'' = -sign²/(4 u^{3/2})
    return chain(a, s, sign * 0.5 / s, -0.25 / (u * s));
}

}  // namespace rforge

#endif
