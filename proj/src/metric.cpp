#include "rforge/metric.hpp"

#include <cmath>
#include <random>

#include "rforge/pipeline.hpp"

namespace rforge {

namespace {

// Tolerance deciding "this event sits on a known singular hypersurface".
// The hypersurfaces are exact (sin t = 0, cos t = 0, x = 0), so anything
// below roundoff-scale distance counts as on them.
constexpr double kSingularTol = 1e-9;

void set_sym(Mat4Jet& m, int i, int j, const Jet2& v) {
    m[i][j] = v;
    m[j][i] = v;
}

MetricJets from_upper(const Point& p, const Jet2& g00, const Jet2& g01, const Jet2& g02,
                      const Jet2& g22, const Jet2& g33) {
    MetricJets m;
    m.point = p;
    set_sym(m.components, 0, 0, g00);
    set_sym(m.components, 0, 1, g01);
    set_sym(m.components, 0, 2, g02);
    set_sym(m.components, 2, 2, g22);
    set_sym(m.components, 3, 3, g33);
    return m;
}

bool near_t_singularity(double t) {
    return std::min(std::abs(std::sin(t)), std::abs(std::cos(t))) < kSingularTol;
}

// Default verification grids stay where double precision can certify the
// curvature identities: the quartic Kretschmann contraction multiplies
// huge inverse-metric entries into roundoff noise of true-zero components,
// so grids avoid the exponentially skewed corners of the box (the box
// itself, used for random sampling, stays wider).
GridSpec family_default_grid() {
    GridSpec g;
    g.axes[0] = {0.3, 2.6, 5};
    g.axes[1] = {-3.0, 3.0, 5};
    g.axes[2] = {-3.0, 3.0, 5};
    g.axes[3] = {-1.0, 1.0, 3};
    return g;
}

std::array<std::array<double, 2>, 4> family_box() {
    return {{{0.0, M_PI}, {-3.0, 3.0}, {-3.0, 3.0}, {-3.0, 3.0}}};
}

MetricModel family_model(std::string name, GeneratorSet gen) {
    MetricModel m;
    m.name = std::move(name);
    m.is_family = true;
    m.gen = std::move(gen);
    GeneratorSet g = m.gen;  // copy captured by the evaluator
    m.evaluate = [g](const Point& p) { return assemble_family(g, p); };
    m.singular_set = [](const Point& p) { return near_t_singularity(p[0]); };
    m.box = family_box();
    m.default_grid = family_default_grid();
    return m;
}

// --- printed closed-form twins -------------------------------------------

MetricJets example1_direct_eval(const Point& p) {
    auto s = Jet2::seed_all(p);
    const Jet2 &T = s[0], &X = s[1], &Y = s[2];
    Jet2 E = exp(X);
    Jet2 S = 2.0 + sin(Y);
    Jet2 g00 = 2.0 * E * S * cos(T) * cos(T);
    Jet2 g01 = 0.5 * E * S * sin(2.0 * T);
    Jet2 g02 = 0.5 * E * cos(Y) * sin(2.0 * T);
    Jet2 g22 = -(E * sin(T)) * (E * sin(T));
    Jet2 g33 = -(E * S * sin(T)) * (E * S * sin(T));
    return from_upper(p, g00, g01, g02, g22, g33);
}

MetricJets example2_direct_eval(const Point& p) {
    auto s = Jet2::seed_all(p);
    const Jet2 &T = s[0], &X = s[1], &Y = s[2];
    Jet2 E = exp(X);
    Jet2 S = 2.0 + sin(Y);
    Jet2 Q = exp((2.0 * Y - cos(Y)) * sin(T));
    Jet2 g00 = 2.0 * E * cos(T) * cos(T) * Q / S;
    Jet2 g01 = E * sin(2.0 * T) * Q / (2.0 * S);
    Jet2 g02 = E * (sin(T) * cos(T) - cos(T) * cos(Y) / (S * S)) * sin(T) * Q;
    Jet2 g22 = -exp(2.0 * X) * sin(T) * sin(T);
    Jet2 g33 = -exp(2.0 * X) * sin(T) * sin(T) / (S * S);
    return from_upper(p, g00, g01, g02, g22, g33);
}

MetricJets example3_direct_eval(const Point& p) {
    auto s = Jet2::seed_all(p);
    const Jet2 &T = s[0], &X = s[1], &Y = s[2];
    Jet2 C = 2.0 + cos(Y);
    Jet2 Q = exp((sin(Y) + 2.0 * Y) * sin(T));
    Jet2 X2 = X * X;
    Jet2 g00 = 2.0 * cos(T) * cos(T) * Q / (C * X2);
    Jet2 g01 = -sin(2.0 * T) * Q / (C * X2 * X);
    Jet2 g02 = (sin(T) / X2) * (cos(T) * sin(Y) / (C * C) + sin(2.0 * T) / 2.0) * Q;
    Jet2 g22 = -sin(T) * sin(T) / (X2 * X2);
    Jet2 g33 = -sin(T) * sin(T) / (C * C * X2 * X2);
    return from_upper(p, g00, g01, g02, g22, g33);
}

double example1_det(const Point& p) {
    const double t = p[0], x = p[1], y = p[2];
    const double s = 2.0 + std::sin(y);
    const double st = std::sin(t), s2t = std::sin(2.0 * t);
    return -0.25 * std::exp(6.0 * x) * s * s * s * s * st * st * st * st * s2t * s2t;
}

double example2_det(const Point& p) {
    const double t = p[0], x = p[1], y = p[2];
    const double s = 2.0 + std::sin(y);
    const double st = std::sin(t), s2t = std::sin(2.0 * t);
    return -std::exp(6.0 * x + 2.0 * (2.0 * y - std::cos(y)) * std::sin(t)) * s2t * s2t * st *
           st * st * st / (4.0 * s * s * s * s);
}

double example3_det(const Point& p) {
    const double t = p[0], x = p[1], y = p[2];
    const double c = 2.0 + std::cos(y);
    const double st = std::sin(t), s2t = std::sin(2.0 * t);
    return -std::exp(2.0 * (2.0 * y + std::sin(y)) * std::sin(t)) * s2t * s2t * st * st * st *
           st / (std::pow(x, 14.0) * c * c * c * c);
}

MetricJets minkowski_eval(const Point& p) {
    MetricJets m;
    m.point = p;
    set_sym(m.components, 0, 0, Jet2(1.0));
    set_sym(m.components, 1, 1, Jet2(-1.0));
    set_sym(m.components, 2, 2, Jet2(-1.0));
    set_sym(m.components, 3, 3, Jet2(-1.0));
    return m;
}

// Standard static form in (t, r, theta, phi), mapped onto the (t,x,y,z)
// coordinate slots. Evaluation requires r > 2M.
MetricJets schwarzschild_eval(const Point& p, double mass) {
    if (p[1] <= 2.0 * mass)
        throw DomainError("schwarzschild needs r > 2M", p);
    auto s = Jet2::seed_all(p);
    const Jet2 &R = s[1], &Th = s[2];
    Jet2 f = 1.0 - 2.0 * mass / R;
    MetricJets m;
    m.point = p;
    set_sym(m.components, 0, 0, f);
    set_sym(m.components, 1, 1, -1.0 / f);
    set_sym(m.components, 2, 2, -(R * R));
    set_sym(m.components, 3, 3, -(R * R) * sin(Th) * sin(Th));
    return m;
}

}  // namespace

MetricJets assemble_family(const GeneratorSet& gen, const Point& point) {
    return with_point(point, [&]() {
        auto s = Jet2::seed_all(point);
        const Jet2 &T = s[0], &X = s[1], &Y = s[2];

        Jet2 N = gen.N(Y);
        if (N.v == 0.0)
            throw DomainError("generator N must be nonzero (h = N K^2 and |N|^{1/2} enter the family)");
        Jet2 Ny = gen.N_y(Y);

        Jet2 V = gen.V_closed ? (*gen.V_closed)(T, Y)
                              : compute_V(gen, QuadratureSpec{gen.quad_y0, 1e-12}, point[0], point[2]);
        // V_y from the family relation (valid for every quadrature branch):
        // V_y/V = N_y/(2N) + q |N|^{-1/2}
        Jet2 Vy = V * (0.5 * Ny / N + gen.q(T) / abs_sqrt(N));

        Jet2 K = gen.K(T, X);
        Jet2 Kt = gen.K_t(T, X);
        Jet2 Kx = gen.K_x(T, X);

        Jet2 u = 2.0 * Kt * V;
        Jet2 v = Kx * V;
        Jet2 pp = Vy * K;
        Jet2 f = -(K * K);
        Jet2 h = N * (K * K);
        return from_upper(point, u, v, pp, f, h);
    });
}

double determinant(const MetricJets& m) {
    const Mat4 a = m.values();
    double det = 0.0;
    for (int c = 0; c < 4; ++c) {
        // Laplace expansion along the first row with explicit 3x3 minors
        int cols[3], k = 0;
        for (int j = 0; j < 4; ++j)
            if (j != c) cols[k++] = j;
        const double m3 =
            a[1][cols[0]] * (a[2][cols[1]] * a[3][cols[2]] - a[2][cols[2]] * a[3][cols[1]]) -
            a[1][cols[1]] * (a[2][cols[0]] * a[3][cols[2]] - a[2][cols[2]] * a[3][cols[0]]) +
            a[1][cols[2]] * (a[2][cols[0]] * a[3][cols[1]] - a[2][cols[1]] * a[3][cols[0]]);
        det += ((c % 2 == 0) ? 1.0 : -1.0) * a[0][c] * m3;
    }
    return det;
}

std::array<double, 4> leading_minors(const MetricJets& m) {
    const Mat4 a = m.values();
    std::array<double, 4> d{};
    d[0] = a[0][0];
    d[1] = a[0][0] * a[1][1] - a[0][1] * a[1][0];
    d[2] = a[0][0] * (a[1][1] * a[2][2] - a[1][2] * a[2][1]) -
           a[0][1] * (a[1][0] * a[2][2] - a[1][2] * a[2][0]) +
           a[0][2] * (a[1][0] * a[2][1] - a[1][1] * a[2][0]);
    d[3] = determinant(m);
    return d;
}

Mat4 inverse_metric(const MetricJets& m, double det_floor) {
    const double det = determinant(m);
    if (std::abs(det) < det_floor) throw DegenerateEventError(det, m.point);
    const Mat4 w = m.values();

    bool diagonal = true;
    for (int i = 0; i < 4 && diagonal; ++i)
        for (int j = 0; j < 4; ++j)
            if (i != j && w[i][j] != 0.0) {
                diagonal = false;
                break;
            }
    if (diagonal) {
        Mat4 inv{};
        for (int i = 0; i < 4; ++i) {
            if (w[i][i] == 0.0) throw DegenerateEventError(det, m.point);
            inv[i][i] = 1.0 / w[i][i];
        }
        return inv;
    }

    // The family's sparsity admits an exact inverse with no cancellation,
    // which keeps the big curvature contractions near machine precision
    // even where the components span many orders of magnitude.
    const double u = w[0][0], v = w[0][1], p = w[0][2], f = w[2][2], h = w[3][3];
    const bool family_shape = w[1][1] == 0.0 && w[1][2] == 0.0 && w[1][3] == 0.0 &&
                              w[0][3] == 0.0 && w[2][3] == 0.0 && v != 0.0 && f != 0.0 &&
                              h != 0.0;
    if (family_shape) {
        Mat4 inv{};
        inv[0][1] = inv[1][0] = 1.0 / v;
        inv[1][1] = (p * p - u * f) / (v * v * f);
        inv[1][2] = inv[2][1] = -p / (v * f);
        inv[2][2] = 1.0 / f;
        inv[3][3] = 1.0 / h;
        return inv;
    }

    // Gauss-Jordan with partial pivoting on [A | I]
    double a[4][8];
    const Mat4& v4 = w;
    for (int i = 0; i < 4; ++i) {
        for (int j = 0; j < 4; ++j) {
            a[i][j] = v4[i][j];
            a[i][4 + j] = (i == j) ? 1.0 : 0.0;
        }
    }
    for (int col = 0; col < 4; ++col) {
        int piv = col;
        for (int r = col + 1; r < 4; ++r)
            if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
        if (a[piv][col] == 0.0) throw DegenerateEventError(det, m.point);
        if (piv != col)
            for (int j = 0; j < 8; ++j) std::swap(a[piv][j], a[col][j]);
        const double inv_p = 1.0 / a[col][col];
        for (int j = 0; j < 8; ++j) a[col][j] *= inv_p;
        for (int r = 0; r < 4; ++r) {
            if (r == col) continue;
            const double factor = a[r][col];
            if (factor == 0.0) continue;
            for (int j = 0; j < 8; ++j) a[r][j] -= factor * a[col][j];
        }
    }
    Mat4 inv{};
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) inv[i][j] = a[i][4 + j];
    return inv;
}

double max_second_derivative(const MetricJets& m) {
    double mx = 0.0;
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            for (int a = 0; a < 4; ++a)
                for (int b = 0; b < 4; ++b)
                    mx = std::max(mx, std::abs(m.components[i][j].h[a][b]));
    return mx;
}

bool inside_margins(const MetricModel& model, const Margins& margins, const Point& p) {
    if (model.singular_set && model.singular_set(p)) return false;
    if (model.name == "minkowski") return true;
    if (model.name == "schwarzschild") {
        // r clear of the coordinate horizon, theta clear of the axis
        return p[1] > 0.0 && std::abs(std::sin(p[2])) > margins.sin_t_floor;
    }
    if (std::abs(std::sin(p[0])) <= margins.sin_t_floor) return false;
    if (std::abs(std::cos(p[0])) <= margins.cos_t_floor) return false;
    if (model.x_margin_applies && std::abs(p[1]) < margins.x_floor) return false;
    return true;
}

std::vector<Point> sample_events(const MetricModel& model, const Margins& margins, size_t n,
                                 uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::array<std::uniform_real_distribution<double>, 4> dist;
    for (int i = 0; i < 4; ++i)
        dist[i] = std::uniform_real_distribution<double>(model.box[i][0], model.box[i][1]);
    std::vector<Point> out;
    out.reserve(n);
    size_t guard = 0;
    while (out.size() < n) {
        if (++guard > 1000 * n) throw UsageError("event sampling failed: box is all margin");
        Point p{dist[0](rng), dist[1](rng), dist[2](rng), dist[3](rng)};
        if (inside_margins(model, margins, p)) out.push_back(p);
    }
    return out;
}

MetricModel builtin(const std::string& name, const ModelParams& params) {
    if (name == "example1") {
        MetricModel m = family_model(name, example1_generators());
        m.det_closed = example1_det;
        m.curvature_class = CurvatureClass::flat;
        return m;
    }
    if (name == "example2") {
        MetricModel m = family_model(name, example2_generators());
        m.det_closed = example2_det;
        m.curvature_class = CurvatureClass::curved_null_kret;
        m.default_grid.axes[1] = {-2.0, 2.0, 5};
        m.default_grid.axes[2] = {-2.0, 2.0, 5};
        return m;
    }
    if (name == "example3") {
        MetricModel m = family_model(name, example3_generators());
        m.det_closed = example3_det;
        m.curvature_class = CurvatureClass::curved_null_kret;
        m.x_margin_applies = true;
        m.singular_set = [](const Point& p) {
            return near_t_singularity(p[0]) || std::abs(p[1]) < kSingularTol;
        };
        m.default_grid = family_default_grid();
        m.default_grid.axes[1] = {0.5, 2.0, 5};
        return m;
    }
    if (name == "theorem1_instance") {
        if (params.c1 == 0.0) throw UsageError("theorem1_instance needs c1 != 0 (V would vanish)");
        MetricModel m = family_model(name, theorem1_generators(params.c1, params.c2));
        m.curvature_class = CurvatureClass::flat;
        return m;
    }
    if (name == "example1_direct" || name == "example2_direct" || name == "example3_direct") {
        MetricModel base = builtin(name.substr(0, name.size() - 7), params);
        MetricModel m;
        m.name = name;
        m.is_family = false;
        m.evaluate = name == "example1_direct"   ? example1_direct_eval
                     : name == "example2_direct" ? example2_direct_eval
                                                 : example3_direct_eval;
        m.singular_set = base.singular_set;
        m.det_closed = base.det_closed;
        m.x_margin_applies = base.x_margin_applies;
        m.box = base.box;
        m.default_grid = base.default_grid;
        m.curvature_class = base.curvature_class;
        return m;
    }
    if (name == "minkowski") {
        MetricModel m;
        m.name = name;
        m.evaluate = minkowski_eval;
        m.singular_set = [](const Point&) { return false; };
        m.det_closed = [](const Point&) { return -1.0; };
        m.box = family_box();
        m.default_grid = family_default_grid();
        m.curvature_class = CurvatureClass::flat;
        return m;
    }
    if (name == "schwarzschild") {
        if (params.mass <= 0.0) throw UsageError("schwarzschild needs mass > 0");
        const double M = params.mass;
        MetricModel m;
        m.name = name;
        m.evaluate = [M](const Point& p) { return schwarzschild_eval(p, M); };
        m.singular_set = [M](const Point& p) {
            return p[1] <= 2.0 * M || std::abs(std::sin(p[2])) < kSingularTol;
        };
        m.det_closed = [](const Point& p) {
            const double r = p[1], st = std::sin(p[2]);
            return -r * r * r * r * st * st;
        };
        m.box = {{{0.0, 1.0}, {2.2 * M, 12.0 * M}, {0.3, M_PI - 0.3}, {-3.0, 3.0}}};
        m.default_grid.axes[0] = {0.0, 0.0, 1};
        m.default_grid.axes[1] = {3.0 * M, 10.0 * M, 5};
        m.default_grid.axes[2] = {0.4, 2.74, 5};
        m.default_grid.axes[3] = {0.0, 1.0, 3};
        return m;
    }
    throw UsageError("unknown model '" + name + "'; available: " + [] {
        std::string all;
        for (const auto& n : builtin_names()) all += all.empty() ? n : ", " + n;
        return all;
    }());
}

std::vector<std::string> builtin_names() {
    return {"example1", "example1_direct", "example2",          "example2_direct",
            "example3", "example3_direct", "theorem1_instance", "minkowski",
            "schwarzschild"};
}

std::vector<double> axis_values(const AxisSpec& a) {
    std::vector<double> v;
    if (a.count <= 1) {
        v.push_back(a.min);
        return v;
    }
    v.reserve(a.count);
    const double step = (a.max - a.min) / (a.count - 1);
    for (int i = 0; i < a.count; ++i) v.push_back(a.min + step * i);
    return v;
}

}  // namespace rforge
