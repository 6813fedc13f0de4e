#include "rforge/curvature.hpp"

#include <cmath>

namespace rforge {

CurvatureBundle compute_bundle(const MetricJets& m, double det_floor) {
    CurvatureBundle b{};

    Mat4 g = m.values();
    // dg[a][i][j] = d_a g_ij, d2g[a][b][i][j] = d_a d_b g_ij, straight off the jets
    Tens3 dg{};
    double d2g[4][4][4][4];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) {
            const Jet2& c = m.components[i][j];
            for (int a = 0; a < 4; ++a) {
                dg[a][i][j] = c.g[a];
                for (int bb = 0; bb < 4; ++bb) d2g[a][bb][i][j] = c.h[a][bb];
            }
        }

    b.g_inv = inverse_metric(m, det_floor);
    b.scale = max_second_derivative(m);

    // Gamma^r_{mn} = 1/2 g^{rs} (d_m g_{sn} + d_n g_{sm} - d_s g_{mn})
    for (int r = 0; r < 4; ++r)
        for (int mu = 0; mu < 4; ++mu)
            for (int nu = mu; nu < 4; ++nu) {
                double s = 0.0;
                for (int si = 0; si < 4; ++si)
                    s += b.g_inv[r][si] *
                         (dg[mu][si][nu] + dg[nu][si][mu] - dg[si][mu][nu]);
                b.christoffel[r][mu][nu] = 0.5 * s;
                b.christoffel[r][nu][mu] = 0.5 * s;
            }

    // d_a g^{rs} = -g^{rp} (d_a g_{pq}) g^{qs}
    Tens3 dginv{};
    for (int a = 0; a < 4; ++a)
        for (int r = 0; r < 4; ++r)
            for (int s = 0; s < 4; ++s) {
                double acc = 0.0;
                for (int p = 0; p < 4; ++p)
                    for (int q = 0; q < 4; ++q)
                        acc += b.g_inv[r][p] * dg[a][p][q] * b.g_inv[q][s];
                dginv[a][r][s] = -acc;
            }

    // d_a Gamma^r_{mn}
    Tens4 dGamma{};
    for (int a = 0; a < 4; ++a)
        for (int r = 0; r < 4; ++r)
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = mu; nu < 4; ++nu) {
                    double s = 0.0;
                    for (int si = 0; si < 4; ++si) {
                        const double bracket =
                            dg[mu][si][nu] + dg[nu][si][mu] - dg[si][mu][nu];
                        const double dbracket = d2g[a][mu][si][nu] + d2g[a][nu][si][mu] -
                                                d2g[a][si][mu][nu];
                        s += dginv[a][r][si] * bracket + b.g_inv[r][si] * dbracket;
                    }
                    dGamma[a][r][mu][nu] = 0.5 * s;
                    dGamma[a][r][nu][mu] = 0.5 * s;
                }

    // R^r_{s mn} and its gross (absolute-value) counterpart
    Tens4 riem_up{}, riem_up_gross{};
    for (int r = 0; r < 4; ++r)
        for (int s = 0; s < 4; ++s)
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu) {
                    double val = dGamma[mu][r][nu][s] - dGamma[nu][r][mu][s];
                    double gross = std::abs(dGamma[mu][r][nu][s]) +
                                   std::abs(dGamma[nu][r][mu][s]);
                    for (int l = 0; l < 4; ++l) {
                        val += b.christoffel[r][mu][l] * b.christoffel[l][nu][s] -
                               b.christoffel[r][nu][l] * b.christoffel[l][mu][s];
                        gross += std::abs(b.christoffel[r][mu][l] *
                                          b.christoffel[l][nu][s]) +
                                 std::abs(b.christoffel[r][nu][l] *
                                          b.christoffel[l][mu][s]);
                    }
                    riem_up[r][s][mu][nu] = val;
                    riem_up_gross[r][s][mu][nu] = gross;
                }

    for (int al = 0; al < 4; ++al)
        for (int be = 0; be < 4; ++be)
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = 0; nu < 4; ++nu) {
                    double val = 0.0, gross = 0.0;
                    for (int r = 0; r < 4; ++r) {
                        val += g[al][r] * riem_up[r][be][mu][nu];
                        gross += std::abs(g[al][r]) * riem_up_gross[r][be][mu][nu];
                    }
                    b.riemann_lowered[al][be][mu][nu] = val;
                    b.gross = std::max(b.gross, gross);
                }

    // Ricci, scalar, Einstein
    for (int s = 0; s < 4; ++s)
        for (int nu = 0; nu < 4; ++nu) {
            double acc = 0.0;
            for (int mu = 0; mu < 4; ++mu) acc += riem_up[mu][s][mu][nu];
            b.ricci[s][nu] = acc;
        }
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) b.scalar += b.g_inv[i][j] * b.ricci[i][j];
    for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j)
            b.einstein[i][j] = b.ricci[i][j] - 0.5 * b.scalar * g[i][j];

    b.kretschmann = kretschmann_scalar(b.riemann_lowered, b.g_inv);
    return b;
}

double kretschmann_scalar(const Tens4& riemann_lowered, const Mat4& g_inv) {
    // Raise one index at a time: four successive contractions keep the
    // work at 4^5 per stage instead of 4^8 all at once.
    Tens4 t1{}, t2{}, t3{}, t4{};
    for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double acc = 0.0;
                    for (int p = 0; p < 4; ++p)
                        acc += g_inv[a][p] * riemann_lowered[p][bb][c][d];
                    t1[a][bb][c][d] = acc;
                }
    for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double acc = 0.0;
                    for (int p = 0; p < 4; ++p) acc += g_inv[bb][p] * t1[a][p][c][d];
                    t2[a][bb][c][d] = acc;
                }
    for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double acc = 0.0;
                    for (int p = 0; p < 4; ++p) acc += g_inv[c][p] * t2[a][bb][p][d];
                    t3[a][bb][c][d] = acc;
                }
    for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) {
                    double acc = 0.0;
                    for (int p = 0; p < 4; ++p) acc += g_inv[d][p] * t3[a][bb][c][p];
                    t4[a][bb][c][d] = acc;
                }
    double k = 0.0;
    for (int a = 0; a < 4; ++a)
        for (int bb = 0; bb < 4; ++bb)
            for (int c = 0; c < 4; ++c)
                for (int d = 0; d < 4; ++d) k += t4[a][bb][c][d] * riemann_lowered[a][bb][c][d];
    return k;
}

std::set<std::string> riemann_nonzero_pattern(const CurvatureBundle& b, double tol) {
    std::set<std::string> out;
    const double cut = tol * b.scale;
    for (int a = 0; a < 4; ++a)
        for (int bb = a + 1; bb < 4; ++bb)
            for (int mu = 0; mu < 4; ++mu)
                for (int nu = mu + 1; nu < 4; ++nu) {
                    if (10 * a + bb > 10 * mu + nu) continue;  // canonical pair order
                    if (std::abs(b.riemann_lowered[a][bb][mu][nu]) <= cut) continue;
                    std::string key;
                    key += char('0' + a);
                    key += char('0' + bb);
                    key += char('0' + mu);
                    key += char('0' + nu);
                    out.insert(key);
                }
    return out;
}

}  // namespace rforge
