#ifndef RFORGE_CURVATURE_HPP
#define RFORGE_CURVATURE_HPP

#include <set>
#include <string>

#include "rforge/metric.hpp"

namespace rforge {

using Tens3 = std::array<std::array<std::array<double, 4>, 4>, 4>;
using Tens4 = std::array<std::array<std::array<std::array<double, 4>, 4>, 4>, 4>;

// Everything the Levi-Civita connection yields at one event. Conventions:
//   Gamma^rho_{mu nu} = 1/2 g^{rho sigma}(d_mu g_{sigma nu} + d_nu g_{sigma mu} - d_sigma g_{mu nu})
//   R^rho_{sigma mu nu} = d_mu Gamma^rho_{nu sigma} - d_nu Gamma^rho_{mu sigma}
//                         + Gamma^rho_{mu lambda}Gamma^lambda_{nu sigma}
//                         - Gamma^rho_{nu lambda}Gamma^lambda_{mu sigma}
//   R_{alpha beta mu nu} = g_{alpha rho} R^rho_{beta mu nu},   R_{sigma nu} = R^mu_{sigma mu nu}.
// With these signs the curved example models satisfy, on their regular
// domain, R_{0202} = K w q q' |N|^{-1/2} e^{qI} and
// R_{0303} = -K w q q' |N|^{+1/2} e^{qI} (note the minus), all other index
// classes vanishing; the golden-value tests pin exactly this.
struct CurvatureBundle {
    Tens3 christoffel;     // [rho][mu][nu]
    Tens4 riemann_lowered; // [alpha][beta][mu][nu]
    Mat4 ricci;
    double scalar = 0.0;
    Mat4 einstein;
    double kretschmann = 0.0;
    Mat4 g_inv;
    double scale = 0.0;  // max |metric second derivative| at the event
    double gross = 0.0;  // max absolute-value-summed lowered-Riemann assembly:
                         // the size of what cancels, hence the noise yardstick
};

CurvatureBundle compute_bundle(const MetricJets& m, double det_floor = 1e-12);

// Index classes (canonical representative "abmn" with a<b, m<n, (ab)<=(mn))
// whose magnitude exceeds tol * scale.
std::set<std::string> riemann_nonzero_pattern(const CurvatureBundle& b, double tol);

// R^{abcd} R_{abcd} via four explicit inverse-metric contractions.
double kretschmann_scalar(const Tens4& riemann_lowered, const Mat4& g_inv);

}  // namespace rforge

#endif
