#ifndef RFORGE_GENERATORS_HPP
#define RFORGE_GENERATORS_HPP

#include <functional>
#include <optional>

#include "rforge/jet.hpp"

namespace rforge {

using JetFn1 = std::function<Jet2(const Jet2&)>;
using JetFn2 = std::function<Jet2(const Jet2&, const Jet2&)>;

// The free functions generating a family metric
//
//   g = [ 2K_tV  K_xV  KV_y  0 ]         V = w(t)|N(y)|^{1/2} exp{ q(t) I(y) },
//       [ K_xV   0     0     0 ]         I(y) = integral of |N|^{-1/2} dy
//       [ KV_y   0    -K^2   0 ]
//       [ 0      0     0   NK^2 ]
//
// All fields are jet-valued so every evaluation carries first and second
// derivatives. The metric components themselves contain K_t, K_x and V_y,
// so their jets need *third* derivatives of the generators; rather than
// extend the jet order, the set carries K_t, K_x and N_y as their own
// closed forms (each again differentiated by jet arithmetic), and V_y is
// recovered from the family relation V_y = V(N_y/(2N) + q|N|^{-1/2}),
// which holds for every choice of integration base point.
struct GeneratorSet {
    JetFn1 w;    // w(t)
    JetFn1 q;    // q(t)
    JetFn2 K;    // K(t,x), nonzero on the domain
    JetFn2 K_t;  // dK/dt
    JetFn2 K_x;  // dK/dx, nonzero on the domain
    JetFn1 N;    // N(y), strictly nonzero
    JetFn1 N_y;  // dN/dy

    // When the model ships a closed-form V(t,y) (the example space-times do,
    // matching their printed matrices bit-for-bit), assembly uses it;
    // otherwise V comes from quadrature with this base point.
    std::optional<JetFn2> V_closed;
    double quad_y0 = 0.0;
};

// Generator sets of the built-in family models.
GeneratorSet example1_generators();
GeneratorSet example2_generators();
GeneratorSet example3_generators();
GeneratorSet theorem1_generators(double c1, double c2);

}  // namespace rforge

#endif
