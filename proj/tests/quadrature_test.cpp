#include <doctest.h>

#include <cmath>

#include "rforge/quadrature.hpp"

using rforge::adaptive_simpson;

TEST_SUITE("quadrature") {

TEST_CASE("known smooth integrals") {
    CHECK(adaptive_simpson([](double s) { return std::sin(s); }, 0.0, M_PI) ==
          doctest::Approx(2.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double s) { return std::exp(s); }, 0.0, 1.0) ==
          doctest::Approx(std::exp(1.0) - 1.0).epsilon(1e-12));
    CHECK(adaptive_simpson([](double) { return 1.0; }, -2.0, 3.0) == doctest::Approx(5.0));
}

TEST_CASE("orientation and empty interval") {
    const double fwd = adaptive_simpson([](double s) { return s * s; }, 0.0, 2.0);
    const double rev = adaptive_simpson([](double s) { return s * s; }, 2.0, 0.0);
    CHECK(fwd == doctest::Approx(8.0 / 3.0).epsilon(1e-13));
    CHECK(rev == doctest::Approx(-8.0 / 3.0).epsilon(1e-13));
    CHECK(adaptive_simpson([](double s) { return std::cos(s); }, 1.3, 1.3) == 0.0);
}

TEST_CASE("the family integrand 1/(2+sin y) against its antiderivative") {
    // F(y) = (2/sqrt(3)) atan((2 tan(y/2)+1)/sqrt(3)) on (-pi, pi)
    auto F = [](double y) {
        return 2.0 / std::sqrt(3.0) * std::atan((2.0 * std::tan(y / 2.0) + 1.0) / std::sqrt(3.0));
    };
    auto f = [](double s) { return 1.0 / (2.0 + std::sin(s)); };
    for (auto [a, b] : {std::pair{-1.0, 2.5}, {0.0, 0.7}, {-2.9, -0.2}}) {
        CHECK(adaptive_simpson(f, a, b) == doctest::Approx(F(b) - F(a)).epsilon(1e-11));
    }
}

TEST_CASE("tolerance actually tightens the estimate") {
    auto f = [](double s) { return std::exp(-s * s); };
    const double loose = adaptive_simpson(f, 0.0, 3.0, 1e-4);
    const double tight = adaptive_simpson(f, 0.0, 3.0, 1e-13);
    const double ref = 0.88620734825997441;  // sqrt(pi)/2 * erf(3)
    CHECK(std::abs(tight - ref) <= std::abs(loose - ref) + 1e-15);
    CHECK(tight == doctest::Approx(ref).epsilon(1e-12));
}

}  // TEST_SUITE
