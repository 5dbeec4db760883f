#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scatterkern/grid.hpp"

#include <cmath>

using namespace sk;

TEST_CASE("gauss-legendre integrates polynomials exactly") {
    std::vector<double> x, w;
    gauss_legendre(8, x, w);
    double s = 0.0, s6 = 0.0;
    for (size_t i = 0; i < x.size(); ++i) {
        s += w[i];
        s6 += w[i] * std::pow(x[i], 6);
    }
    CHECK(std::abs(s - 2.0) < 1e-14);
    CHECK(std::abs(s6 - 2.0 / 7.0) < 1e-14);
}

TEST_CASE("tan grid: symmetry and rational tails") {
    RealGrid g = make_tan_grid(30, 12, 2e4);
    g.check_invariants();
    // ∫ dλ/(1+λ²) = π to near machine accuracy
    double v = g.integrate([](double t) { return 1.0 / (1.0 + t * t); });
    CHECK(std::abs(v - PI) < 1e-12);
    // ∫ dλ/(1+λ²)² = π/2
    double v2 = g.integrate([](double t) { return 1.0 / sq(1.0 + t * t); });
    CHECK(std::abs(v2 - PI / 2.0) < 1e-12);
    // a log-endpoint integrand: ∫ log(1+λ²)/(1+λ²) = 2π log 2
    double v3 = g.integrate([](double t) { return std::log(1.0 + t * t) / (1.0 + t * t); });
    CHECK(std::abs(v3 - 2.0 * PI * std::log(2.0)) < 2e-8);
}

TEST_CASE("oscillatory grid handles e^{iaλ} integrands") {
    double a = 7.0;
    RealGrid g = make_osc_grid(a, 120.0, 10);
    g.check_invariants();
    // ∫ e^{iaλ}/(1+λ²) dλ = π e^{−a}
    cplx v = 0.0;
    for (size_t i = 0; i < g.size(); ++i)
        v += g.weights[i] * std::exp(cplx(0.0, a * g.nodes[i])) / (1.0 + sq(g.nodes[i]));
    CHECK(std::abs(v - cplx(PI * std::exp(-a))) < 5e-9);
}

TEST_CASE("profiles are named and hashed") {
    GridProfile p = GridProfile::named("default");
    GridProfile f = GridProfile::named("fast");
    CHECK(p.hash() != f.hash());
    CHECK(p.tol.solver < p.tol.identity);
    CHECK(p.tol.identity < p.tol.asym);
    CHECK_THROWS(GridProfile::named("nope"));
}
