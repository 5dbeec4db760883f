#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scatterkern/halfplane.hpp"

#include <cmath>

using namespace sk;

namespace {
const cplx I(0.0, 1.0);
GridProfile profile = GridProfile::named("default");
}

TEST_CASE("hardy kernel values") {
    CHECK(std::abs(hardy_kernel(I, I) - cplx(0.5)) < 1e-15);
    CHECK(std::abs(hardy_kernel(2.0 * I, I) - cplx(1.0 / 3.0)) < 1e-15);
    // k(λ₀,λ₀) = 1/(2 Im λ₀)
    CHECK(std::abs(hardy_kernel(3.0 * I, 3.0 * I) - cplx(1.0 / 6.0)) < 1e-15);
    CHECK_THROWS_AS(hardy_kernel(cplx(1.0, -1.0), cplx(1.0, 1.0)), ConditionViolation);
    // reflection symmetry k(−λ̄,−μ̄) = conj k(λ,μ)
    cplx l(0.7, 0.9), m(-0.3, 0.4);
    CHECK(std::abs(hardy_kernel(-std::conj(l), -std::conj(m)) -
                   std::conj(hardy_kernel(l, m))) < 1e-15);
}

TEST_CASE("hardy kernel reproduces rational test functions by quadrature") {
    const RealGrid& g = profile.base_grid();
    cplx mu(0.4, 1.3);
    for (int m = 1; m <= 4; ++m) {
        auto f = [&](cplx z) { return std::pow(z + I, -m); };
        cplx acc = 0.0;
        for (size_t i = 0; i < g.size(); ++i) {
            cplx t(g.nodes[i], 0.0);
            acc += g.weights[i] * f(t) * std::conj(hardy_kernel(t, mu));
        }
        acc /= 2.0 * PI;
        CHECK(std::abs(acc - f(mu)) < 1e-10);
    }
}

TEST_CASE("blaschke products") {
    BlaschkeProduct single({I});
    CHECK(std::abs(single.eval(I)) < 1e-15);
    CHECK(std::abs(single.eval(1.0) - cplx(0.0, -1.0)) < 1e-15); // (1−i)/(1+i) = −i
    CHECK(std::abs(std::abs(single.eval(5.7)) - 1.0) < 1e-14);

    // zero at 2i carries sign −1, so the factor at λ = 0 equals +1
    BlaschkeProduct high({2.0 * I});
    CHECK(std::abs(high.eval(0.0) - cplx(1.0)) < 1e-15);

    BlaschkeProduct both({I, 2.0 * I});
    for (double t : {-3.0, -0.5, 0.9, 14.0})
        CHECK(std::abs(std::abs(both.eval(t)) - 1.0) < 1e-13);

    // derivative at a zero: b_i'(i) = 1/(2i) times the other factors
    cplx d = single.derivative_at_zero(0);
    CHECK(std::abs(d - 1.0 / (2.0 * I)) < 1e-15);

    auto sums = both.condition_sums();
    CHECK(sums.first == doctest::Approx(1.0));
    CHECK(sums.second == doctest::Approx(0.5));
}

TEST_CASE("outer function from a boundary modulus") {
    const RealGrid& g = profile.base_grid();

    SUBCASE("unit modulus gives the constant 1") {
        OuterFunction o(g, std::vector<double>(g.size(), 0.0));
        CHECK(std::abs(o.eval(cplx(0.3, 2.0)) - cplx(1.0)) < 1e-10);
    }

    SUBCASE("|s_e|² = 1/(1+λ²) recovers i/(λ+i)") {
        std::vector<double> u(g.size());
        for (size_t i = 0; i < g.size(); ++i) u[i] = -0.5 * std::log(1.0 + sq(g.nodes[i]));
        OuterFunction o(g, u);
        CHECK(std::abs(o.eval(I) - cplx(0.5)) < 1e-8);
        for (cplx z : {cplx(1.0, 2.0), cplx(-0.7, 0.4), cplx(3.0, 0.2)})
            CHECK(std::abs(o.eval(z) - I / (z + I)) < 1e-7);
        // boundary round trip on |x| ≤ 10: modulus against the closed form,
        // and the full complex value (phase comes from the conjugate function)
        double worst_mod = 0.0, worst_val = 0.0;
        for (size_t i = 0; i < g.size(); i += 11) {
            double x = g.nodes[i];
            if (std::abs(x) > 10.0) continue;
            cplx got = o.boundary(x);
            double want = 1.0 / std::sqrt(1.0 + x * x);
            worst_mod = std::max(worst_mod, std::abs(std::abs(got) - want) / want);
            worst_val = std::max(worst_val, std::abs(got - I / cplx(x, 1.0)) / want);
        }
        CHECK(worst_mod < 1e-6);
        CHECK(worst_val < 1e-5);
    }
}

TEST_CASE("szego integral") {
    const RealGrid& g = profile.base_grid();
    SzegoResult z = szego_integral(g, [](double) { return cplx(0.0); });
    CHECK(z.finite);
    CHECK(std::abs(z.value) < 1e-12);

    // s₊ = λ/(λ+i):  ∫ log(1/(1+λ²))/(1+λ²) = −2π log 2; the complementary
    // modulus must be fed in stably since 1 − |s₊|² underflows at the far tail
    std::function<double(double)> stable = [](double t) { return 1.0 / (1.0 + t * t); };
    SzegoResult a =
        szego_integral(g, [](double t) { return t / cplx(t, 1.0); }, &stable);
    CHECK(a.finite);
    CHECK(a.value == doctest::Approx(-2.0 * PI * std::log(2.0)).epsilon(1e-7));

    SzegoResult wall = szego_integral(g, [](double t) {
        return std::abs(t) <= 1.0 ? cplx(1.0) : cplx(0.0);
    });
    CHECK(!wall.finite);
}

TEST_CASE("cauchy evaluation with and without a known pole") {
    const RealGrid& g = profile.base_grid();
    cplx mu(0.6, 1.1);
    std::vector<cplx> vals(g.size());
    for (size_t i = 0; i < g.size(); ++i) vals[i] = hardy_kernel(g.nodes[i], 2.0 * I);
    CHECK(std::abs(cauchy_eval(g, vals, mu) - hardy_kernel(mu, 2.0 * I)) < 1e-10);

    // meromorphic with one upper pole at p: f = 1/(λ − p)
    cplx p(0.5, 0.8);
    for (size_t i = 0; i < g.size(); ++i) vals[i] = 1.0 / (g.nodes[i] - p);
    CHECK(std::abs(cauchy_eval(g, vals, mu, {p}) - 1.0 / (mu - p)) < 1e-9);
}
