#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scatterkern/rational.hpp"

#include <cmath>

using namespace sk;

namespace {
const cplx I(0.0, 1.0);

cplx integral(const RationalFn& f, double a) {
    auto v = line_integral_group({f}, a);
    REQUIRE(v.has_value());
    return *v;
}
} // namespace

TEST_CASE("factored arithmetic and evaluation") {
    RationalFn f = RationalFn::blaschke(I); // (λ−i)/(λ+i)
    CHECK(std::abs(f.eval(I)) < 1e-15);
    CHECK(std::abs(std::abs(f.eval(1.0)) - 1.0) < 1e-15);

    RationalFn g = f * f;
    cplx z(0.3, 0.2);
    CHECK(std::abs(g.eval(z) - f.eval(z) * f.eval(z)) < 1e-14);
    CHECK(g.degree() == 0);

    RationalFn r = f.reflected();
    CHECK(std::abs(r.eval(z) - f.eval(-z)) < 1e-14);

    RationalFn c = f.conj_params();
    CHECK(std::abs(c.eval(1.7) - std::conj(f.eval(1.7))) < 1e-14);

    RationalFn s = f.star();
    CHECK(std::abs(s.eval(z) - std::conj(f.eval(-std::conj(z)))) < 1e-14);

    // b_i · conj-params(b_i) collapses to the constant 1
    RationalFn unit = f * f.conj_params();
    CHECK(unit.factors().empty());
    CHECK(std::abs(unit.eval(z) - cplx(1.0)) < 1e-15);

    RationalFn inv = f.reciprocal();
    CHECK(std::abs(inv.eval(z) * f.eval(z) - cplx(1.0)) < 1e-14);
}

TEST_CASE("derivative via the factored log-derivative") {
    RationalFn b = RationalFn::blaschke(I); // b' = 2i/(λ+i)²
    cplx expect = 2.0 * I / ((2.0 * I) * (2.0 * I));
    CHECK(std::abs(b.derivative_at(I) - expect) < 1e-14);

    RationalFn q = RationalFn::simple_pole(-I) * RationalFn::simple_pole(-I);
    cplx z(0.4, 0.9);
    cplx expect2 = -2.0 / std::pow(z + I, 3);
    CHECK(std::abs(q.derivative_at(z) - expect2) < 1e-13);
}

TEST_CASE("line integrals of single terms") {
    RationalFn f = RationalFn::simple_pole(I) * RationalFn::simple_pole(-I);
    CHECK(std::abs(integral(f, 0.0) - cplx(PI)) < 1e-13);
    CHECK(std::abs(integral(f * f, 0.0) - cplx(PI / 2.0)) < 1e-13);

    // ∫ e^{iaλ}/(λ²+1) dλ = π e^{−|a|}
    for (double a : {0.5, 2.0, -1.0, -3.7})
        CHECK(std::abs(integral(f, a) - cplx(PI * std::exp(-std::abs(a)))) < 1e-13);

    // analytic upstairs + upward closure → exactly zero
    RationalFn up = RationalFn::simple_pole(-I) * RationalFn::simple_pole(-2.0 * I);
    CHECK(std::abs(integral(up, 1.0)) == 0.0);
}

TEST_CASE("high pole multiplicities stay exact") {
    // ∫ b_i^n/(λ²+1) dλ = 0 for n ≥ 1: the zero at i cancels the only upper pole
    RationalFn f = RationalFn::simple_pole(I) * RationalFn::simple_pole(-I);
    RationalFn b = RationalFn::blaschke(I);
    RationalFn g = f;
    for (int k = 0; k < 10; ++k) g = g * b;
    CHECK(std::abs(integral(g, 0.0)) < 1e-15);

    // orthonormality of e_n = i√2 (λ−i)^n/(λ+i)^{n+1} at high order:
    // (1/2π) ∫ e_n conj(e_m) = δ_nm
    auto tm = [&](int n) {
        RationalFn r(I * std::sqrt(2.0));
        for (int j = 0; j < n; ++j) r = r * RationalFn::linear(I);
        for (int j = 0; j < n + 1; ++j) r = r * RationalFn::simple_pole(-I);
        return r;
    };
    for (auto [n, m] : {std::pair{24, 24}, {23, 24}, {17, 3}, {0, 24}}) {
        cplx v = integral(tm(n) * tm(m).conj_params(), 0.0) / (2.0 * PI);
        double expect = (n == m) ? 1.0 : 0.0;
        CHECK(std::abs(v - cplx(expect)) < 1e-14);
    }
}

TEST_CASE("groups: cancellation at infinity inside one phase class") {
    // the four pieces of ‖1‖² for s₊ = λ/(λ+i): each term has degree 0 but
    // the sum is 2/(1+λ²)
    RationalFn s_plus = RationalFn::linear(0.0) * RationalFn::simple_pole(-I);
    std::vector<RationalFn> terms = {RationalFn(cplx(1.0)), RationalFn(cplx(1.0)),
                                     s_plus.conj_params() * cplx(-1.0), s_plus * cplx(-1.0)};
    auto v = line_integral_group(terms, 0.0);
    REQUIRE(v.has_value());
    CHECK(std::abs(*v - cplx(2.0 * PI)) < 1e-14);
}

TEST_CASE("divergent groups are refused") {
    // b_i − b_2i decays only like 1/λ: the integral does not exist
    std::vector<RationalFn> terms = {RationalFn::blaschke(I),
                                     RationalFn::blaschke(2.0 * I) * cplx(-1.0)};
    CHECK_THROWS_AS(line_integral_group(terms, 0.0), ConditionViolation);
    // a lone constant is even worse
    CHECK_THROWS_AS(line_integral_group({RationalFn(cplx(1.0))}, 0.0), ConditionViolation);
}

TEST_CASE("identically cancelling groups give zero") {
    std::vector<RationalFn> terms = {RationalFn::blaschke(I) *
                                         RationalFn::blaschke(I).conj_params(),
                                     RationalFn(cplx(-1.0))};
    auto v = line_integral_group(terms, 0.0);
    REQUIRE(v.has_value());
    CHECK(std::abs(*v) < 1e-14);
}
