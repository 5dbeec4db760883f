#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scatterkern/fm.hpp"
#include "scatterkern/scattering.hpp"

#include <cmath>
#include <random>

using namespace sk;

namespace {
const cplx I(0.0, 1.0);
GridProfile profile = GridProfile::named("default");

GridFunction sample(const DerivedData& d, const std::function<cplx(cplx)>& f) {
    const RealGrid& g = d.profile.base_grid();
    GridFunction out;
    out.on_grid.resize(g.size());
    for (size_t i = 0; i < g.size(); ++i) out.on_grid[i] = f(cplx(g.nodes[i], 0.0));
    for (const auto& m : d.data.masses) out.on_masses.push_back(f(m.lambda));
    return out;
}
} // namespace

TEST_CASE("validate: stock datasets") {
    auto zero = validate(make_dataset("zero"), profile);
    CHECK(zero.pass());
    CHECK(std::abs(zero.szego.value) < 1e-12);

    auto a1 = validate(make_dataset("appendix1"), profile);
    CHECK(a1.pass());
    CHECK(a1.szego.value == doctest::Approx(-2.0 * PI * std::log(2.0)).epsilon(1e-6));
    CHECK(a1.symmetry_residual < 1e-12);

    auto train = validate(make_dataset("mass-train"), profile);
    CHECK(train.pass());
    // Σ 1/k², k ≤ 50
    double s = 0.0;
    for (int k = 1; k <= 50; ++k) s += 1.0 / (double(k) * k);
    CHECK(train.blaschke_sum_small == doctest::Approx(s));

    CHECK(!validate(make_dataset("hardwall"), profile).szego.finite);
    CHECK(validate(make_dataset("lemma5"), profile).pass());
    CHECK(validate(make_dataset("const-half"), profile).pass());
    CHECK(validate(make_dataset("plateau"), profile).pass());
}

TEST_CASE("derive: closed-form cases") {
    SUBCASE("zero data") {
        DerivedData d = derive(make_dataset("zero"), profile);
        CHECK(std::abs(d.s_e(cplx(0.3, 0.7)) - cplx(1.0)) < 1e-14);
        CHECK(std::abs(d.s(cplx(1.0, 0.5)) - cplx(1.0)) < 1e-14);
        CHECK(std::abs(d.s_minus(cplx(2.0, 0.0))) < 1e-14);
    }
    SUBCASE("appendix1: s = i/(λ+i), reflected side coincides") {
        DerivedData d = derive(make_dataset("appendix1"), profile);
        for (cplx z : {cplx(0.0, 1.0), cplx(1.5, 0.2), cplx(-2.0, 3.0)})
            CHECK(std::abs(d.s(z) - I / (z + I)) < 1e-13);
        for (double t : {-4.0, 0.3, 9.0})
            CHECK(std::abs(d.s_minus(t) - d.data.s_plus(t)) < 1e-13);
        CHECK(d.s_e(I).real() == doctest::Approx(0.5));
        CHECK(std::abs(d.s_e(I).imag()) < 1e-14);
    }
    SUBCASE("pure point mass: s = 1/b_i and the dual weight is 4") {
        DerivedData d = derive(make_dataset("one-mass"), profile);
        cplx z(0.8, 0.6);
        CHECK(std::abs(d.s(z) - (z + I) / (z - I)) < 1e-13);
        // (1/s)'(i) = b_i'(i) = 1/(2i), so ν₋ = 1/|1/(2i)|² = 4
        CHECK(std::abs(d.inv_s_deriv[0] - 1.0 / (2.0 * I)) < 1e-13);
        CHECK(d.masses_minus[0].weight == doctest::Approx(4.0));
    }
    SUBCASE("mass dual weight against a finite-difference derivative") {
        DerivedData d = derive(make_dataset("two-mass"), profile);
        for (size_t k = 0; k < 2; ++k) {
            cplx lk = d.data.masses[k].lambda;
            double h = 1e-5 * std::max(1.0, std::abs(lk));
            auto inv_s = [&](cplx z) { return 1.0 / d.s(z); };
            // central difference with one Richardson step
            cplx d1 = (inv_s(lk + h) - inv_s(lk - h)) / (2.0 * h);
            cplx d2 = (inv_s(lk + h / 2.0) - inv_s(lk - h / 2.0)) / h;
            cplx fd = (4.0 * d2 - d1) / 3.0;
            double rel = std::abs(fd - d.inv_s_deriv[k]) / std::abs(fd);
            CHECK(rel < 1e-6);
            CHECK(d.data.masses[k].weight * d.masses_minus[k].weight *
                      abs2(d.inv_s_deriv[k]) ==
                  doctest::Approx(1.0).epsilon(1e-10));
        }
    }
}

TEST_CASE("scattering matrix is unitary and reflection-symmetric") {
    for (const char* name : {"zero", "appendix1", "one-mass", "two-mass", "const-half", "lemma5"}) {
        DerivedData d = derive(make_dataset(name), profile);
        const RealGrid& g = profile.base_grid();
        double worst_unit = 0.0, worst_sym = 0.0;
        for (size_t i = 0; i < g.size(); i += 7) {
            double t = g.nodes[i];
            cplx sm = d.s_minus(t), s = d.s(t), sp = d.data.s_plus(t);
            // rows of [[s₋, s],[s, s₊]] must be orthonormal
            double r1 = std::abs(abs2(sm) + abs2(s) - 1.0);
            double r2 = std::abs(abs2(s) + abs2(sp) - 1.0);
            double r3 = std::abs(sm * std::conj(s) + s * std::conj(sp));
            worst_unit = std::max({worst_unit, r1, r2, r3});
            // S*(−λ̄) = S(λ) entrywise on the paired node
            worst_sym = std::max(worst_sym, std::abs(std::conj(d.s(-t)) - s));
            worst_sym = std::max(worst_sym, std::abs(std::conj(d.s_minus(-t)) - sm));
        }
        INFO(name);
        CHECK(worst_unit < 1e-10);
        CHECK(worst_sym < 1e-10);
    }
}

TEST_CASE("translation wrapper") {
    auto base = std::make_shared<DerivedData>(derive(make_dataset("one-mass"), profile));
    TranslatedData t0 = translate(base, 0.0);
    CHECK(t0.x == 0.0);
    TranslatedData t = translate(translate(base, 0.3), 0.7);
    CHECK(t.x == doctest::Approx(1.0));
    // mass factor e^{2iλ₁x} at λ₁ = i, x = 1 is e^{−2}
    FMData v = make_view(*base, Side::Plus, 1.0);
    CHECK(v.masses[0].weight == doctest::Approx(std::exp(-2.0)));
    // pointwise symbol composition: translating twice equals translating once
    FMData va = make_view(*base, Side::Plus, 0.3 + 0.7);
    CHECK(va.masses[0].weight == doctest::Approx(v.masses[0].weight).epsilon(1e-12));
}

TEST_CASE("duality map") {
    SUBCASE("free data: f ↦ −f(−λ) and the norm is kept") {
        DerivedData d = derive(make_dataset("zero"), profile);
        GridFunction f = sample(d, [](cplx z) { return hardy_kernel(z, cplx(0.0, 1.0)); });
        GridFunction fm = duality_map(f, d, Side::Plus);
        const RealGrid& g = profile.base_grid();
        for (size_t i = 0; i < g.size(); i += 31)
            CHECK(std::abs(fm.on_grid[i] + f.on_grid[g.size() - 1 - i]) < 1e-14);
        FMData pv = make_view(d, Side::Plus, 0.0), mv = make_view(d, Side::Minus, 0.0);
        double n0 = fm_norm_grid(f, pv), n1 = fm_norm_grid(fm, mv);
        CHECK(n0 == doctest::Approx(0.5).epsilon(1e-9)); // ‖k(·,i)‖² = k(i,i)
        CHECK(n1 == doctest::Approx(n0).epsilon(1e-10));
    }
    SUBCASE("appendix1: the constant function maps to −1") {
        DerivedData d = derive(make_dataset("appendix1"), profile);
        GridFunction one = sample(d, [](cplx) { return cplx(1.0); });
        GridFunction m = duality_map(one, d, Side::Plus);
        const RealGrid& g = profile.base_grid();
        for (size_t i = 0; i < g.size(); i += 53)
            CHECK(std::abs(m.on_grid[i] + 1.0) < 1e-7);
    }
    SUBCASE("isometry on random rational functions, and invertibility") {
        std::mt19937 rng(20240811);
        std::uniform_real_distribution<double> U(-1.0, 1.0);
        for (const char* name : {"appendix1", "one-mass", "lemma5"}) {
            DerivedData d = derive(make_dataset(name), profile);
            FMData pv = make_view(d, Side::Plus, 0.0), mv = make_view(d, Side::Minus, 0.0);
            for (int rep = 0; rep < 3; ++rep) {
                cplx a(U(rng), U(rng)), b(U(rng), U(rng));
                cplx p1(U(rng), 1.0 + 0.8 * std::abs(U(rng)));
                auto f = [&](cplx z) {
                    return a * hardy_kernel(z, p1) + b / ((z + I) * (z + 2.0 * I));
                };
                GridFunction gf = sample(d, f);
                GridFunction gm = duality_map(gf, d, Side::Plus);
                double n0 = fm_norm_grid(gf, pv), n1 = fm_norm_grid(gm, mv);
                INFO(std::string(name));
                CHECK(std::abs(n1 - n0) / n0 < 1e-6);
                GridFunction back = duality_map(gm, d, Side::Minus);
                const RealGrid& g = profile.base_grid();
                for (size_t i = 0; i < g.size(); i += 97)
                    CHECK(std::abs(back.on_grid[i] - gf.on_grid[i]) <
                          1e-7 * (1.0 + std::abs(gf.on_grid[i])));
                for (size_t k = 0; k < gf.on_masses.size(); ++k)
                    CHECK(std::abs(back.on_masses[k] - gf.on_masses[k]) < 1e-10);
            }
        }
    }
}
