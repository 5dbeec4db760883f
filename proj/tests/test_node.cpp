#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "scatterkern/unitary_node.hpp"

#include <cmath>
#include <random>

using namespace sk;

namespace {
const cplx I(0.0, 1.0);
GridProfile profile = GridProfile::named("default");

std::shared_ptr<DerivedData> dataset(const std::string& name) {
    static std::map<std::string, std::shared_ptr<DerivedData>> cache;
    auto it = cache.find(name);
    if (it == cache.end())
        it = cache
                 .emplace(name,
                          std::make_shared<DerivedData>(derive(make_dataset(name), profile)))
                 .first;
    return it->second;
}

const cplx l0 = std::polar(1.0, PI / 4.0); // e^{iπ/4}
} // namespace

TEST_CASE("free data: basis vectors match their closed forms") {
    NodeBasis nb(dataset("zero"), l0, 20);
    double root = std::sqrt(2.0 * l0.imag());
    auto e1_exact = [&](cplx z) { return root * I / (z + std::conj(l0)); };
    auto e2_exact = [&](cplx z) { return root * I / (z - l0); };
    // boundary values
    for (double t : {-3.0, -0.6, 0.9, 4.0}) {
        CHECK(std::abs(nb.e1(cplx(t, 0.0)) - e1_exact(t)) < 1e-8);
        CHECK(std::abs(nb.e2(cplx(t, 0.0)) - e2_exact(t)) < 1e-8);
    }
    // interior continuation through the Cauchy transform
    for (cplx z : {cplx(0.5, 0.9), cplx(-1.2, 1.7), cplx(2.0, 0.4)}) {
        CHECK(std::abs(nb.e1(z) - e1_exact(z)) < 1e-7);
        CHECK(std::abs(nb.e2(z) - e2_exact(z)) < 1e-7);
    }
    // duality images are the raw continuation kernels
    cplx w(0.3, 1.1);
    CHECK(std::abs(nb.e1_minus(w) - root * hardy_kernel(w, l0)) < 1e-8);
    CHECK(std::abs(nb.e2_minus(w) - root * hardy_kernel(w, -std::conj(l0))) < 1e-8);
}

TEST_CASE("reflection pairing of the basis vectors") {
    for (const char* name : {"zero", "appendix1"}) {
        NodeBasis nb(dataset(name), l0, 22);
        const RealGrid& g = profile.base_grid();
        double worst = 0.0;
        for (size_t i = 0; i < g.size(); i += 61) {
            double t = g.nodes[i];
            worst = std::max(worst, std::abs(std::conj(nb.e2(cplx(-t, 0.0))) -
                                             nb.e1(cplx(t, 0.0))));
        }
        INFO(name);
        CHECK(worst < 1e-6);
    }
}

TEST_CASE("characteristic function") {
    SUBCASE("free closed form and the removable point") {
        NodeBasis nb(dataset("zero"), l0, 20);
        auto theta_exact = [&](cplx z) { return (z - std::conj(l0)) / (z + l0); };
        for (cplx z : {cplx(0.8, 0.6), cplx(1.5, 1.5), cplx(0.4, 2.0)})
            CHECK(std::abs(theta_eval(nb, z) - theta_exact(z)) < 1e-7);
        // at λ₀ the defining ratio is 0/0 but the regular parts stay finite
        cplx at_center = theta_eval(nb, l0);
        cplx nearby = theta_eval(nb, l0 + cplx(1e-4, 1e-4));
        CHECK(std::abs(at_center - theta_exact(l0)) < 1e-7);
        CHECK(std::abs(at_center - nearby) < 1e-3);
    }
    SUBCASE("disk contractivity scan") {
        NodeBasis nb(dataset("appendix1"), l0, 24);
        std::mt19937 rng(7);
        std::uniform_real_distribution<double> U(0.0, 1.0);
        double worst = 0.0;
        for (int k = 0; k < 200; ++k) {
            double r = 0.95 * std::sqrt(U(rng));
            double ph = 2.0 * PI * U(rng);
            worst = std::max(worst, std::abs(theta_at(nb, std::polar(r, ph))));
        }
        CHECK(worst <= 1.0 + 1e-6);
    }
    SUBCASE("local analyticity: first-order fit near the origin") {
        NodeBasis nb(dataset("zero"), l0, 20);
        double h = 1e-3;
        cplx t0 = theta_at(nb, cplx(0.0, 0.0));
        cplx tp = theta_at(nb, cplx(h, 0.0));
        cplx tm = theta_at(nb, cplx(-h, 0.0));
        cplx second = tp - 2.0 * t0 + tm; // curvature term must be O(h²)
        CHECK(std::abs(second) < 1e-4);
    }
}

TEST_CASE("kernel reconstruction from the node") {
    SUBCASE("free: matches the unweighted kernel at random pairs") {
        NodeBasis nb(dataset("zero"), l0, 20);
        std::mt19937 rng(11);
        std::uniform_real_distribution<double> U(-2.0, 2.0);
        double worst = 0.0;
        for (int k = 0; k < 20; ++k) {
            cplx a(U(rng), 0.4 + std::abs(U(rng)));
            cplx b(U(rng), 0.4 + std::abs(U(rng)));
            worst = std::max(worst, std::abs(kernel_via_theta(nb, a, b) - hardy_kernel(a, b)));
        }
        CHECK(worst < 1e-6);
    }
    SUBCASE("appendix1: agrees with the representer route") {
        auto d = dataset("appendix1");
        NodeBasis nb(d, l0, 24);
        FMData plus = make_view(*d, Side::Plus, 0.0);
        cplx mu(1.0, 1.0), z(1.0, 2.0);
        KernelField k = kernel_compute(Flavor::H2, plus, mu, 24);
        CHECK(std::abs(kernel_via_theta(nb, z, mu) - k.eval(z)) < 1e-4);
    }
    SUBCASE("hermitian symmetry of the reconstruction") {
        NodeBasis nb(dataset("appendix1"), l0, 22);
        cplx a(0.7, 1.1), b(-0.4, 0.8);
        CHECK(std::abs(kernel_via_theta(nb, a, b) -
                       std::conj(kernel_via_theta(nb, b, a))) < 1e-12);
    }
}

TEST_CASE("wronskian identities") {
    SUBCASE("free closed form at mu = 1") {
        NodeBasis nb(dataset("zero"), l0, 20);
        auto rep = wronskian_boundary(nb, 1.0);
        // (1/i)(log v)'(1) = 4·Im(λ₀²)/|1−λ₀²|² = 4/|1−i|² = 2
        CHECK(rep.rhs.real() == doctest::Approx(2.0).epsilon(1e-12));
        CHECK(std::abs(rep.rhs.imag()) < 1e-12);
        CHECK(rep.residual < 1e-6);
        auto rin = wronskian_interior(nb, cplx(1.0, 0.8));
        CHECK(rin.residual < 1e-6);
    }
    SUBCASE("16-point grids for the stock datasets") {
        for (const char* name : {"zero", "appendix1"}) {
            NodeBasis nb(dataset(name), l0, 24);
            double worst_b = 0.0, worst_i = 0.0, worst_imag = 0.0;
            for (int k = 0; k < 16; ++k) {
                double mu = 0.3 + 0.35 * k;
                auto rb = wronskian_boundary(nb, mu);
                worst_b = std::max(worst_b, rb.residual);
                worst_imag = std::max(worst_imag, std::abs(rb.lhs.imag()));
                worst_i = std::max(worst_i, wronskian_interior(nb, cplx(mu, 0.6)).residual);
            }
            INFO(name);
            CHECK(worst_b < 1e-4);
            CHECK(worst_i < 1e-4);
            CHECK(worst_imag < 1e-10); // both sides real on the positive axis
        }
    }
}

TEST_CASE("theta-side scattering data") {
    NodeBasis nb(dataset("zero"), l0, 20);
    ThetaData td = theta_scattering_data(nb);
    CHECK(td.isometry_residual < 1e-4);
    CHECK(td.contraction_excess < 1e-8);
    CHECK(td.min_density >= 0.0);
    for (double rho : td.nu_theta) CHECK(rho >= 0.0);
}
