#include "scatterkern/appendix.hpp"

#include <cmath>

namespace sk {

namespace {
const cplx I_unit(0.0, 1.0);
}

Eigen::Matrix2cd appendix1_divisor_closed_form(cplx lambda0, cplx lambda2) {
    double im = lambda0.imag(), re = lambda0.real();
    cplx l0s = lambda0 * lambda0, l0c = std::conj(lambda0) * std::conj(lambda0);
    Eigen::Matrix2cd M;
    M << -lambda2 + l0c, -lambda2 + l0c, lambda2 - l0s, lambda2 - l0s;
    return (Eigen::Matrix2cd::Identity() + (I_unit / re) * M) / std::sqrt(1.0 + 4.0 * im);
}

GoldenLedger appendix1_golden(const GridProfile& profile) {
    GoldenLedger ledger;
    auto d = std::make_shared<DerivedData>(derive(make_dataset("appendix1"), profile));
    FMData plus = make_view(*d, Side::Plus, 0.0);
    const int N = std::max(profile.basis_order, 28);
    cplx l0(1.0, 1.0);

    // (a) squared norm of the constant function
    {
        FMVector one = FMVector::single(BoundaryFn::constant(1.0));
        one.attach_mass_values(plus);
        double n = fm_norm(one, plus);
        ledger.items.push_back({"norm_of_constant", std::abs(n - 0.5), 1e-6});
    }

    // (b) continuation-flavor kernel: 2 + i/(λ−λ̄₀) at 20 sample pairs
    // (c) plain-flavor kernel: i/(λ−λ̄₀)
    {
        // centers sit where the rational family converges geometrically at the
        // default order; evaluation points roam freely
        std::vector<cplx> centers = {l0, cplx(0.5, 0.7), cplx(-1.0, 1.5), cplx(0.3, 2.5)};
        std::vector<cplx> points = {cplx(0.0, 2.0), cplx(1.0, 1.0), cplx(-1.5, 0.8),
                                    cplx(3.0, 0.5), cplx(0.2, 0.05)};
        double worst_hat = 0.0, worst_h2 = 0.0;
        for (cplx mu : centers) {
            KernelField khat = kernel_compute(Flavor::H2Hat, plus, mu, N);
            KernelField k = kernel_compute(Flavor::H2, plus, mu, N);
            for (cplx z : points) {
                worst_hat = std::max(worst_hat,
                                     std::abs(khat.eval(z) - (2.0 + hardy_kernel(z, mu))));
                worst_h2 = std::max(worst_h2, std::abs(k.eval(z) - hardy_kernel(z, mu)));
            }
        }
        ledger.items.push_back({"hat_kernel_closed_form_20pairs", worst_hat, 1e-5});
        ledger.items.push_back({"plain_kernel_standard_20pairs", worst_h2, 1e-6});
    }

    // (d) the constant is orthogonal to the plain generating family
    {
        FMVector one = FMVector::single(BoundaryFn::constant(1.0));
        one.attach_mass_values(plus);
        double worst = 0.0;
        for (int n = 0; n < 8; ++n) {
            FMVector en;
            en.parts.push_back({0.0, BoundaryFn::from_rational(RationalBasis::tm_element(n))});
            en.attach_mass_values(plus);
            worst = std::max(worst, std::abs(fm_inner(en, one, plus)));
        }
        ledger.items.push_back({"constant_orthogonal_to_plain", worst, 1e-8});
    }

    // (e) after translation by x = 0.5 the two flavors coincide
    {
        FMData view = make_view(*d, Side::Plus, 0.5);
        cplx mu(0.8, 1.2);
        KernelField k = kernel_compute(Flavor::H2, view, mu, N);
        KernelField khat = kernel_compute(Flavor::H2Hat, view, mu, N);
        double worst = 0.0;
        for (cplx z : {cplx(0.0, 1.0), cplx(1.3, 0.6), cplx(-2.0, 0.3)})
            worst = std::max(worst, std::abs(k.eval(z) - khat.eval(z)));
        worst = std::max(worst, std::abs(k.diag() - khat.diag()));
        ledger.items.push_back({"flavors_coincide_after_translation", worst, 1e-6});
    }

    // (f) left-limit divisor: affine in λ², matching the closed form
    {
        cplx l0n = std::sqrt(I_unit); // normalization point λ₀² = i
        double p1 = 0.9, p2 = 1.7, p3 = 2.4;
        Eigen::Matrix2cd B1 = left_limit_divisor(d, l0n, p1, N);
        Eigen::Matrix2cd B2 = left_limit_divisor(d, l0n, p2, N);
        Eigen::Matrix2cd B3 = left_limit_divisor(d, l0n, p3, N);
        // affine interpolation through λ² = p1², p2²
        Eigen::Matrix2cd Q = (B2 - B1) / (p2 * p2 - p1 * p1);
        Eigen::Matrix2cd P = B1 - Q * (p1 * p1);
        double linearity = (P + Q * (p3 * p3) - B3).norm() / B3.norm();
        double worst = linearity;
        for (cplx l2 : {cplx(0.0), cplx(1.0), I_unit}) {
            Eigen::Matrix2cd got = P + Q * l2;
            Eigen::Matrix2cd want = appendix1_divisor_closed_form(l0n, l2);
            worst = std::max(worst, (got - want).norm());
        }
        ledger.items.push_back({"left_limit_divisor_closed_form", worst, 1e-6});
        Eigen::Matrix2cd B0 = P; // value at λ² = 0
        double dist = (B0 - Eigen::Matrix2cd::Identity()).norm();
        // the divisor is genuinely different from the identity
        ledger.items.push_back({"left_limit_divisor_nontrivial", 0.1 - dist, 0.0 + 1e-12});
    }
    return ledger;
}

} // namespace sk
