#pragma once

// The weighted Faddeev–Marchenko quadratic form on ℝ ∪ Λ, rational bases for
// the two Hardy-type subspaces, Gram assembly, and reproducing kernels by two
// routes: the Gram representer of point evaluation, and the regularized
// inversion (ε + I + H)⁻¹ applied to the unweighted kernel, where the matrix
// of I + H on the orthonormal rational basis realizes the form.
//
// The squared norm of f is
//   Σ_k |f(λ_k)|² ν(λ_k)
//   + (1/4π) ∫ [ |f(λ)|² + |f(−λ)|² − 2 Re( σ(λ)e^{2ixλ} f(λ) conj(f(−λ)) ) ] dλ.
//
// Boundary integrals are evaluated exactly by residue calculus whenever the
// symbol and both factors carry rational forms (pieces are grouped by their
// oscillation phase, so cancellations at infinity happen inside a single
// rational integrand); otherwise by quadrature on a grid resolving the phase.

#include "scattering.hpp"

#include <Eigen/Dense>

namespace sk {

// f(λ) = Σ_parts e^{i a λ} R(λ), plus its values on the data's mass points.
struct FMVector {
    struct Part {
        double phase = 0.0;
        BoundaryFn fn;
    };
    std::vector<Part> parts;
    std::vector<cplx> mass_values;

    cplx eval(cplx lambda) const {
        cplx acc = 0.0;
        for (const auto& p : parts)
            acc += std::exp(cplx(0.0, p.phase) * lambda) * p.fn(lambda);
        return acc;
    }
    static FMVector single(BoundaryFn fn, double phase = 0.0) {
        FMVector v;
        v.parts.push_back({phase, std::move(fn)});
        return v;
    }
    // fills mass_values by evaluating the parts at the data's mass points
    void attach_mass_values(const FMData& d);
};

// ⟨f, g⟩ in the weighted form of `d`; fm_norm returns the squared norm.
cplx fm_inner(const FMVector& f, const FMVector& g, const FMData& d);
double fm_norm(const FMVector& f, const FMData& d);

// Same form applied to raw samples on the profile's base grid (the output
// format of the duality maps).  The reflection channel uses the grid's exact
// node symmetry.
cplx fm_inner_grid(const GridFunction& f, const GridFunction& g, const FMData& d);
double fm_norm_grid(const GridFunction& f, const FMData& d);

enum class Flavor { H2, H2Hat };

// Orthonormal rational elements e_n(λ) = i√2 (λ−i)^n/(λ+i)^{n+1} and the
// flavor-dependent generating families built on them.
struct RationalBasis {
    std::vector<FMVector::Part> elems;
    Flavor flavor = Flavor::H2;

    size_t size() const { return elems.size(); }
    cplx eval(size_t n, cplx lambda) const {
        return std::exp(cplx(0.0, elems[n].phase) * lambda) * elems[n].fn(lambda);
    }

    static RationalFn tm_element(int n);              // e_n as a rational function
    static RationalBasis h2(int order);               // plain rational family
    // family with a Blaschke prefactor (divisor stability checks)
    static RationalBasis h2_prefixed(int order, const BlaschkeProduct& B, size_t from);
    // generating family of the analytic-continuation flavor for the given
    // data view: 1/s_e-divided elements at x = 0, phase-augmented rationals
    // for x > 0, plain rationals for x < 0
    static RationalBasis hat(int order, const FMData& d);
};

struct GramSystem {
    Eigen::MatrixXcd G;        // G(m,n) = ⟨e_n, e_m⟩
    Eigen::LDLT<Eigen::MatrixXcd> solver;
    double ridge = 0.0;        // jitter added to make the factorization succeed
    double cond_estimate = 0.0;
};

GramSystem gram_assemble(const RationalBasis& basis, const FMData& d);

struct KernelField {
    Flavor flavor = Flavor::H2;
    RationalBasis basis;
    Eigen::VectorXcd coeff;
    FMData data;
    cplx mu;
    double ridge_used = 0.0;
    double gram_cond = 0.0;

    cplx eval(cplx lambda) const;
    cplx mass_value(size_t k) const;
    double diag() const;                 // k(μ,μ), real nonnegative
    FMVector to_vector() const;

    // kernel of the translated space: e^{ix(λ−μ̄)} k_{x-data}(λ, μ)
    cplx translated_eval(cplx lambda) const;
    double translated_diag() const;
};

// Gram-representer route: solve G c = v, v_m = conj(e_m(μ)).
KernelField kernel_compute(Flavor flavor, const FMData& d, cplx mu, int order);

// Regularized-inversion route (independent implementation): boundary form
// assembled on its own finer quadrature, masses applied as a low-rank update,
// ridge schedule from the profile, stopping when the diagonal settles.
KernelField kernel_hankel(const FMData& d, cplx mu, int order);

// Both sides of the identity linking the kernel diagonal at λ₀ with the
// reflected-side analytic-continuation kernel of the Blaschke-divided data,
//   k(λ₀,λ₀) · k̂_mod(−λ̄₀,−λ̄₀) = 1 / (s(−λ̄₀) s(λ₀) (2 Im λ₀)²),
// plus the pointwise vector identity behind it.
struct KernelIdentityReport {
    double lhs = 0.0, rhs = 0.0;
    double relative_residual = 0.0;
    double vector_residual = 0.0;      // sup-norm residual of the pointwise identity
    double ridge_used = 0.0;
};
KernelIdentityReport kernel_identity_check(const DerivedData& d, cplx lambda0, int order);

// Flavor comparison and mass-truncation monotonicity of the normalized
// kernel diagonals.
struct FlavorOrderReport {
    double K_h2 = 0.0, K_hat = 0.0;      // normalized diagonals √k(λ₀,λ₀)
    double equality_gap = 0.0;           // |K_h2 − K_hat|
    std::vector<double> truncation_diagonals; // K for ν truncated to 0..N masses
    bool ordering_ok = true;             // K_h2 ≤ K_hat and monotone truncations
};
FlavorOrderReport lemma3_check(const DerivedData& d, cplx lambda0, int order);

} // namespace sk
