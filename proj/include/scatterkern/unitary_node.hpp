#pragma once

// The rank-one unitary node attached to the data at a point λ₀ in the open
// first quadrant: normalized basis vectors e₁, e₂ obtained by mapping the
// reflected-side continuation kernels through the duality, the scalar
// characteristic function θ of the multiplication operator by v̄ with
//   v(λ) = (λ² − λ₀²)/(λ² − λ̄₀²),
// the kernel reconstruction from θ, the Wronskian-type identities, and the
// rewriting of the norm through θ-side scattering data.

#include "fm.hpp"

namespace sk {

class NodeBasis {
public:
    NodeBasis(std::shared_ptr<const DerivedData> d, cplx lambda0, int order);

    cplx lambda0() const { return lambda0_; }
    const DerivedData& derived() const { return *d_; }

    cplx v(cplx lambda) const;
    cplx v_prime(cplx lambda) const;
    // (1/i)(log v)'(λ); for real μ this equals 4μ Im(λ₀²)/|μ²−λ₀²|²
    cplx log_v_prime_over_i(cplx lambda) const;

    // e₁ has its only upper pole at −λ̄₀, e₂ at λ₀; E_i are the regular parts
    //   E₁ = b_{−λ̄₀}·e₁ and E₂ = b_{λ₀}·e₂,
    // so that (v e₂) = E₂/b_{−λ̄₀} and e₁/(v e₂) = E₁/E₂ everywhere.
    cplx e1(cplx lambda) const;
    cplx e2(cplx lambda) const;
    cplx E1(cplx lambda) const;
    cplx E2(cplx lambda) const;

    // the un-mapped continuation kernels (the duality images of e₁, e₂)
    cplx e1_minus(cplx lambda) const;
    cplx e2_minus(cplx lambda) const;

    double khat_diag() const { return khat_diag_; }

private:
    std::shared_ptr<const DerivedData> d_;
    cplx lambda0_, ml0_;
    int order_;
    KernelField khat1_, khat2_;   // reflected-side continuation kernels at λ₀, −λ̄₀
    double khat_diag_ = 0.0;      // k̂(λ₀,λ₀) on the reflected side
    std::vector<cplx> E1_bnd_, E2_bnd_;  // boundary data of s_e·E_i for Cauchy evaluation
    cplx boundary_e(int which, double t) const;
};

// θ(v(λ)) = e₁(λ)/(v(λ)e₂(λ)), evaluated through the regular parts.
cplx theta_eval(const NodeBasis& nb, cplx lambda);
// θ at a point of the open unit disk (inverts v into the first quadrant).
cplx theta_at(const NodeBasis& nb, cplx zeta);

// kernel reconstruction [(ve₂)(λ)conj((ve₂)(μ)) − e₁(λ)conj(e₁(μ))]/(1 − v(λ)conj(v(μ)))
cplx kernel_via_theta(const NodeBasis& nb, cplx lambda, cplx mu);

struct WronskianReport {
    cplx lhs, rhs;
    double residual;          // |lhs − rhs| / scale
    double scale;
};
// interior identity: det[[s e₂⁻, s e₁⁻],[e₂, e₁]](μ) = (1/i)(log v)'(μ)
WronskianReport wronskian_interior(const NodeBasis& nb, cplx mu);
// boundary identity on ℝ₊: |e₂(μ)|² − |e₁(μ)|² = (1/i)(log v)'(μ)
WronskianReport wronskian_boundary(const NodeBasis& nb, double mu);

struct ThetaData {
    std::vector<double> lambda_real;    // sample points on ℝ₊
    std::vector<cplx> s_plus_theta;     // e₂(−λ)/e₂(λ)
    std::vector<double> y_imag;         // sample points on the imaginary axis
    std::vector<double> nu_theta;       // densities |dv|/(2π|e₂|²) dy
    double isometry_residual = 0.0;     // worst relative defect over test functions
    double contraction_excess = 0.0;    // max(|s₊^θ| − 1)₊ over samples
    double min_density = 0.0;
};
ThetaData theta_scattering_data(const NodeBasis& nb, int n_test_functions = 5);

} // namespace sk
