#pragma once

// The rank-two node over the chain of translated subspaces: four normalized
// basis vectors (two translation-independent continuation kernels mapped
// through the duality, two translated-space kernels), the 2×2 transfer
// matrix — an entire function of λ² — its multiplicative divisors along the
// chain, the triangular normalization data (τ, a) at the normalization point
// λ₀² = i, the coefficient ratio β/α from translation derivatives of the
// continuation-kernel traces, and the first-order canonical system the chain
// satisfies.

#include "unitary_node.hpp"

#include <Eigen/Dense>

namespace sk {

class CanonicalNode {
public:
    // `shared` carries the translation-independent pair; pass it when building
    // chains so it is not recomputed per x
    CanonicalNode(std::shared_ptr<const DerivedData> d, cplx lambda0, double x, int order,
                  std::shared_ptr<const NodeBasis> shared = nullptr);

    cplx lambda0() const { return l0_; }
    double x() const { return x_; }

    cplx v(cplx lambda) const { return node_->v(lambda); }

    // the four basis vectors and the duality images of the translated pair
    cplx e1_1(cplx lambda) const { return node_->e1(lambda); } // translation-free
    cplx e1_2(cplx lambda) const { return node_->e2(lambda); }
    cplx e2_1(cplx lambda) const;                             // translated kernels
    cplx e2_2(cplx lambda) const;
    cplx e2_1_minus(cplx lambda) const;
    cplx e2_2_minus(cplx lambda) const;
    cplx e2_minus_free(cplx lambda) const;                    // duality image of e1_2

    // transfer matrix as a function of λ (depends on λ² only)
    Eigen::Matrix2cd transfer(cplx lambda) const;
    // the kernel-built matrix whose x-derivative generates the system
    Eigen::Matrix2cd ematrix(cplx lambda) const;
    Eigen::Matrix2cd ematrix_at_l0() const; // with the structural zero placed exactly

    double tau() const;        // √(translated kernel diagonal at λ₀)
    cplx a_value() const;      // s(λ₀)²(2 Im λ₀)² κ̂(λ₀,−λ̄₀;x)
    double tau_inv2_trace() const; // s(λ₀)s(−λ̄₀)(2 Im λ₀)² κ̂(−λ̄₀,−λ̄₀;x)

private:
    std::shared_ptr<const DerivedData> d_;
    cplx l0_, ml0_;
    double x_;
    int order_;
    std::shared_ptr<const NodeBasis> node_;   // translation-free pair
    KernelField kx1_, kx2_;      // translated kernels at λ₀, −λ̄₀
    KernelField khat_mod1_, khat_mod2_; // continuation kernels of the divided reflected data
    cplx c_minus1_, c_minus2_;   // constants matching the duality images upstairs
    double kx_norm_;             // e^{−x Im λ₀} √(k_x(λ₀,λ₀))

    cplx boundary_minus(const KernelField& k, double norm, double t) const;
    void match_constants();
};

// Divisor of the chain between x₁ < x₂ at real probe points ±λ:
//   [row at x₂](±λ) = [row at x₁](±λ) · B(λ²)
Eigen::Matrix2cd chain_divisor(const CanonicalNode& at_x1, const CanonicalNode& at_x2,
                               double lambda);

// Left-limit divisor at x → 0⁻: rows built from the analytic-continuation
// flavor at x = 0 against the plain flavor (exact, no limit required).
Eigen::Matrix2cd left_limit_divisor(std::shared_ptr<const DerivedData> d, cplx lambda0,
                                    double lambda, int order);

// β/α = −(s(λ₀)/s(−λ̄₀)) · d/dx κ̂(λ₀,−λ̄₀;x) / (d/dx κ̂(−λ̄₀,−λ̄₀;x)),
// central differences with one Richardson step.
cplx beta_over_alpha(std::shared_ptr<const DerivedData> d, cplx lambda0, double x, int order,
                     double h = 1e-3);

// coefficients in the translation gauge from the kernel-matrix derivative:
// j Ė E⁻¹ at λ₀ equals −[[α, 2β],[0, α]]
struct GaugeCoefficients {
    double alpha = 0.0;
    cplx beta;
    double offdiag_residual = 0.0; // size of the (2,1) entry that must vanish
};
GaugeCoefficients extract_coefficients(std::shared_ptr<const DerivedData> d, cplx lambda0,
                                       double x, int order, double h = 1e-3);

// fundamental solution of  j (d/dt) A = {iλ² [[α,β],[β̄,α]] + [[0,−β],[β̄,0]]} A
// from t₀ to t₁ with A(t₀) = I (classical fourth-order one-step method)
Eigen::Matrix2cd integrate_canonical(const std::function<double(double)>& alpha,
                                     const std::function<cplx(double)>& beta, cplx lambda2,
                                     double t0, double t1, int steps);

// j − A j A* (nonnegative for |v| < 1; zero for real λ²)
Eigen::Matrix2cd j_defect(const Eigen::Matrix2cd& A);

} // namespace sk
