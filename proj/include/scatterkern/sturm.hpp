#pragma once

// Forward machinery for −y″ + q y = λ² y on the half line: the standard
// 2×2 transfer matrix (columns built from the cosine/sine solutions at 0),
// the Weyl function in the value-over-derivative convention
//   m₊(λ) = e⁺(0,λ)/ė⁺(0,λ),
// normalized decaying solutions, the triangularized node data (τ, a) at the
// normalization point, and the translation-derivative identity relating
// da/d(τ⁻²) to the boundary solution data.

#include "types.hpp"

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <string>
#include <vector>

namespace sk {

struct Potential {
    std::string name;
    std::function<double(double)> q;
    double support_end = 0.0; // free tail (q ≡ 0) beyond this point
};

// "zero" | "bump" (c / cosh²(x − center))
Potential make_potential(const std::string& name,
                         const std::map<std::string, double>& params = {});

// Marchenko-type weight ∫ (1+|x|)|q| over [0, support_end]
double marchenko_integral(const Potential& q);

struct SLTransfer {
    Eigen::Matrix2cd B;   // [[c, s],[ċ, ṡ]] at x
    double x = 0.0;
    cplx lambda;
    double det_defect = 0.0;         // |det B − 1|
    double conservation_residual = 0.0; // defect of the symplectic flux identity
};

// integrate d/dx B = [[0,1],[q−λ², 0]] B from 0 to x (fixed-step RK4 with a
// λ-aware step), tracking det and the flux identity
//   B*JB(x) − J + (λ²−λ̄²)∫₀ˣ B* e₁e₁ᵀ B = 0.
SLTransfer integrate_B(const Potential& q, cplx lambda, double x, int steps_hint = 0);

// Weyl function by backward integration from the free tail where the
// decaying solution is proportional to e^{iλx}.  Requires Im λ > 0.
cplx weyl_m_plus(const Potential& q, cplx lambda);

struct WeylData {
    cplx m_plus;          // at λ₀
    cplx rho_x0;          // normalization of the decaying solution on [x₀,∞)
    cplx rho_0;
    double tau = 0.0;     // ρ(0)/ρ(x₀), real positive after branch alignment
    cplx a;
    double tau_formula_residual = 0.0; // direct τ⁻² against the bracket formula
    double normalization_offdiag = 0.0; // |Ã(λ₀²)₂₁| (must vanish)
    double triangular_residual = 0.0;   // ‖Ã(λ₀²) − [[τ, aτ],[0, 1/τ]]‖
    double delta_det = 0.0;             // |det of the decaying-solution column matrix|
};

WeylData node_quantities(const Potential& q, cplx lambda0, double x0);

// assembled normalized transfer matrix Ã_{x₀}(λ²)
Eigen::Matrix2cd sl_transfer_normalized(const Potential& q, cplx lambda0, double x0,
                                        cplx lambda);

struct IdentityM9Report {
    cplx lhs;   // da/d(τ⁻²) by central differences in x₀
    cplx rhs;   // conj(c m₊ + s)/(c m₊ + s) at (x₀, λ₀)
    double relative_residual = 0.0;
};
IdentityM9Report m9_check(const Potential& q, cplx lambda0, double x0, double h = 1e-3);

} // namespace sk
