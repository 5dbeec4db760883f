#pragma once

// Complex-analysis primitives on the upper half-plane: the Hardy reproducing
// kernel, Blaschke factors and products, outer functions recovered from a
// boundary modulus through the Schwarz integral, and Cauchy evaluation of
// Hardy-class boundary data at interior points.
//
// Norm convention:  ‖f‖² = (1/2π) ∫_ℝ |f|² dλ,  so k(λ,μ) = i/(λ − μ̄).

#include "grid.hpp"
#include "rational.hpp"
#include "types.hpp"

#include <functional>
#include <optional>
#include <vector>

namespace sk {

// Reproducing kernel of H²(ℂ₊) under the (1/2π)dλ norm.
inline cplx hardy_kernel(cplx lambda, cplx mu) {
    cplx d = lambda - std::conj(mu);
    if (std::abs(d) < 1e-14)
        throw ConditionViolation("hardy_kernel: pole at lambda = conj(mu)");
    return cplx(0.0, 1.0) / d;
}

// Elementary Blaschke factor b_z(λ) = (λ − z)/(λ − z̄), Im z > 0.
inline cplx blaschke_factor(cplx lambda, cplx z) { return (lambda - z) / (lambda - std::conj(z)); }

// Signed Blaschke product over a stored index range.  The factor at z_k is
// taken with sign −1 exactly when z_k/i > 1, which keeps partial products of
// point-mass divisors convergent as the range grows.
class BlaschkeProduct {
public:
    BlaschkeProduct() = default;
    explicit BlaschkeProduct(std::vector<cplx> zeros);

    static int factor_sign(cplx z) { return (z.imag() > 1.0) ? -1 : +1; }

    size_t size() const { return zeros_.size(); }
    const std::vector<cplx>& zeros() const { return zeros_; }

    cplx eval(cplx lambda) const;
    // derivative at a zero z_k (the only place it is needed); exact product rule
    cplx derivative_at_zero(size_t k) const;
    // product over zeros with index >= from (a divisor whose complement is finite)
    cplx eval_tail(cplx lambda, size_t from) const;

    RationalFn rational() const;

    // Blaschke condition sums: Σ_{z/i ≤ 1} z/i  and  Σ_{z/i > 1} i/z over the
    // stored zeros (both must stay finite for admissible data).
    std::pair<double, double> condition_sums() const;

private:
    std::vector<cplx> zeros_;
    std::vector<int> signs_;
};

// exp of the Schwarz integral of a boundary log-modulus; phase-normalised so
// the value at λ = i is real and positive.
class OuterFunction {
public:
    // log_modulus sampled on grid.nodes
    OuterFunction(const RealGrid& grid, std::vector<double> log_modulus);

    cplx eval(cplx lambda) const;            // Im λ > 0
    cplx boundary(double t) const;           // boundary value at a real point
    double boundary_log_modulus(double t) const;

private:
    const RealGrid* grid_;
    std::vector<double> u_;       // log modulus samples
    double phase_at_i_ = 0.0;     // subtracted so eval(i) > 0
    double schwarz_exponent_imag(cplx lambda, cplx& out) const;
};

// ∫ log(1 − |s₊|²)/(1+λ²) dλ on the grid; −inf flagged via the bool.  When a
// stable evaluation of 1 − |s₊|² is available (the squared outer modulus),
// pass it as `one_minus_s2` — the raw difference saturates in doubles where
// |s₊| → 1.
struct SzegoResult {
    double value = 0.0;
    bool finite = true;
};
SzegoResult szego_integral(const RealGrid& grid, const std::function<cplx(double)>& s_plus,
                           const std::function<double(double)>* one_minus_s2 = nullptr);

// Cauchy evaluation of an H²-class boundary function at Im μ > 0:
//   f(μ) = (1/2πi) ∫ f(t)/(t − μ) dt.
// `known_poles` lifts meromorphic functions with finitely many known upper
// poles: the data is multiplied by the corresponding Blaschke factors before
// the integral and divided back afterwards.
cplx cauchy_eval(const RealGrid& grid, const std::vector<cplx>& boundary_values, cplx mu,
                 const std::vector<cplx>& known_poles = {});

// A complex function on ℝ (with upper-half-plane continuation when meaningful),
// carrying its exact rational form when one exists.
struct BoundaryFn {
    std::function<cplx(cplx)> f;
    std::optional<RationalFn> rat;

    cplx operator()(cplx z) const { return f(z); }
    bool has_rational() const { return rat.has_value(); }

    static BoundaryFn from_rational(RationalFn r) {
        BoundaryFn b;
        b.rat = std::move(r);
        b.f = [rr = *b.rat](cplx z) { return rr.eval(z); };
        return b;
    }
    static BoundaryFn constant(cplx c) { return from_rational(RationalFn(c)); }
    static BoundaryFn from_handle(std::function<cplx(cplx)> h) {
        BoundaryFn b;
        b.f = std::move(h);
        return b;
    }
};

} // namespace sk
