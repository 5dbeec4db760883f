#pragma once

// Rational functions kept in fully factored form,
//
//   R(λ) = c · Π_i (λ − z_i)^{k_i} / Π_j (λ − p_j)^{m_j},
//
// and real-line integrals of sums of such terms against e^{iaλ}.
//
// Factored form is the whole point: our integrands carry poles of
// multiplicity ~2·(basis order) at ±i, where any coefficient-space
// representation loses all precision.  Sums are never expanded; a group of
// terms sharing one oscillation phase is integrated as follows:
//   a = 0   — the line maps to the unit circle under w = (λ−i)/(λ+i); the
//             integral equals the contour integral over |w| = ρ < 1
//             enclosing the same poles, evaluated by the trapezoid rule
//             (spectrally exact, pointwise-stable in factored form).
//   a ≠ 0   — close the contour in the half-plane where the phase decays:
//             empty pole set gives an exact zero; small pole multiplicities
//             are handled by local Taylor series; anything else falls back
//             to quadrature at the call site.

#include "types.hpp"

#include <optional>
#include <vector>

namespace sk {

using lcplx = std::complex<long double>;

struct FactorTerm {
    cplx location;
    int multiplicity = 1; // positive: zero factor, negative: pole factor
};

class RationalFn {
public:
    RationalFn() = default;                      // constant 1
    explicit RationalFn(cplx constant);          // constant c (c = 0 gives the zero function)

    static RationalFn zero();
    static RationalFn linear(cplx z);            // (λ − z)
    static RationalFn simple_pole(cplx p);       // 1/(λ − p)
    static RationalFn blaschke(cplx z, int sign = +1);

    bool is_zero() const { return zero_; }
    int degree() const;                          // Σ zero mult − Σ pole mult

    cplx eval(cplx lambda) const;
    cplx derivative_at(cplx lambda) const;       // exact log-derivative rule

    RationalFn operator*(const RationalFn& o) const;
    RationalFn operator*(cplx c) const;
    RationalFn reflected() const;                // λ ↦ f(−λ)
    RationalFn conj_params() const;              // λ ↦ conj(f(conj λ))
    RationalFn star() const { return reflected().conj_params(); }
    RationalFn reciprocal() const;

    const std::vector<FactorTerm>& factors() const { return factors_; }
    cplx scale() const { return cplx(scale_); }

    // all pole locations with Im strictly of the given sign
    std::vector<FactorTerm> poles_in_half_plane(bool upper) const;
    int max_pole_multiplicity(bool upper) const;

private:
    lcplx scale_ = 1.0L;
    bool zero_ = false;
    std::vector<FactorTerm> factors_;            // merged by location

    void push(cplx loc, int mult);
    friend RationalFn operator*(cplx c, const RationalFn& r) { return r * c; }
};

// ∫_ℝ [Σ_t terms_t(λ)] e^{iaλ} dλ for a group of factored terms.  Returns
// nothing when the configuration needs a quadrature fallback (high pole
// multiplicity against a phase, or no usable contour annulus).  Throws
// ConditionViolation when the summed integrand provably fails to decay —
// that is a modeling error, not a numerical one.
std::optional<cplx> line_integral_group(const std::vector<RationalFn>& terms, double a);

} // namespace sk
