#pragma once

// Dyadic-interval weight checks for W = [[1, s̄₊],[s₊, 1]] on a bounded
// window of the line: the scalar averaged criterion, the matrix form
// ⟨W⁻¹⟩_I ≤ Q ⟨W⟩_I⁻¹, and the discrete embedding ratio for point masses
// against the weighted boundary norm.

#include "halfplane.hpp"

#include <functional>
#include <vector>

namespace sk {

struct IntervalStat {
    double a = 0.0, b = 0.0;   // endpoints
    double value = 0.0;        // interval average of the tested quantity
};

struct A2Report {
    double supremum = 0.0;
    IntervalStat witness;              // interval achieving the supremum
    bool finite = true;                // false when the integrand blew past the guard
    std::vector<double> sup_by_depth;  // running supremum as the family grows
};

// scalar criterion: sup over dyadic I of
//   (1/|I|) ∫_I [ |s₊ − ⟨s₊⟩_I|² + (1 − |⟨s₊⟩_I|²) ] / (1 − |s₊|²)
A2Report a2_scalar_check(const std::function<cplx(double)>& s_plus, double window_lo,
                         double window_hi, int max_depth);

// matrix criterion: sup over dyadic I of λ_max( L* ⟨W⁻¹⟩_I L ),  ⟨W⟩_I = L L*
A2Report a2_matrix_check(const std::function<cplx(double)>& s_plus, double window_lo,
                         double window_hi, int max_depth);

struct CarlesonReport {
    double mass_side = 0.0;      // Σ_k w_k |f(x_k)|²  with f(x_k) = ∫_E f(t)/(x_k−t) dt
    double boundary_side = 0.0;  // ∫_E (W⁻¹ f, f)
    double ratio = 0.0;
    std::vector<cplx> transformed; // the values f(x_k)
};

// E = [−2, 2]; mass points must avoid E
CarlesonReport carleson_check(const std::function<cplx(double)>& s_plus,
                              const std::vector<std::pair<double, double>>& masses,
                              const std::function<cplx(double)>& f);

} // namespace sk
