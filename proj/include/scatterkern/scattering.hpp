#pragma once

// Scattering data {s₊, ν₊} on ℝ ∪ Λ, admissibility checks, and the derived
// objects: the outer factor s_e, the Blaschke product B over the point
// masses, s = s_e/B, the reflected side s₋ and masses ν₋, translations, and
// the ± duality maps between the two weighted spaces.

#include "grid.hpp"
#include "halfplane.hpp"
#include "types.hpp"

#include <map>
#include <memory>
#include <string>
#include <vector>

namespace sk {

struct MassPoint {
    cplx lambda;     // Im > 0 (on the positive imaginary axis for all stock data)
    double weight;   // ν₊(λ_k) > 0
};

struct ScatteringData {
    std::string label;
    BoundaryFn s_plus;                      // contraction, s₊(λ) = conj(s₊(−λ̄))
    std::vector<MassPoint> masses;

    // closed forms supplied by the registry; absent for sampled data
    std::optional<BoundaryFn> registered_outer;      // s_e
    std::optional<RationalFn> registered_outer_inv;  // 1/s_e
    std::optional<RationalFn> registered_s_minus;
};

// Stock datasets.  "zero", "appendix1" (s₊ = λ/(λ+i)), "one-mass" (pure point
// mass at i), "two-mass", "const-half" (s₊ ≡ 1/2), "lemma5" (strict
// contraction with one mass), "plateau" (|s₊| → 1 on a window), "hardwall"
// (|s₊| = 1 on [0,1]), "mass-train" (masses at i/k²).
ScatteringData make_dataset(const std::string& name,
                            const std::map<std::string, double>& params = {});

ScatteringData dataset_from_samples(std::string label, std::vector<double> lambda,
                                    std::vector<cplx> values, std::vector<MassPoint> masses);

struct AdmissibilityReport {
    double symmetry_residual = 0.0;    // sup |s₊(λ) − conj(s₊(−λ))| on the grid
    double contraction_excess = 0.0;   // sup (|s₊| − 1)₊
    SzegoResult szego;
    double blaschke_sum_small = 0.0;   // Σ_{λk/i ≤ 1} λk/i
    double blaschke_sum_large = 0.0;   // Σ_{λk/i > 1} i/λk
    bool masses_distinct = true;
    bool symmetry_ok() const { return symmetry_residual < 1e-8; }
    bool pass() const {
        return symmetry_ok() && contraction_excess < 1e-10 && szego.finite && masses_distinct;
    }
};

AdmissibilityReport validate(const ScatteringData& data, const GridProfile& profile);

struct DerivedData {
    ScatteringData data;
    GridProfile profile;

    BoundaryFn s_e;       // outer factor, |s_e|² + |s₊|² = 1 a.e., s_e(i) > 0
    BoundaryFn s_e_inv;   // 1/s_e
    BlaschkeProduct B;
    BoundaryFn s;         // s_e / B
    BoundaryFn s_minus;   // −(s/s̄) s̄₊ on ℝ

    std::vector<cplx> inv_s_deriv;       // (1/s)'(λ_k)
    std::vector<MassPoint> masses_minus; // ν₋ via the mass duality relation

    cplx s_at(cplx z) const { return s(z); }
};

DerivedData derive(const ScatteringData& data, const GridProfile& profile);

// {s₊ e^{2iλx}, ν₊ e^{2iλx}} as a thin wrapper; x accumulates under composition.
struct TranslatedData {
    std::shared_ptr<const DerivedData> base;
    double x = 0.0;
};

TranslatedData translate(std::shared_ptr<const DerivedData> base, double x);
inline TranslatedData translate(const TranslatedData& t, double x) { return {t.base, t.x + x}; }

// The data actually fed to the quadratic-form machinery: a boundary symbol
// σ(λ)e^{2ixλ}, effective point-mass weights (unimodular modifiers and the
// translation factor folded in, always real positive), and the parent data.
struct FMData {
    const GridProfile* profile = nullptr;
    BoundaryFn sigma;        // symbol without the phase factor
    double x = 0.0;          // full symbol is σ(λ)·e^{2ixλ}
    struct EffMass {
        cplx lambda;
        double weight;
    };
    std::vector<EffMass> masses;
    const DerivedData* derived = nullptr;

    bool sigma_is_zero() const { return sigma.has_rational() && sigma.rat->is_zero(); }
};

enum class Side { Plus, Minus };

// View of one side of the data translated so the symbol is σ·e^{2i x_data λ}.
FMData make_view(const DerivedData& d, Side side, double x_data);

// Multiplies the symbol by 1/(b_{λ₀} b_{−λ̄₀}) and the mass weights by the
// modifier's (real, positive) values at the mass points.
FMData divide_by_blaschke_pair(const FMData& view, cplx lambda0);

// Values of a function on the symmetric grid together with its point-mass
// values; the raw material of the duality maps.
struct GridFunction {
    std::vector<cplx> on_grid;   // indexed like grid.nodes
    std::vector<cplx> on_masses; // indexed like data masses
};

// The explicit unitary map between the two sides: direction Plus→Minus sends
// f to f⁻ with s f⁻(λ) = s₊(λ)f(λ) − f(−λ) on ℝ and
// f⁻(λ_k) = −i (1/s)'(λ_k) ν₊(λ_k) f(λ_k) on Λ.  Minus→Plus is its inverse.
GridFunction duality_map(const GridFunction& f, const DerivedData& d, Side from);

} // namespace sk
