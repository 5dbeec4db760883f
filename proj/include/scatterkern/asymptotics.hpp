#pragma once

// Translation-parameter traces of the weighted reproducing kernels: distance
// to the unweighted kernel as x → +∞, normalized diagonal ratios, the mass
// blow-up limit as x → −∞, the boundary scattering relations in both
// directions, and the projection limits onto the translated subspaces.

#include "fm.hpp"

#include <string>
#include <vector>

namespace sk {

struct TraceRecord {
    double x = 0.0;
    double value = 0.0;      // the traced quantity
    double residual = 0.0;   // distance-to-limit measure for this record
    double epsilon_used = 0.0;
    double gram_cond = 0.0;
    bool solver_ok = true;
};

struct AsymptoticsRun {
    std::string quantity;
    cplx lambda0;
    std::vector<TraceRecord> records;
    double final_residual() const { return records.empty() ? 0.0 : records.back().residual; }
    bool all_solved() const {
        for (const auto& r : records)
            if (!r.solver_ok) return false;
        return true;
    }
};

std::vector<double> forward_schedule(int n = 24, double lo = 0.1, double hi = 20.0);
std::vector<double> backward_schedule(int n = 24, double lo = 0.1, double hi = 20.0);

// ‖e^{iλx} k_{x}(·,λ₀) − e^{iλx} k̃(·,λ₀)‖ in the untranslated weighted norm,
// where k̃ is the unweighted kernel on ℝ extended by zero over the masses.
AsymptoticsRun run_theorem2(const DerivedData& d, cplx lambda0,
                            const std::vector<double>& schedule, Flavor flavor, int order);

// K_{x}(λ₀,λ₀)/K(λ₀,λ₀) → 1 for both kernel flavors.
AsymptoticsRun run_ratio_limits(const DerivedData& d, cplx lambda0,
                                const std::vector<double>& schedule, Flavor flavor, int order);

// e^{−2 Im λ_k x} k_x(λ_k,λ_k) → 1/ν(λ_k) along x → −∞.
AsymptoticsRun run_mass_blowup(const DerivedData& d, size_t mass_index,
                               const std::vector<double>& schedule, int order);

enum class ScatteringRelation {
    ForwardPlus,    // s·(e^{iλx}k_x(·,λ₀)) ≈ s e^{iλx}k(·,λ₀), x → +∞
    BackwardPlus,   // s(−λ̄₀)s·(e^{iλx}k_x(·,λ₀)) ≈ e^{iλx}k(·,λ₀) + s₋e^{−iλx}k(·,−λ₀), x → −∞
    ForwardMinus,   // the reflected-side family as x → −∞
    BackwardMinus,  // reflected side, x → +∞ (carries the s₊ term)
};

AsymptoticsRun run_scattering_identities(const DerivedData& d, cplx lambda0,
                                         const std::vector<double>& schedule,
                                         ScatteringRelation which, int order);

// ‖P_x f − f‖ → 0 (x → −∞) and ‖P_x f‖ → 0 (x → +∞) for a fixed element f.
struct ProjectionLimits {
    std::vector<TraceRecord> forward;   // ‖P_x f‖
    std::vector<TraceRecord> backward;  // ‖P_x f − f‖
};
ProjectionLimits run_projection_limits(const DerivedData& d, const FMVector& f,
                                       const std::vector<double>& schedule, int order);

} // namespace sk
