#pragma once

// Quadrature grids on the real line.
//
// The base grid is composite Gauss–Legendre after the substitution λ = tan θ,
// built symmetrically (node set closed under λ ↦ −λ), with graded panels near
// the endpoints so log-type integrands still converge fast.  Oscillatory
// integrands e^{iaλ}·(decaying) get a dedicated λ-space grid whose panels
// resolve the phase and whose weights carry a smooth roll-off window, so the
// unresolved tail is never quadratured.

#include "types.hpp"

#include <functional>
#include <map>
#include <memory>
#include <vector>

namespace sk {

struct RealGrid {
    std::vector<double> nodes;    // strictly increasing, symmetric under negation
    std::vector<double> weights;  // absolute units: Σ w_i f(x_i) ≈ ∫ f dλ
    double cutoff = 0.0;          // half-width of the truncated line

    size_t size() const { return nodes.size(); }

    template <class F>
    auto integrate(F&& f) const -> decltype(f(0.0)) {
        decltype(f(0.0)) acc{};
        for (size_t i = 0; i < nodes.size(); ++i) acc += weights[i] * f(nodes[i]);
        return acc;
    }

    void check_invariants() const; // ordering, symmetry, positivity
};

// Gauss–Legendre rule on [-1, 1].
void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w);

RealGrid make_tan_grid(int panels_per_side, int points_per_panel, double cutoff,
                       int graded_panels = 6, double grading = 0.3);

// λ-space grid resolving e^{iaλ}; weights include a cos² roll-off on the
// outer half so the truncation acts like a smooth window.
RealGrid make_osc_grid(double max_freq, double half_width, int points_per_panel);

struct Tolerances {
    double solver = 1e-9;
    double identity = 1e-4;
    double asym = 1e-2;
};

// Shared numerical configuration.  All operations take their grids and basis
// sizes from here so runs are reproducible from the profile alone.
struct GridProfile {
    double cutoff = 2e4;
    int panels = 30;
    int points_per_panel = 12;
    int basis_order = 20;
    double osc_half_width = 120.0;
    int osc_points_per_panel = 10;
    std::vector<double> ridge_schedule = {1e-2, 1e-4, 1e-6, 1e-8};
    Tolerances tol;

    const RealGrid& base_grid() const;
    const RealGrid& osc_grid(double freq) const; // cached per frequency bucket
    uint64_t hash() const;

    static GridProfile named(const std::string& name); // default | fast | hires

private:
    mutable std::shared_ptr<RealGrid> base_;
    mutable std::map<long, std::shared_ptr<RealGrid>> osc_cache_;
};

} // namespace sk
