#include "scatterkern/a2.hpp"

#include <cmath>

namespace sk {

namespace {

constexpr double kUnitGuard = 1.0 - 1e-12;

struct PanelRule {
    std::vector<double> x, w;
    PanelRule() { gauss_legendre(32, x, w); }
};

// interval average of a complex function
template <class F>
auto interval_avg(const F& f, double a, double b) {
    static PanelRule rule;
    decltype(f(0.0)) acc{};
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t k = 0; k < rule.x.size(); ++k) acc += rule.w[k] * f(mid + half * rule.x[k]);
    return acc * (0.5); // Σw = 2 on [−1,1], so this is the average already
}

template <class Fn>
A2Report dyadic_scan(double lo, double hi, int max_depth, const Fn& interval_value) {
    A2Report rep;
    for (int depth = 0; depth <= max_depth; ++depth) {
        long n = 1L << depth;
        double len = (hi - lo) / static_cast<double>(n);
        for (long j = 0; j < n; ++j) {
            double a = lo + j * len, b = a + len;
            double v = interval_value(a, b, rep.finite);
            if (v > rep.supremum) {
                rep.supremum = v;
                rep.witness = {a, b, v};
            }
        }
        rep.sup_by_depth.push_back(rep.supremum);
    }
    return rep;
}

} // namespace

A2Report a2_scalar_check(const std::function<cplx(double)>& s_plus, double lo, double hi,
                         int max_depth) {
    auto value = [&](double a, double b, bool& finite) {
        cplx avg = interval_avg(s_plus, a, b);
        auto integrand = [&](double t) -> double {
            cplx s = s_plus(t);
            double denom = 1.0 - abs2(s);
            if (abs2(s) > kUnitGuard) {
                denom = 1.0 - kUnitGuard;
            }
            return (abs2(s - avg) + (1.0 - abs2(avg))) / denom;
        };
        // flag near-unit values: the criterion diverges there
        bool hit = false;
        for (double t : {a + 1e-6 * (b - a), 0.5 * (a + b), b - 1e-6 * (b - a)})
            if (abs2(s_plus(t)) > kUnitGuard) hit = true;
        if (hit) finite = false;
        return interval_avg(integrand, a, b);
    };
    return dyadic_scan(lo, hi, max_depth, value);
}

A2Report a2_matrix_check(const std::function<cplx(double)>& s_plus, double lo, double hi,
                         int max_depth) {
    auto value = [&](double a, double b, bool& finite) {
        cplx avg = interval_avg(s_plus, a, b);
        auto inv00 = [&](double t) -> double {
            double denom = 1.0 - abs2(s_plus(t));
            if (denom < 1e-12) {
                return 1e12;
            }
            return 1.0 / denom;
        };
        auto inv01 = [&](double t) -> cplx {
            cplx s = s_plus(t);
            double denom = 1.0 - abs2(s);
            if (denom < 1e-12) denom = 1e-12;
            return -std::conj(s) / denom;
        };
        double p = interval_avg(inv00, a, b);
        cplx qv = interval_avg(inv01, a, b);
        if (p > 1e10) finite = false;
        // ⟨W⟩ = L L* with L = [[1, 0],[⟨s₊⟩, r]], r² = 1 − |⟨s₊⟩|²
        double r2 = 1.0 - abs2(avg);
        if (r2 <= 0.0) {
            finite = false;
            return 1e12;
        }
        double r = std::sqrt(r2);
        // X = L* ⟨W⁻¹⟩ L with ⟨W⁻¹⟩ = [[p, q],[q̄, p]]
        cplx q01 = qv;
        cplx x00 = p + q01 * avg + std::conj(q01 * avg) + abs2(avg) * p;
        cplx x01 = (q01 + avg * p) * r;
        double x11 = p * r2;
        double tr = x00.real() + x11;
        double det = (x00 * x11 - x01 * std::conj(x01)).real();
        double disc = std::max(tr * tr / 4.0 - det, 0.0);
        return tr / 2.0 + std::sqrt(disc); // λ_max of the 2×2 hermitian X
    };
    return dyadic_scan(lo, hi, max_depth, value);
}

CarlesonReport carleson_check(const std::function<cplx(double)>& s_plus,
                              const std::vector<std::pair<double, double>>& masses,
                              const std::function<cplx(double)>& f) {
    const double E_lo = -2.0, E_hi = 2.0;
    for (const auto& [xk, wk] : masses) {
        if (xk >= E_lo && xk <= E_hi)
            throw std::invalid_argument("carleson_check: mass point inside the window");
        if (wk <= 0.0) throw std::invalid_argument("carleson_check: nonpositive mass");
    }
    std::vector<double> gx, gw;
    gauss_legendre(64, gx, gw);
    auto integrate_E = [&](auto&& fn) {
        decltype(fn(0.0)) acc{};
        double mid = 0.5 * (E_lo + E_hi), half = 0.5 * (E_hi - E_lo);
        for (size_t k = 0; k < gx.size(); ++k) acc += half * gw[k] * fn(mid + half * gx[k]);
        return acc;
    };
    CarlesonReport rep;
    for (const auto& [xk, wk] : masses) {
        cplx fx = integrate_E([&](double t) { return f(t) / (xk - t); });
        rep.transformed.push_back(fx);
        rep.mass_side += wk * abs2(fx);
    }
    rep.boundary_side = integrate_E([&](double t) {
        cplx s = s_plus(t);
        double denom = std::max(1.0 - abs2(s), 1e-12);
        // (W⁻¹ [f;0], [f;0]) = |f|²/(1−|s₊|²)
        return abs2(f(t)) / denom;
    });
    rep.ratio = rep.mass_side / std::max(rep.boundary_side, 1e-300);
    return rep;
}

} // namespace sk
