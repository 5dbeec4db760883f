#include "scatterkern/scattering.hpp"

#include <algorithm>
#include <cmath>

namespace sk {

namespace {

const cplx I_unit(0.0, 1.0);

// s₊ = λ/(λ+i)
ScatteringData appendix1() {
    ScatteringData d;
    d.label = "appendix1";
    RationalFn s_plus = RationalFn::linear(0.0) * RationalFn::simple_pole(cplx(0.0, -1.0));
    d.s_plus = BoundaryFn::from_rational(s_plus);
    RationalFn s_e = RationalFn(I_unit) * RationalFn::simple_pole(cplx(0.0, -1.0));
    d.registered_outer = BoundaryFn::from_rational(s_e);
    d.registered_outer_inv = RationalFn(-I_unit) * RationalFn::linear(cplx(0.0, -1.0));
    d.registered_s_minus = s_plus; // the reflected side coincides here
    return d;
}

ScatteringData zero_data() {
    ScatteringData d;
    d.label = "zero";
    d.s_plus = BoundaryFn::from_rational(RationalFn::zero());
    d.registered_outer = BoundaryFn::constant(1.0);
    d.registered_outer_inv = RationalFn(cplx(1.0));
    d.registered_s_minus = RationalFn::zero();
    return d;
}

ScatteringData mass_only(const std::string& label, std::vector<MassPoint> masses) {
    ScatteringData d = zero_data();
    d.label = label;
    d.masses = std::move(masses);
    return d;
}

ScatteringData const_contraction(double c) {
    ScatteringData d;
    d.label = "const-half";
    d.s_plus = BoundaryFn::constant(c);
    double se = std::sqrt(1.0 - c * c);
    d.registered_outer = BoundaryFn::constant(se);
    d.registered_outer_inv = RationalFn(cplx(1.0 / se));
    d.registered_s_minus = RationalFn(cplx(-c));
    return d;
}

// s₊ = c λ²/(λ²+1) with one point mass; strict contraction (‖s₊‖_∞ = c < 1)
ScatteringData lemma5_data(double c, double mass_weight) {
    ScatteringData d;
    d.label = "lemma5";
    RationalFn lam2 = RationalFn::linear(0.0) * RationalFn::linear(0.0);
    RationalFn s_plus =
        lam2 * RationalFn::simple_pole(I_unit) * RationalFn::simple_pole(-I_unit) * cplx(c);
    d.s_plus = BoundaryFn::from_rational(s_plus);
    // |s_e|² = ((1−c)λ²+1)((1+c)λ²+1)/(λ²+1)²; outer factor assembled from the
    // lower-half-plane roots so it is zero-free upstairs
    double a = 1.0 / std::sqrt(1.0 - c), b = 1.0 / std::sqrt(1.0 + c);
    RationalFn s_e = RationalFn::linear(cplx(0.0, -a)) * RationalFn::linear(cplx(0.0, -b)) *
                     RationalFn::simple_pole(-I_unit) * RationalFn::simple_pole(-I_unit) *
                     cplx(std::sqrt((1.0 - c) * (1.0 + c)));
    RationalFn s_e_inv = RationalFn::linear(-I_unit) * RationalFn::linear(-I_unit) *
                         RationalFn::simple_pole(cplx(0.0, -a)) * RationalFn::simple_pole(cplx(0.0, -b)) *
                         cplx(1.0 / std::sqrt(1.0 - c * c));
    d.registered_outer = BoundaryFn::from_rational(s_e);
    d.registered_outer_inv = s_e_inv;
    d.masses = {{I_unit, mass_weight}};
    // s₋ = −(s/s̄) s̄₊ with s = s_e/b_i:  s/s̄ = s_e (λ+i)²/(λ−i)² / s̄_e on ℝ
    RationalFn se_conj_inv = RationalFn::linear(I_unit) * RationalFn::linear(I_unit) *
                             RationalFn::simple_pole(cplx(0.0, a)) * RationalFn::simple_pole(cplx(0.0, b)) *
                             cplx(1.0 / std::sqrt(1.0 - c * c));
    RationalFn binv2 = RationalFn::linear(-I_unit) * RationalFn::linear(-I_unit) *
                       RationalFn::simple_pole(I_unit) * RationalFn::simple_pole(I_unit);
    d.registered_s_minus =
        s_e * binv2 * s_plus.conj_params() * se_conj_inv * cplx(-1.0);
    return d;
}

ScatteringData plateau() {
    ScatteringData d;
    d.label = "plateau";
    d.s_plus = BoundaryFn::from_handle([](cplx z) -> cplx {
        double t = z.real();
        double b = std::pow(t / 4.0, 8);
        return cplx((1.0 - 1e-8) * std::exp(-b), 0.0);
    });
    return d;
}

ScatteringData hardwall() {
    ScatteringData d;
    d.label = "hardwall";
    d.s_plus = BoundaryFn::from_handle(
        [](cplx z) -> cplx { return std::abs(z.real()) <= 1.0 ? cplx(1.0) : cplx(0.0); });
    return d;
}

ScatteringData mass_train(int n) {
    std::vector<MassPoint> m;
    for (int k = 1; k <= n; ++k) m.push_back({cplx(0.0, 1.0 / (k * double(k))), 1.0 / (k * double(k))});
    return mass_only("mass-train", std::move(m));
}

} // namespace

ScatteringData make_dataset(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    if (name == "zero") return zero_data();
    if (name == "appendix1") return appendix1();
    if (name == "one-mass")
        return mass_only("one-mass", {{cplx(0.0, get("im", 1.0)), get("weight", 1.0)}});
    if (name == "two-mass")
        return mass_only("two-mass",
                         {{cplx(0.0, 1.0), get("w1", 1.0)}, {cplx(0.0, 2.0), get("w2", 1.0)}});
    if (name == "const-half") return const_contraction(get("c", 0.5));
    if (name == "lemma5") return lemma5_data(get("c", 0.5), get("weight", 0.7));
    if (name == "plateau") return plateau();
    if (name == "hardwall") return hardwall();
    if (name == "mass-train") return mass_train(static_cast<int>(get("n", 50)));
    throw std::invalid_argument("make_dataset: unknown dataset '" + name + "'");
}

ScatteringData dataset_from_samples(std::string label, std::vector<double> lambda,
                                    std::vector<cplx> values, std::vector<MassPoint> masses) {
    if (lambda.size() != values.size() || lambda.size() < 4)
        throw std::invalid_argument("dataset_from_samples: need matching sample arrays (>= 4)");
    for (size_t i = 0; i + 1 < lambda.size(); ++i)
        if (!(lambda[i] < lambda[i + 1]))
            throw std::invalid_argument("dataset_from_samples: abscissas must increase");
    ScatteringData d;
    d.label = std::move(label);
    auto xs = std::make_shared<std::vector<double>>(std::move(lambda));
    auto ys = std::make_shared<std::vector<cplx>>(std::move(values));
    // cubic Catmull-Rom in the interior, clamped to zero outside the samples
    d.s_plus = BoundaryFn::from_handle([xs, ys](cplx z) -> cplx {
        double t = z.real();
        const auto& x = *xs;
        const auto& y = *ys;
        if (t <= x.front() || t >= x.back()) return 0.0;
        size_t j = static_cast<size_t>(std::upper_bound(x.begin(), x.end(), t) - x.begin()) - 1;
        size_t j0 = (j == 0) ? 0 : j - 1;
        size_t j2 = std::min(j + 1, x.size() - 1);
        size_t j3 = std::min(j + 2, x.size() - 1);
        double h = x[j2] - x[j];
        double u = (h > 0.0) ? (t - x[j]) / h : 0.0;
        cplx m1 = (j2 > j0) ? (y[j2] - y[j0]) / (x[j2] - x[j0]) * h : cplx(0.0);
        cplx m2 = (j3 > j) ? (y[j3] - y[j]) / (x[j3] - x[j]) * h : cplx(0.0);
        double u2 = u * u, u3 = u2 * u;
        return (2 * u3 - 3 * u2 + 1) * y[j] + (u3 - 2 * u2 + u) * m1 +
               (-2 * u3 + 3 * u2) * y[j2] + (u3 - u2) * m2;
    });
    d.masses = std::move(masses);
    return d;
}

AdmissibilityReport validate(const ScatteringData& data, const GridProfile& profile) {
    const RealGrid& g = profile.base_grid();
    AdmissibilityReport r;
    size_t n = g.size();
    for (size_t i = 0; i < n / 2; ++i) {
        cplx a = data.s_plus(cplx(g.nodes[i], 0.0));
        cplx b = data.s_plus(cplx(g.nodes[n - 1 - i], 0.0));
        r.symmetry_residual = std::max(r.symmetry_residual, std::abs(a - std::conj(b)));
    }
    for (size_t i = 0; i < n; ++i) {
        double m = std::abs(data.s_plus(cplx(g.nodes[i], 0.0)));
        r.contraction_excess = std::max(r.contraction_excess, m - 1.0);
    }
    r.contraction_excess = std::max(r.contraction_excess, 0.0);
    auto raw_s = [&](double t) { return data.s_plus(cplx(t, 0.0)); };
    if (data.registered_outer) {
        std::function<double(double)> se2 = [&](double t) {
            return abs2((*data.registered_outer)(cplx(t, 0.0)));
        };
        r.szego = szego_integral(g, raw_s, &se2);
    } else {
        r.szego = szego_integral(g, raw_s);
    }

    std::vector<cplx> zs;
    for (const auto& m : data.masses) {
        if (m.lambda.imag() <= 0.0 || m.weight <= 0.0) r.masses_distinct = false;
        zs.push_back(m.lambda);
    }
    for (size_t i = 0; i < zs.size(); ++i)
        for (size_t j = i + 1; j < zs.size(); ++j)
            if (std::abs(zs[i] - zs[j]) < 1e-12) r.masses_distinct = false;
    if (!zs.empty()) {
        BlaschkeProduct B(zs);
        auto sums = B.condition_sums();
        r.blaschke_sum_small = sums.first;
        r.blaschke_sum_large = sums.second;
    }
    return r;
}

DerivedData derive(const ScatteringData& data, const GridProfile& profile) {
    AdmissibilityReport rep = validate(data, profile);
    if (!rep.pass())
        throw ConditionViolation("derive: data fails admissibility (label=" + data.label + ")");

    DerivedData d;
    d.data = data;
    d.profile = profile;

    if (data.registered_outer) {
        d.s_e = *data.registered_outer;
        if (data.registered_outer_inv)
            d.s_e_inv = BoundaryFn::from_rational(*data.registered_outer_inv);
        else
            d.s_e_inv = BoundaryFn::from_handle([se = d.s_e](cplx z) { return 1.0 / se(z); });
    } else {
        const RealGrid& g = profile.base_grid();
        std::vector<double> logmod(g.size());
        for (size_t i = 0; i < g.size(); ++i) {
            double m2 = abs2(data.s_plus(cplx(g.nodes[i], 0.0)));
            if (m2 >= 1.0) throw ConditionViolation("derive: |s_plus| = 1 on the grid");
            logmod[i] = 0.5 * std::log(1.0 - m2);
        }
        auto outer = std::make_shared<OuterFunction>(g, std::move(logmod));
        d.s_e = BoundaryFn::from_handle([outer](cplx z) {
            return (std::abs(z.imag()) < 1e-13) ? outer->boundary(z.real()) : outer->eval(z);
        });
        d.s_e_inv = BoundaryFn::from_handle([se = d.s_e](cplx z) { return 1.0 / se(z); });
    }

    std::vector<cplx> zeros;
    for (const auto& m : data.masses) zeros.push_back(m.lambda);
    d.B = BlaschkeProduct(zeros);

    if (d.s_e.has_rational()) {
        RationalFn s_rat = *d.s_e.rat;
        for (size_t k = 0; k < zeros.size(); ++k) {
            int sgn = BlaschkeProduct::factor_sign(zeros[k]);
            // 1/b_z = (λ − z̄)/(λ − z), with the factor sign
            s_rat = s_rat * (RationalFn::linear(std::conj(zeros[k])) *
                             RationalFn::simple_pole(zeros[k]) * cplx(double(sgn)));
        }
        d.s = BoundaryFn::from_rational(s_rat);
    } else {
        d.s = BoundaryFn::from_handle(
            [se = d.s_e, B = d.B](cplx z) { return se(z) / B.eval(z); });
    }

    if (data.registered_s_minus) {
        d.s_minus = BoundaryFn::from_rational(*data.registered_s_minus);
    } else {
        d.s_minus = BoundaryFn::from_handle([s = d.s, sp = data.s_plus](cplx z) -> cplx {
            cplx sv = s(z);
            return -(sv / std::conj(sv)) * std::conj(sp(z));
        });
    }

    // (1/s)'(λ_k) = B'(λ_k)/s_e(λ_k) since B vanishes there
    for (size_t k = 0; k < data.masses.size(); ++k) {
        cplx lk = data.masses[k].lambda;
        cplx dB = d.B.derivative_at_zero(k);
        cplx se = d.s_e(lk);
        cplx dinv = dB / se;
        if (std::abs(dinv) < 1e-14)
            throw ConditionViolation("derive: degenerate mass, (1/s)'(lambda_k) = 0");
        d.inv_s_deriv.push_back(dinv);
        d.masses_minus.push_back({lk, 1.0 / (data.masses[k].weight * abs2(dinv))});
    }
    return d;
}

TranslatedData translate(std::shared_ptr<const DerivedData> base, double x) {
    return TranslatedData{std::move(base), x};
}

FMData make_view(const DerivedData& d, Side side, double x_data) {
    FMData v;
    v.profile = &d.profile;
    v.derived = &d;
    v.x = x_data;
    v.sigma = (side == Side::Plus) ? d.data.s_plus : d.s_minus;
    const auto& masses = (side == Side::Plus) ? d.data.masses : d.masses_minus;
    for (const auto& m : masses) {
        double factor = std::exp(-2.0 * m.lambda.imag() * x_data); // e^{2iλ_k x} on iℝ₊
        v.masses.push_back({m.lambda, m.weight * factor});
    }
    return v;
}

FMData divide_by_blaschke_pair(const FMData& view, cplx lambda0) {
    FMData v = view;
    cplx l0 = lambda0, ml0 = -std::conj(lambda0);
    auto mod_value = [&](cplx z) {
        return 1.0 / (blaschke_factor(z, l0) * blaschke_factor(z, ml0));
    };
    if (view.sigma.has_rational()) {
        RationalFn m = RationalFn::linear(std::conj(l0)) * RationalFn::simple_pole(l0) *
                       RationalFn::linear(std::conj(ml0)) * RationalFn::simple_pole(ml0);
        v.sigma = BoundaryFn::from_rational(m * (*view.sigma.rat));
    } else {
        v.sigma = BoundaryFn::from_handle(
            [s = view.sigma, mod_value](cplx z) { return mod_value(z) * s(z); });
    }
    for (auto& m : v.masses) {
        cplx f = mod_value(m.lambda);
        if (std::abs(f.imag()) > 1e-10 * std::abs(f) || f.real() <= 0.0)
            throw NumericalError("divide_by_blaschke_pair: modifier not positive at a mass");
        m.weight *= f.real();
    }
    return v;
}

GridFunction duality_map(const GridFunction& f, const DerivedData& d, Side from) {
    const RealGrid& g = d.profile.base_grid();
    if (f.on_grid.size() != g.size())
        throw std::invalid_argument("duality_map: grid size mismatch");
    size_t n = g.size();
    GridFunction out;
    out.on_grid.resize(n);
    const BoundaryFn& off_diag = (from == Side::Plus) ? d.data.s_plus : d.s_minus;
    for (size_t i = 0; i < n; ++i) {
        cplx t(g.nodes[i], 0.0);
        cplx sv = d.s(t);
        if (std::abs(sv) < 1e-300)
            throw NumericalError("duality_map: s vanishes at a grid node");
        out.on_grid[i] = (off_diag(t) * f.on_grid[i] - f.on_grid[n - 1 - i]) / sv;
    }
    out.on_masses.resize(f.on_masses.size());
    for (size_t k = 0; k < f.on_masses.size(); ++k) {
        cplx factor = -cplx(0.0, 1.0) * d.inv_s_deriv[k] * d.data.masses[k].weight;
        out.on_masses[k] = (from == Side::Plus) ? factor * f.on_masses[k]
                                                : f.on_masses[k] / factor;
    }
    return out;
}

} // namespace sk
