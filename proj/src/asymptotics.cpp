#include "scatterkern/asymptotics.hpp"

#include <cmath>

namespace sk {

namespace {

const cplx I_unit(0.0, 1.0);
constexpr double kCondCap = 1e10;

FMVector subtract(const FMVector& a, const FMVector& b) {
    FMVector out = a;
    for (const auto& p : b.parts) {
        BoundaryFn neg;
        if (p.fn.has_rational())
            neg = BoundaryFn::from_rational((*p.fn.rat) * cplx(-1.0));
        else
            neg = BoundaryFn::from_handle([f = p.fn](cplx z) { return -f(z); });
        out.parts.push_back({p.phase, std::move(neg)});
    }
    out.mass_values.resize(std::max(a.mass_values.size(), b.mass_values.size()), 0.0);
    for (size_t k = 0; k < b.mass_values.size(); ++k) out.mass_values[k] -= b.mass_values[k];
    return out;
}

} // namespace

std::vector<double> forward_schedule(int n, double lo, double hi) {
    std::vector<double> xs;
    for (int i = 0; i < n; ++i)
        xs.push_back(lo * std::pow(hi / lo, double(i) / (n - 1)));
    return xs;
}

std::vector<double> backward_schedule(int n, double lo, double hi) {
    std::vector<double> xs = forward_schedule(n, lo, hi);
    for (double& x : xs) x = -x;
    return xs;
}

AsymptoticsRun run_theorem2(const DerivedData& d, cplx lambda0,
                            const std::vector<double>& schedule, Flavor flavor, int order) {
    AsymptoticsRun run;
    run.quantity = (flavor == Flavor::H2) ? "kernel_distance" : "kernel_distance_hat";
    run.lambda0 = lambda0;

    // k̃: the unweighted kernel on ℝ, zero on the masses
    FMVector ktilde = FMVector::single(
        BoundaryFn::from_rational(RationalFn::simple_pole(std::conj(lambda0)) * I_unit));

    for (double x : schedule) {
        TraceRecord rec;
        rec.x = x;
        try {
            FMData view = make_view(d, Side::Plus, x);
            KernelField k = kernel_compute(flavor, view, lambda0, order);
            FMVector kv = k.to_vector();
            FMVector kt = ktilde;
            kt.mass_values.assign(view.masses.size(), 0.0);
            FMVector diff = subtract(kv, kt);
            double d2 = fm_norm(diff, view);
            rec.value = std::sqrt(std::max(d2, 0.0));
            rec.residual = rec.value;
            rec.epsilon_used = k.ridge_used;
            rec.gram_cond = k.gram_cond;
        } catch (const NumericalError&) {
            rec.solver_ok = false;
        }
        run.records.push_back(rec);
        if (rec.gram_cond > kCondCap) break;
    }
    return run;
}

AsymptoticsRun run_ratio_limits(const DerivedData& d, cplx lambda0,
                                const std::vector<double>& schedule, Flavor flavor, int order) {
    AsymptoticsRun run;
    run.quantity = (flavor == Flavor::H2) ? "diag_ratio" : "diag_ratio_hat";
    run.lambda0 = lambda0;
    double k_free = 1.0 / (2.0 * lambda0.imag());
    for (double x : schedule) {
        TraceRecord rec;
        rec.x = x;
        try {
            FMData view = make_view(d, Side::Plus, x);
            KernelField k = kernel_compute(flavor, view, lambda0, order);
            rec.value = std::sqrt(std::max(k.diag(), 0.0) / k_free);
            rec.residual = std::abs(rec.value - 1.0);
            rec.epsilon_used = k.ridge_used;
            rec.gram_cond = k.gram_cond;
        } catch (const NumericalError&) {
            rec.solver_ok = false;
        }
        run.records.push_back(rec);
        if (rec.gram_cond > kCondCap) break;
    }
    return run;
}

AsymptoticsRun run_mass_blowup(const DerivedData& d, size_t mass_index,
                               const std::vector<double>& schedule, int order) {
    if (mass_index >= d.data.masses.size())
        throw std::invalid_argument("run_mass_blowup: no such mass point");
    AsymptoticsRun run;
    run.quantity = "mass_blowup";
    cplx lk = d.data.masses[mass_index].lambda;
    run.lambda0 = lk;
    double target = 1.0 / d.data.masses[mass_index].weight;
    for (double x : schedule) {
        TraceRecord rec;
        rec.x = x;
        try {
            FMData view = make_view(d, Side::Plus, x);
            KernelField k = kernel_compute(Flavor::H2, view, lk, order);
            rec.value = std::exp(-2.0 * lk.imag() * x) * k.diag();
            rec.residual = std::abs(rec.value - target) / target;
            rec.epsilon_used = k.ridge_used;
            rec.gram_cond = k.gram_cond;
        } catch (const NumericalError&) {
            rec.solver_ok = false;
        }
        run.records.push_back(rec);
        if (rec.gram_cond > kCondCap) break;
    }
    return run;
}

AsymptoticsRun run_scattering_identities(const DerivedData& d, cplx lambda0,
                                         const std::vector<double>& schedule,
                                         ScatteringRelation which, int order) {
    if (std::abs(lambda0.real()) < 1e-9)
        throw std::invalid_argument("run_scattering_identities: lambda0 must lie off the axis");
    AsymptoticsRun run;
    switch (which) {
        case ScatteringRelation::ForwardPlus: run.quantity = "forward_plus"; break;
        case ScatteringRelation::BackwardPlus: run.quantity = "backward_plus"; break;
        case ScatteringRelation::ForwardMinus: run.quantity = "forward_minus"; break;
        case ScatteringRelation::BackwardMinus: run.quantity = "backward_minus"; break;
    }
    run.lambda0 = lambda0;
    const RealGrid& g = d.profile.base_grid();
    cplx ml0 = -lambda0; // the reflected center −λ₀ (not −λ̄₀)

    for (double x : schedule) {
        TraceRecord rec;
        rec.x = x;
        try {
            bool plus_family =
                which == ScatteringRelation::ForwardPlus || which == ScatteringRelation::BackwardPlus;
            double x_data = plus_family ? x : -x;
            FMData view = make_view(d, plus_family ? Side::Plus : Side::Minus, x_data);
            KernelField k = kernel_compute(Flavor::H2, view, lambda0, order);
            cplx pre = d.s(-std::conj(lambda0));
            double acc = 0.0;
            for (size_t i = 0; i < g.size(); ++i) {
                double t = g.nodes[i];
                cplx kxt = k.eval(cplx(t, 0.0));
                cplx kt = hardy_kernel(t, lambda0);
                cplx resid;
                switch (which) {
                    case ScatteringRelation::ForwardPlus:
                    case ScatteringRelation::ForwardMinus:
                        resid = d.s(t) * (kxt - kt);
                        break;
                    case ScatteringRelation::BackwardPlus:
                        resid = pre * d.s(t) * kxt - kt -
                                d.s_minus(t) * std::exp(cplx(0.0, -2.0 * x * t)) *
                                    hardy_kernel(t, ml0);
                        break;
                    case ScatteringRelation::BackwardMinus:
                        resid = pre * d.s(t) * kxt - kt -
                                d.data.s_plus(t) * std::exp(cplx(0.0, 2.0 * x * t)) *
                                    hardy_kernel(t, ml0);
                        break;
                }
                acc += g.weights[i] * abs2(resid);
            }
            rec.value = std::sqrt(acc / (2.0 * PI));
            rec.residual = rec.value;
            rec.epsilon_used = k.ridge_used;
            rec.gram_cond = k.gram_cond;
        } catch (const NumericalError&) {
            rec.solver_ok = false;
        }
        run.records.push_back(rec);
        if (rec.gram_cond > kCondCap) break;
    }
    return run;
}

ProjectionLimits run_projection_limits(const DerivedData& d, const FMVector& f,
                                       const std::vector<double>& schedule, int order) {
    ProjectionLimits out;
    double norm_f0 = 0.0;

    auto project = [&](double x) -> std::pair<double, double> {
        // work in translated-data coordinates: the subspace is spanned by the
        // plain elements there and f becomes e^{−iλx}f
        FMData view = make_view(d, Side::Plus, x);
        RationalBasis basis = RationalBasis::h2(order);
        if (x < 0.0) {
            // phase ladder reaching the oscillation content of e^{-iλx}f
            for (double frac : {0.25, 0.5, 0.75, 1.0, 1.5, 2.0})
                for (int n = 0; n < order / 2; ++n)
                    basis.elems.push_back(
                        {-x * frac, BoundaryFn::from_rational(RationalBasis::tm_element(n))});
        }
        GramSystem gs = gram_assemble(basis, view);
        FMVector fv = f;
        for (auto& p : fv.parts) p.phase -= x;
        fv.attach_mass_values(view);
        Eigen::VectorXcd w(static_cast<Eigen::Index>(basis.size()));
        for (size_t m = 0; m < basis.size(); ++m) {
            FMVector em;
            em.parts.push_back(basis.elems[m]);
            em.attach_mass_values(view);
            w(static_cast<Eigen::Index>(m)) = fm_inner(fv, em, view);
        }
        Eigen::VectorXcd c = gs.solver.solve(w);
        double nf = fm_norm(fv, view);
        double np2 = (c.adjoint() * w).real()(0, 0);       // ‖P f‖²
        double dist2 = std::max(nf - np2, 0.0);            // ‖f − P f‖²
        norm_f0 = nf;
        return {std::sqrt(np2), std::sqrt(dist2)};
    };

    for (double x : schedule) {
        double ax = std::abs(x);
        TraceRecord fwd, bwd;
        fwd.x = ax;
        bwd.x = -ax;
        try {
            auto [pn, dn] = project(ax);
            fwd.value = pn;
            fwd.residual = pn / std::sqrt(std::max(norm_f0, 1e-300));
        } catch (const NumericalError&) {
            fwd.solver_ok = false;
        }
        try {
            auto [pn, dn] = project(-ax);
            bwd.value = dn;
            bwd.residual = dn / std::sqrt(std::max(norm_f0, 1e-300));
        } catch (const NumericalError&) {
            bwd.solver_ok = false;
        }
        out.forward.push_back(fwd);
        out.backward.push_back(bwd);
    }
    return out;
}

} // namespace sk
