#include "scatterkern/unitary_node.hpp"

#include <cmath>

namespace sk {

namespace {
const cplx I_unit(0.0, 1.0);
}

NodeBasis::NodeBasis(std::shared_ptr<const DerivedData> d, cplx lambda0, int order)
    : d_(std::move(d)), lambda0_(lambda0), ml0_(-std::conj(lambda0)), order_(order) {
    if (lambda0.real() <= 0.0 || lambda0.imag() <= 0.0)
        throw std::invalid_argument("NodeBasis: lambda0 must lie in the open first quadrant");
    for (const auto& m : d_->data.masses)
        if (std::abs(m.lambda - lambda0) < 1e-9)
            throw std::invalid_argument("NodeBasis: lambda0 collides with a mass point");

    FMData minus = make_view(*d_, Side::Minus, 0.0);
    khat1_ = kernel_compute(Flavor::H2Hat, minus, lambda0_, order_);
    khat2_ = kernel_compute(Flavor::H2Hat, minus, ml0_, order_);
    khat_diag_ = khat1_.diag();
    if (khat_diag_ <= 0.0) throw NumericalError("NodeBasis: nonpositive kernel diagonal");

    // boundary data of s_e·E_i (Hardy class); used to continue e_i upstairs
    const RealGrid& g = d_->profile.base_grid();
    E1_bnd_.resize(g.size());
    E2_bnd_.resize(g.size());
    for (size_t i = 0; i < g.size(); ++i) {
        double t = g.nodes[i];
        cplx se = d_->s_e(cplx(t, 0.0));
        E1_bnd_[i] = se * blaschke_factor(t, ml0_) * boundary_e(1, t);
        E2_bnd_[i] = se * blaschke_factor(t, lambda0_) * boundary_e(2, t);
    }
}

cplx NodeBasis::boundary_e(int which, double t) const {
    // plus image of the reflected-side kernels on the line:
    //   s(t) e_i(t) = s₋(t) k̂_i(t) − k̂_i(−t)   (normalized afterwards)
    const KernelField& khat = (which == 1) ? khat1_ : khat2_;
    cplx num = d_->s_minus(cplx(t, 0.0)) * khat.eval(cplx(t, 0.0)) - khat.eval(cplx(-t, 0.0));
    cplx sv = d_->s(cplx(t, 0.0));
    return num / (sv * std::sqrt(khat_diag_));
}

cplx NodeBasis::v(cplx lambda) const {
    return (lambda * lambda - lambda0_ * lambda0_) /
           (lambda * lambda - std::conj(lambda0_) * std::conj(lambda0_));
}

cplx NodeBasis::v_prime(cplx lambda) const {
    cplx l0s = lambda0_ * lambda0_, l0c = std::conj(lambda0_) * std::conj(lambda0_);
    cplx den = lambda * lambda - l0c;
    return 2.0 * lambda * (l0s - l0c) / (den * den);
}

cplx NodeBasis::log_v_prime_over_i(cplx lambda) const {
    cplx l0s = lambda0_ * lambda0_, l0c = std::conj(lambda0_) * std::conj(lambda0_);
    return 4.0 * lambda * (l0s - l0c) / (2.0 * I_unit) /
           ((lambda * lambda - l0s) * (lambda * lambda - l0c));
}

cplx NodeBasis::E1(cplx lambda) const {
    if (std::abs(lambda.imag()) < 1e-12) {
        double t = lambda.real();
        return blaschke_factor(t, ml0_) * boundary_e(1, t);
    }
    const RealGrid& g = d_->profile.base_grid();
    return cauchy_eval(g, E1_bnd_, lambda) / d_->s_e(lambda);
}

cplx NodeBasis::E2(cplx lambda) const {
    if (std::abs(lambda.imag()) < 1e-12) {
        double t = lambda.real();
        return blaschke_factor(t, lambda0_) * boundary_e(2, t);
    }
    const RealGrid& g = d_->profile.base_grid();
    return cauchy_eval(g, E2_bnd_, lambda) / d_->s_e(lambda);
}

cplx NodeBasis::e1(cplx lambda) const { return E1(lambda) / blaschke_factor(lambda, ml0_); }
cplx NodeBasis::e2(cplx lambda) const { return E2(lambda) / blaschke_factor(lambda, lambda0_); }

cplx NodeBasis::e1_minus(cplx lambda) const {
    return khat1_.eval(lambda) / std::sqrt(khat_diag_);
}
cplx NodeBasis::e2_minus(cplx lambda) const {
    return khat2_.eval(lambda) / std::sqrt(khat_diag_);
}

cplx theta_eval(const NodeBasis& nb, cplx lambda) {
    cplx e2v = nb.E2(lambda);
    if (std::abs(e2v) < 1e-14)
        throw ConditionViolation("theta_eval: regular part of v e₂ vanishes");
    return nb.E1(lambda) / e2v; // e₁/(v e₂) with both poles cancelled
}

cplx theta_at(const NodeBasis& nb, cplx zeta) {
    if (std::abs(zeta) >= 1.0)
        throw std::invalid_argument("theta_at: zeta must lie in the open disk");
    cplx l0s = nb.lambda0() * nb.lambda0();
    cplx l0c = std::conj(nb.lambda0()) * std::conj(nb.lambda0());
    cplx lam2 = (l0s - zeta * l0c) / (1.0 - zeta);
    cplx lam = std::sqrt(lam2); // principal branch lands in the first quadrant
    if (lam.real() < 0.0) lam = -lam;
    return theta_eval(nb, lam);
}

cplx kernel_via_theta(const NodeBasis& nb, cplx lambda, cplx mu) {
    cplx vv = nb.v(lambda) * std::conj(nb.v(mu));
    cplx den = 1.0 - vv;
    if (std::abs(den) < 1e-9) {
        // removable point: nudge towards the interior and take the limit value
        mu += cplx(0.0, 1e-6);
        den = 1.0 - nb.v(lambda) * std::conj(nb.v(mu));
    }
    cplx bl = blaschke_factor(lambda, -std::conj(nb.lambda0()));
    cplx bm = blaschke_factor(mu, -std::conj(nb.lambda0()));
    cplx num = nb.E2(lambda) * std::conj(nb.E2(mu)) - nb.E1(lambda) * std::conj(nb.E1(mu));
    return num / (bl * std::conj(bm) * den);
}

WronskianReport wronskian_interior(const NodeBasis& nb, cplx mu) {
    const DerivedData& d = nb.derived();
    cplx s_mu = d.s(mu);
    cplx se2m = s_mu * nb.e2_minus(mu);
    cplx se1m = s_mu * nb.e1_minus(mu);
    WronskianReport rep;
    rep.lhs = se2m * nb.e1(mu) - se1m * nb.e2(mu);
    rep.rhs = nb.log_v_prime_over_i(mu);
    rep.scale = std::abs(rep.rhs) + std::abs(se2m * nb.e1(mu)) + std::abs(se1m * nb.e2(mu));
    rep.residual = std::abs(rep.lhs - rep.rhs) / std::max(rep.scale, 1e-300);
    return rep;
}

WronskianReport wronskianBoundaryImpl(const NodeBasis& nb, double mu) {
    WronskianReport rep;
    double a1 = abs2(nb.e1(cplx(mu, 0.0)));
    double a2 = abs2(nb.e2(cplx(mu, 0.0)));
    rep.lhs = a2 - a1;
    rep.rhs = nb.log_v_prime_over_i(cplx(mu, 0.0));
    rep.scale = a1 + a2 + std::abs(rep.rhs);
    rep.residual = std::abs(rep.lhs - rep.rhs) / std::max(rep.scale, 1e-300);
    return rep;
}

WronskianReport wronskian_boundary(const NodeBasis& nb, double mu) {
    if (mu <= 0.0) throw std::invalid_argument("wronskian_boundary: mu must be positive");
    return wronskianBoundaryImpl(nb, mu);
}

ThetaData theta_scattering_data(const NodeBasis& nb, int n_test_functions) {
    ThetaData td;
    const DerivedData& d = nb.derived();
    const RealGrid& g = d.profile.base_grid();

    for (size_t i = g.size() / 2; i < g.size(); i += 5) {
        double t = g.nodes[i];
        if (t <= 0.0) continue;
        cplx e2p = nb.e2(cplx(t, 0.0));
        cplx e2n = nb.e2(cplx(-t, 0.0));
        if (std::abs(e2p) < 1e-12) continue;
        td.lambda_real.push_back(t);
        cplx ratio = e2n / e2p;
        td.s_plus_theta.push_back(ratio);
        td.contraction_excess = std::max(td.contraction_excess, std::abs(ratio) - 1.0);
    }
    td.contraction_excess = std::max(td.contraction_excess, 0.0);

    // density of the phase measure on the imaginary axis, log-spaced panels
    std::vector<double> gx, gw;
    gauss_legendre(8, gx, gw);
    double y_lo = 1e-4, y_hi = 1e3;
    int panels = 10;
    std::vector<double> ys, ws;
    for (int p = 0; p < panels; ++p) {
        double u0 = std::log(y_lo) + (std::log(y_hi) - std::log(y_lo)) * p / panels;
        double u1 = std::log(y_lo) + (std::log(y_hi) - std::log(y_lo)) * (p + 1) / panels;
        for (size_t k = 0; k < gx.size(); ++k) {
            double u = 0.5 * (u0 + u1) + 0.5 * (u1 - u0) * gx[k];
            double y = std::exp(u);
            ys.push_back(y);
            ws.push_back(0.5 * (u1 - u0) * gw[k] * y); // du → dy
        }
    }
    double min_density = std::numeric_limits<double>::infinity();
    std::vector<double> densities(ys.size());
    for (size_t k = 0; k < ys.size(); ++k) {
        cplx iy(0.0, ys[k]);
        double dv = std::abs(nb.v_prime(iy));
        double e2sq = abs2(nb.e2(iy));
        if (e2sq < 1e-300) throw NumericalError("theta_scattering_data: e2 vanishes on iR+");
        densities[k] = dv / (2.0 * PI * e2sq);
        min_density = std::min(min_density, densities[k]);
        td.y_imag.push_back(ys[k]);
        td.nu_theta.push_back(densities[k]);
    }
    td.min_density = min_density;

    // isometry of the identity map into the θ-side data for rational elements
    FMData plus = make_view(d, Side::Plus, 0.0);
    for (int n = 0; n < n_test_functions; ++n) {
        FMVector f;
        f.parts.push_back({0.0, BoundaryFn::from_rational(RationalBasis::tm_element(n))});
        f.attach_mass_values(plus);
        double lhs = fm_norm(f, plus);

        // θ-side point part: ∫ |f|² dν^θ on the imaginary axis
        double mass_part = 0.0;
        for (size_t k = 0; k < ys.size(); ++k)
            mass_part += ws[k] * densities[k] * abs2(f.eval(cplx(0.0, ys[k])));
        // θ-side boundary part with the symbol sampled from e₂
        double bnd = 0.0;
        for (size_t i = 0; i < g.size(); ++i) {
            double t = g.nodes[i];
            cplx ft = f.eval(cplx(t, 0.0));
            cplx frt = f.eval(cplx(-t, 0.0));
            // the symbol lives on ℝ₊ and extends by conjugation
            double ta = std::abs(t);
            cplx e2p = nb.e2(cplx(ta, 0.0));
            cplx e2n = nb.e2(cplx(-ta, 0.0));
            cplx sym = (std::abs(e2p) > 1e-13) ? e2n / e2p : cplx(0.0);
            if (t < 0.0) sym = std::conj(sym);
            bnd += g.weights[i] *
                   (abs2(ft) + abs2(frt) - 2.0 * (sym * ft * std::conj(frt)).real());
        }
        bnd /= 4.0 * PI;
        double rhs = mass_part + bnd;
        td.isometry_residual =
            std::max(td.isometry_residual, std::abs(rhs - lhs) / std::max(lhs, 1e-300));
    }
    return td;
}

} // namespace sk
