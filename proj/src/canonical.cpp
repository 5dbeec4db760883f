#include "scatterkern/canonical.hpp"

#include <cmath>

namespace sk {

namespace {
const cplx I_unit(0.0, 1.0);
}

CanonicalNode::CanonicalNode(std::shared_ptr<const DerivedData> d, cplx lambda0, double x,
                             int order, std::shared_ptr<const NodeBasis> shared)
    : d_(d),
      l0_(lambda0),
      ml0_(-std::conj(lambda0)),
      x_(x),
      order_(order),
      node_(shared ? std::move(shared)
                   : std::make_shared<const NodeBasis>(d, lambda0, order)) {
    FMData plus_x = make_view(*d_, Side::Plus, x_);
    kx1_ = kernel_compute(Flavor::H2, plus_x, l0_, order_);
    kx2_ = kernel_compute(Flavor::H2, plus_x, ml0_, order_);
    kx_norm_ = std::exp(-x_ * l0_.imag()) * std::sqrt(std::max(kx1_.diag(), 1e-300));

    FMData minus_mod = divide_by_blaschke_pair(make_view(*d_, Side::Minus, -x_), l0_);
    khat_mod1_ = kernel_compute(Flavor::H2Hat, minus_mod, ml0_, order_);
    khat_mod2_ = kernel_compute(Flavor::H2Hat, minus_mod, l0_, order_);
    match_constants();
}

cplx CanonicalNode::e2_1(cplx lambda) const {
    // e^{ix(λ−λ̄₀)} k_x(λ,λ₀) normalized by e^{−x Im λ₀}√(k_x(λ₀,λ₀))
    return std::exp(I_unit * x_ * (lambda - std::conj(l0_))) * kx1_.eval(lambda) / kx_norm_;
}

cplx CanonicalNode::e2_2(cplx lambda) const {
    return std::exp(I_unit * x_ * (lambda - std::conj(ml0_))) * kx2_.eval(lambda) / kx_norm_;
}

cplx CanonicalNode::boundary_minus(const KernelField& k, double norm, double t) const {
    // duality image on the line: s f⁻ = s₊ f − f(−λ) applied to a translated kernel
    cplx phase_p = std::exp(I_unit * x_ * (cplx(t, 0.0) - std::conj(k.mu)));
    cplx phase_m = std::exp(I_unit * x_ * (cplx(-t, 0.0) - std::conj(k.mu)));
    cplx f_t = phase_p * k.eval(cplx(t, 0.0)) / norm;
    cplx f_mt = phase_m * k.eval(cplx(-t, 0.0)) / norm;
    return (d_->data.s_plus(cplx(t, 0.0)) * f_t - f_mt) / d_->s(cplx(t, 0.0));
}

void CanonicalNode::match_constants() {
    // (e₂⁽¹⁾)⁻(λ) = C₁ e^{−iλx} b_{−λ̄₀}⁻¹(λ) k̂_mod(λ, −λ̄₀):  fit C on the grid
    const RealGrid& g = d_->profile.base_grid();
    cplx num1 = 0.0, num2 = 0.0;
    double den1 = 0.0, den2 = 0.0;
    for (size_t i = 0; i < g.size(); i += 3) {
        double t = g.nodes[i];
        if (std::abs(t) > 8.0) continue;
        cplx lhs1 = boundary_minus(kx1_, kx_norm_, t);
        cplx rhs1 = std::exp(-I_unit * x_ * t) / blaschke_factor(t, ml0_) *
                    khat_mod1_.eval(cplx(t, 0.0));
        num1 += std::conj(rhs1) * lhs1;
        den1 += abs2(rhs1);
        cplx lhs2 = boundary_minus(kx2_, kx_norm_, t);
        cplx rhs2 = std::exp(-I_unit * x_ * t) / blaschke_factor(t, l0_) *
                    khat_mod2_.eval(cplx(t, 0.0));
        num2 += std::conj(rhs2) * lhs2;
        den2 += abs2(rhs2);
    }
    c_minus1_ = num1 / den1;
    c_minus2_ = num2 / den2;
}

cplx CanonicalNode::e2_1_minus(cplx lambda) const {
    if (std::abs(lambda.imag()) < 1e-12)
        return boundary_minus(kx1_, kx_norm_, lambda.real());
    return c_minus1_ * std::exp(-I_unit * x_ * lambda) / blaschke_factor(lambda, ml0_) *
           khat_mod1_.eval(lambda);
}

cplx CanonicalNode::e2_2_minus(cplx lambda) const {
    if (std::abs(lambda.imag()) < 1e-12)
        return boundary_minus(kx2_, kx_norm_, lambda.real());
    return c_minus2_ * std::exp(-I_unit * x_ * lambda) / blaschke_factor(lambda, l0_) *
           khat_mod2_.eval(lambda);
}

Eigen::Matrix2cd CanonicalNode::transfer(cplx lambda) const {
    cplx vl = v(lambda);
    Eigen::Matrix2cd M2, M1;
    M2 << vl * e2_2_minus(lambda), -e2_1_minus(lambda), vl * e2_2(lambda), -e2_1(lambda);
    M1 << node_->e1_minus(lambda), -vl * e2_minus_free(lambda), node_->e1(lambda),
        -vl * node_->e2(lambda);
    return M2.inverse() * M1;
}

cplx CanonicalNode::e2_minus_free(cplx lambda) const { return node_->e2_minus(lambda); }

Eigen::Matrix2cd CanonicalNode::ematrix(cplx lambda) const {
    cplx vl = v(lambda);
    Eigen::Matrix2cd E;
    E << -e2_1(lambda), e2_1_minus(lambda), -vl * e2_2(lambda), vl * e2_2_minus(lambda);
    return E;
}

Eigen::Matrix2cd CanonicalNode::ematrix_at_l0() const {
    Eigen::Matrix2cd E;
    // v(λ₀) = 0 kills the (2,1) entry; (2,2) has the pole of the duality image
    // cancelled against the zero of v:  v·(e₂⁽²⁾)⁻ = e^{−iλx} C₂ k̂_mod(·,λ₀)/b_{−λ̄₀}
    cplx e22m = c_minus2_ * std::exp(-I_unit * x_ * l0_) / blaschke_factor(l0_, ml0_) *
                khat_mod2_.eval(l0_);
    E << -e2_1(l0_), e2_1_minus(l0_), cplx(0.0), e22m;
    return E;
}

double CanonicalNode::tau() const { return kx_norm_; }

cplx CanonicalNode::a_value() const {
    cplx s0 = d_->s(l0_);
    double two_im = 2.0 * l0_.imag();
    cplx pref = std::exp(I_unit * x_ * (l0_ - std::conj(ml0_)));
    return s0 * s0 * sq(two_im) * pref * khat_mod1_.eval(l0_);
}

double CanonicalNode::tau_inv2_trace() const {
    cplx s0 = d_->s(l0_), sm = d_->s(ml0_);
    double two_im = 2.0 * l0_.imag();
    cplx pref = std::exp(I_unit * x_ * (ml0_ - std::conj(ml0_)));
    cplx val = s0 * sm * sq(two_im) * pref * khat_mod1_.diag();
    return val.real();
}

Eigen::Matrix2cd chain_divisor(const CanonicalNode& at_x1, const CanonicalNode& at_x2,
                               double lambda) {
    auto row = [&](const CanonicalNode& n, double t) {
        Eigen::RowVector2cd r;
        r << n.v(cplx(t, 0.0)) * n.e2_2(cplx(t, 0.0)), n.e2_1(cplx(t, 0.0));
        return r;
    };
    Eigen::Matrix2cd L, R;
    L.row(0) = row(at_x1, lambda);
    L.row(1) = row(at_x1, -lambda);
    R.row(0) = row(at_x2, lambda);
    R.row(1) = row(at_x2, -lambda);
    return L.inverse() * R;
}

Eigen::Matrix2cd left_limit_divisor(std::shared_ptr<const DerivedData> d, cplx lambda0,
                                    double lambda, int order) {
    cplx ml0 = -std::conj(lambda0);
    FMData plus = make_view(*d, Side::Plus, 0.0);
    KernelField k1 = kernel_compute(Flavor::H2, plus, lambda0, order);
    KernelField k2 = kernel_compute(Flavor::H2, plus, ml0, order);
    KernelField h1 = kernel_compute(Flavor::H2Hat, plus, lambda0, order);
    KernelField h2 = kernel_compute(Flavor::H2Hat, plus, ml0, order);
    double norm_k = std::sqrt(k1.diag()), norm_h = std::sqrt(h1.diag());
    auto vmap = [&](cplx z) {
        return (z * z - lambda0 * lambda0) / (z * z - std::conj(lambda0) * std::conj(lambda0));
    };
    auto row = [&](KernelField& a, KernelField& b, double nrm, double t) {
        Eigen::RowVector2cd r;
        r << vmap(cplx(t, 0.0)) * b.eval(cplx(t, 0.0)) / nrm, a.eval(cplx(t, 0.0)) / nrm;
        return r;
    };
    Eigen::Matrix2cd L, R;
    L.row(0) = row(h1, h2, norm_h, lambda);
    L.row(1) = row(h1, h2, norm_h, -lambda);
    R.row(0) = row(k1, k2, norm_k, lambda);
    R.row(1) = row(k1, k2, norm_k, -lambda);
    return L.inverse() * R;
}

cplx beta_over_alpha(std::shared_ptr<const DerivedData> d, cplx lambda0, double x, int order,
                     double h) {
    auto shared = std::make_shared<const NodeBasis>(d, lambda0, order);
    auto traces = [&](double xx) -> std::pair<cplx, cplx> {
        CanonicalNode n(d, lambda0, xx, order, shared);
        cplx s0 = d->s(lambda0);
        double two_im = 2.0 * lambda0.imag();
        cplx a = n.a_value() / (s0 * s0 * sq(two_im)); // κ̂(λ₀,−λ̄₀;x)
        cplx t2 = n.tau_inv2_trace() / (s0 * d->s(-std::conj(lambda0)) * sq(two_im));
        return {a, t2};
    };
    auto diff = [&](double step) -> std::pair<cplx, cplx> {
        auto [ap, tp] = traces(x + step);
        auto [am, tm] = traces(x - step);
        return {(ap - am) / (2.0 * step), (tp - tm) / (2.0 * step)};
    };
    auto [da1, dt1] = diff(h);
    auto [da2, dt2] = diff(h / 2.0);
    cplx da = (4.0 * da2 - da1) / 3.0;
    cplx dt = (4.0 * dt2 - dt1) / 3.0;
    if (std::abs(dt) < 1e-14)
        throw NumericalError("beta_over_alpha: vanishing denominator derivative");
    return -(d->s(lambda0) / d->s(-std::conj(lambda0))) * da / dt;
}

GaugeCoefficients extract_coefficients(std::shared_ptr<const DerivedData> d, cplx lambda0,
                                       double x, int order, double h) {
    auto shared = std::make_shared<const NodeBasis>(d, lambda0, order);
    auto EatL0 = [&](double xx) {
        CanonicalNode n(d, lambda0, xx, order, shared);
        return n.ematrix_at_l0();
    };
    Eigen::Matrix2cd Ep = EatL0(x + h), Em = EatL0(x - h), E0 = EatL0(x);
    Eigen::Matrix2cd Edot = (Ep - Em) / (2.0 * h);
    Eigen::Matrix2cd j;
    j << 1.0, 0.0, 0.0, -1.0;
    Eigen::Matrix2cd G = j * Edot * E0.inverse(); // = −[[α, 2β],[0, α]]
    GaugeCoefficients out;
    out.alpha = -0.5 * (G(0, 0) + G(1, 1)).real();
    out.beta = -0.5 * G(0, 1);
    out.offdiag_residual = std::abs(G(1, 0)) / (std::abs(out.alpha) + std::abs(out.beta) + 1e-300);
    return out;
}

Eigen::Matrix2cd integrate_canonical(const std::function<double(double)>& alpha,
                                     const std::function<cplx(double)>& beta, cplx lambda2,
                                     double t0, double t1, int steps) {
    if (steps < 1) throw std::invalid_argument("integrate_canonical: steps must be positive");
    Eigen::Matrix2cd j;
    j << 1.0, 0.0, 0.0, -1.0;
    auto gen = [&](double t) {
        double al = alpha(t);
        cplx be = beta(t);
        Eigen::Matrix2cd H, N;
        H << al, be, std::conj(be), al;
        N << 0.0, -be, std::conj(be), 0.0;
        return (j * (I_unit * lambda2 * H + N)).eval();
    };
    Eigen::Matrix2cd A = Eigen::Matrix2cd::Identity();
    double dt = (t1 - t0) / steps;
    for (int k = 0; k < steps; ++k) {
        double t = t0 + k * dt;
        Eigen::Matrix2cd k1 = gen(t) * A;
        Eigen::Matrix2cd k2 = gen(t + 0.5 * dt) * (A + 0.5 * dt * k1);
        Eigen::Matrix2cd k3 = gen(t + 0.5 * dt) * (A + 0.5 * dt * k2);
        Eigen::Matrix2cd k4 = gen(t + dt) * (A + dt * k3);
        A += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    return A;
}

Eigen::Matrix2cd j_defect(const Eigen::Matrix2cd& A) {
    Eigen::Matrix2cd j;
    j << 1.0, 0.0, 0.0, -1.0;
    return j - A * j * A.adjoint();
}

} // namespace sk
