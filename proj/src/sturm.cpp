#include "scatterkern/sturm.hpp"

#include <cmath>
#include <map>

namespace sk {

namespace {

const cplx I_unit(0.0, 1.0);

Eigen::Matrix2cd ode_matrix(const Potential& q, cplx lambda, double x) {
    Eigen::Matrix2cd A;
    A << 0.0, 1.0, q.q(x) - lambda * lambda, 0.0;
    return A;
}

int pick_steps(const Potential&, cplx lambda, double x, int hint) {
    if (hint > 0) return hint;
    double span = std::abs(x);
    double rate = std::abs(lambda) + 1.0;
    return std::max(800, static_cast<int>(std::ceil(span * rate * 40.0)));
}

} // namespace

Potential make_potential(const std::string& name, const std::map<std::string, double>& params) {
    auto get = [&](const std::string& key, double dflt) {
        auto it = params.find(key);
        return it == params.end() ? dflt : it->second;
    };
    Potential p;
    p.name = name;
    if (name == "zero") {
        p.q = [](double) { return 0.0; };
        p.support_end = 0.0;
    } else if (name == "bump") {
        double c = get("c", 2.0), center = get("center", 3.0);
        p.q = [c, center](double x) {
            double ch = std::cosh(x - center);
            return c / (ch * ch);
        };
        p.support_end = center + 11.0; // sech² tail is below 1e-9 there
    } else {
        throw std::invalid_argument("make_potential: unknown potential '" + name + "'");
    }
    return p;
}

double marchenko_integral(const Potential& q) {
    double acc = 0.0;
    int n = 4000;
    double L = std::max(q.support_end, 1.0);
    double h = L / n;
    for (int i = 0; i <= n; ++i) {
        double x = i * h;
        double w = (i == 0 || i == n) ? 0.5 : 1.0;
        acc += w * h * (1.0 + std::abs(x)) * std::abs(q.q(x));
    }
    return acc;
}

SLTransfer integrate_B(const Potential& q, cplx lambda, double x, int steps_hint) {
    SLTransfer out;
    out.x = x;
    out.lambda = lambda;
    int n = pick_steps(q, lambda, x, steps_hint);
    double h = x / n;
    Eigen::Matrix2cd B = Eigen::Matrix2cd::Identity();
    Eigen::Matrix2cd J;
    J << 0.0, 1.0, -1.0, 0.0;
    Eigen::Matrix2cd P;
    P << 1.0, 0.0, 0.0, 0.0;
    cplx flux_rate = lambda * lambda - std::conj(lambda) * std::conj(lambda);
    Eigen::Matrix2cd flux = Eigen::Matrix2cd::Zero();
    Eigen::Matrix2cd prev_integrand = B.adjoint() * P * B;
    for (int k = 0; k < n; ++k) {
        double t = k * h;
        Eigen::Matrix2cd k1 = ode_matrix(q, lambda, t) * B;
        Eigen::Matrix2cd k2 = ode_matrix(q, lambda, t + 0.5 * h) * (B + 0.5 * h * k1);
        Eigen::Matrix2cd k3 = ode_matrix(q, lambda, t + 0.5 * h) * (B + 0.5 * h * k2);
        Eigen::Matrix2cd k4 = ode_matrix(q, lambda, t + h) * (B + h * k3);
        B += h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        Eigen::Matrix2cd cur = B.adjoint() * P * B;
        flux += 0.5 * h * (prev_integrand + cur);
        prev_integrand = cur;
    }
    out.B = B;
    out.det_defect = std::abs(B.determinant() - 1.0);
    Eigen::Matrix2cd defect = B.adjoint() * J * B - J + flux_rate * flux;
    out.conservation_residual = defect.norm() / std::max(1.0, B.norm());
    return out;
}

cplx weyl_m_plus(const Potential& q, cplx lambda) {
    if (lambda.imag() <= 0.0)
        throw std::invalid_argument("weyl_m_plus: Im lambda must be positive");
    if (std::abs((lambda * lambda).imag()) < 1e-12)
        throw ConditionViolation("weyl_m_plus: lambda² on the spectral axis");
    double X = std::max(q.support_end, 1.0);
    int n = pick_steps(q, lambda, X, 0);
    double h = X / n;
    // backward sweep of the column [y, y'] from the free tail
    Eigen::Vector2cd y;
    y << std::exp(I_unit * lambda * X), I_unit * lambda * std::exp(I_unit * lambda * X);
    for (int k = n; k-- > 0;) {
        double t = k * h;
        auto f = [&](double tt, const Eigen::Vector2cd& v) -> Eigen::Vector2cd {
            Eigen::Vector2cd dv;
            dv << v(1), (q.q(tt) - lambda * lambda) * v(0);
            return dv;
        };
        Eigen::Vector2cd k1 = f(t + h, y);
        Eigen::Vector2cd k2 = f(t + 0.5 * h, y - 0.5 * h * k1);
        Eigen::Vector2cd k3 = f(t + 0.5 * h, y - 0.5 * h * k2);
        Eigen::Vector2cd k4 = f(t, y - h * k3);
        y -= h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    }
    if (std::abs(y(1)) < 1e-300)
        throw NumericalError("weyl_m_plus: derivative boundary value vanished");
    return y(0) / y(1);
}

namespace {

// bracket [conj m_a, 1] B*JB [m_b; 1]
cplx weyl_bracket(const Eigen::Matrix2cd& B, cplx m_a, cplx m_b) {
    Eigen::Matrix2cd J;
    J << 0.0, 1.0, -1.0, 0.0;
    Eigen::Vector2cd va, vb;
    va << m_a, 1.0;
    vb << m_b, 1.0;
    return (va.adjoint() * (B.adjoint() * J * B) * vb)(0, 0);
}

struct ColumnData {
    cplx m_plus;
    cplx rho;   // normalization at x₀ (principal branch)
};

ColumnData column_at(const Potential& q, cplx lambda, const Eigen::Matrix2cd& Bx0) {
    ColumnData c;
    c.m_plus = weyl_m_plus(q, lambda);
    cplx l2 = lambda * lambda;
    cplx rate = l2 - std::conj(l2);
    cplx rho2 = rate / weyl_bracket(Bx0, c.m_plus, c.m_plus);
    c.rho = std::sqrt(rho2);
    return c;
}

} // namespace

Eigen::Matrix2cd sl_transfer_normalized(const Potential& q, cplx lambda0, double x0,
                                        cplx lambda) {
    cplx ml0 = -std::conj(lambda0);
    Eigen::Matrix2cd B0_l0 = integrate_B(q, lambda0, x0).B;
    Eigen::Matrix2cd B0_m = integrate_B(q, ml0, x0).B;
    ColumnData cl = column_at(q, lambda0, B0_l0);
    ColumnData cm = column_at(q, ml0, B0_m);

    auto col = [](const Eigen::Matrix2cd& B, const ColumnData& c) -> Eigen::Vector2cd {
        Eigen::Vector2cd v;
        v << c.m_plus, 1.0;
        return B * v * c.rho;
    };
    Eigen::Matrix2cd V_x0, V_0;
    V_x0.col(0) = col(B0_l0, cl);
    V_x0.col(1) = -col(B0_m, cm);
    // at the origin the decaying column is [m₊; 1]·ρ(0)
    cplx l2 = lambda0 * lambda0;
    cplx rate = l2 - std::conj(l2);
    cplx rho0_l = std::sqrt(-rate / (cl.m_plus - std::conj(cl.m_plus)));
    cplx mml2 = ml0 * ml0;
    cplx rate_m = mml2 - std::conj(mml2);
    cplx rho0_m = std::sqrt(-rate_m / (cm.m_plus - std::conj(cm.m_plus)));
    Eigen::Vector2cd u_l, u_m;
    u_l << cl.m_plus, 1.0;
    u_m << cm.m_plus, 1.0;
    V_0.col(0) = u_l * rho0_l;
    V_0.col(1) = -u_m * rho0_m;

    Eigen::Matrix2cd B = integrate_B(q, lambda, x0).B;
    return V_x0.inverse() * B * V_0;
}

WeylData node_quantities(const Potential& q, cplx lambda0, double x0) {
    if (lambda0.real() <= 0.0 || lambda0.imag() <= 0.0)
        throw std::invalid_argument("node_quantities: lambda0 must lie in the first quadrant");
    WeylData out;
    cplx ml0 = -std::conj(lambda0);
    Eigen::Matrix2cd Bx0 = integrate_B(q, lambda0, x0).B;
    ColumnData cl = column_at(q, lambda0, Bx0);
    out.m_plus = cl.m_plus;
    out.rho_x0 = cl.rho;

    cplx l2 = lambda0 * lambda0;
    cplx rate = l2 - std::conj(l2);
    out.rho_0 = std::sqrt(-rate / (cl.m_plus - std::conj(cl.m_plus)));

    // τ from the branch-free bracket formula; the ρ-ratio route must agree in
    // modulus (the square-root branches are a recorded gauge)
    cplx tau_inv2 = -(cl.m_plus - std::conj(cl.m_plus)) / weyl_bracket(Bx0, cl.m_plus, cl.m_plus);
    if (std::abs(tau_inv2.imag()) > 1e-6 * std::abs(tau_inv2) || tau_inv2.real() <= 0.0)
        throw NumericalError("node_quantities: τ⁻² not positive real");
    out.tau = 1.0 / std::sqrt(tau_inv2.real());
    cplx tau_c = out.rho_0 / out.rho_x0;
    out.tau_formula_residual = std::abs(std::abs(tau_c) - out.tau) / out.tau;

    out.a = -weyl_bracket(Bx0, cl.m_plus, std::conj(cl.m_plus)) /
            weyl_bracket(Bx0, cl.m_plus, cl.m_plus);

    // triangular form up to the square-root sign gauge of the normalizers:
    // compare entry moduli, which the gauge cannot touch
    Eigen::Matrix2cd At = sl_transfer_normalized(q, lambda0, x0, lambda0);
    out.normalization_offdiag = std::abs(At(1, 0)) / At.norm();
    double r11 = std::abs(std::abs(At(0, 0)) - out.tau) / out.tau;
    double r22 = std::abs(std::abs(At(1, 1)) - 1.0 / out.tau) * out.tau;
    double r12 = std::abs(std::abs(At(0, 1)) - std::abs(out.a) * out.tau) /
                 (std::abs(out.a) * out.tau + 1.0);
    out.triangular_residual = std::max({r11, r22, r12});

    // independence of the two decaying columns at x₀
    Eigen::Matrix2cd Bm = integrate_B(q, ml0, x0).B;
    ColumnData cm = column_at(q, ml0, Bm);
    Eigen::Matrix2cd D;
    Eigen::Vector2cd u_l, u_m;
    u_l << cl.m_plus, 1.0;
    u_m << cm.m_plus, 1.0;
    D.col(0) = Bx0 * u_l * cl.rho;
    D.col(1) = -Bm * u_m * cm.rho;
    out.delta_det = std::abs(D.determinant());
    return out;
}

IdentityM9Report m9_check(const Potential& q, cplx lambda0, double x0, double h) {
    auto traces = [&](double xx) -> std::pair<cplx, cplx> {
        Eigen::Matrix2cd B = integrate_B(q, lambda0, xx).B;
        cplx m = weyl_m_plus(q, lambda0);
        cplx denom = weyl_bracket(B, m, m);
        cplx tau_inv2 = -(m - std::conj(m)) / denom;
        cplx a = -weyl_bracket(B, m, std::conj(m)) / denom;
        return {a, tau_inv2};
    };
    auto [ap, tp] = traces(x0 + h);
    auto [am, tm] = traces(x0 - h);
    auto [ap2, tp2] = traces(x0 + h / 2.0);
    auto [am2, tm2] = traces(x0 - h / 2.0);
    cplx da = (4.0 * (ap2 - am2) / h - (ap - am) / (2.0 * h)) / 3.0;
    cplx dt = (4.0 * (tp2 - tm2) / h - (tp - tm) / (2.0 * h)) / 3.0;

    IdentityM9Report rep;
    rep.lhs = da / dt;
    Eigen::Matrix2cd B = integrate_B(q, lambda0, x0).B;
    cplx m = weyl_m_plus(q, lambda0);
    cplx cms = B(0, 0) * m + B(0, 1); // c m₊ + s at (x₀, λ₀)
    rep.rhs = std::conj(cms) / cms;
    rep.relative_residual = std::abs(rep.lhs - rep.rhs) / std::abs(rep.rhs);
    return rep;
}

} // namespace sk
