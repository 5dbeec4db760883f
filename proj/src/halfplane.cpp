#include "scatterkern/halfplane.hpp"

#include <algorithm>
#include <cmath>

namespace sk {

BlaschkeProduct::BlaschkeProduct(std::vector<cplx> zeros) : zeros_(std::move(zeros)) {
    signs_.reserve(zeros_.size());
    for (cplx z : zeros_) {
        if (z.imag() <= 0.0)
            throw ConditionViolation("BlaschkeProduct: zero with Im <= 0");
        signs_.push_back(factor_sign(z));
    }
}

cplx BlaschkeProduct::eval(cplx lambda) const { return eval_tail(lambda, 0); }

cplx BlaschkeProduct::eval_tail(cplx lambda, size_t from) const {
    cplx prod = 1.0;
    for (size_t k = from; k < zeros_.size(); ++k) {
        cplx den = lambda - std::conj(zeros_[k]);
        if (std::abs(den) < 1e-14)
            throw ConditionViolation("BlaschkeProduct: evaluation at a reflected zero");
        prod *= static_cast<double>(signs_[k]) * (lambda - zeros_[k]) / den;
    }
    return prod;
}

cplx BlaschkeProduct::derivative_at_zero(size_t k) const {
    cplx z = zeros_[k];
    cplx d = static_cast<double>(signs_[k]) / (z - std::conj(z)); // b_z'(z) with sign
    for (size_t j = 0; j < zeros_.size(); ++j) {
        if (j == k) continue;
        d *= static_cast<double>(signs_[j]) * (z - zeros_[j]) / (z - std::conj(zeros_[j]));
    }
    return d;
}

RationalFn BlaschkeProduct::rational() const {
    RationalFn r;
    for (size_t k = 0; k < zeros_.size(); ++k) r = r * RationalFn::blaschke(zeros_[k], signs_[k]);
    return r;
}

std::pair<double, double> BlaschkeProduct::condition_sums() const {
    double small = 0.0, large = 0.0;
    for (cplx z : zeros_) {
        double t = z.imag(); // z/i for z on the imaginary axis; Im z in general
        if (t <= 1.0)
            small += t;
        else
            large += 1.0 / t;
    }
    return {small, large};
}

OuterFunction::OuterFunction(const RealGrid& grid, std::vector<double> log_modulus)
    : grid_(&grid), u_(std::move(log_modulus)) {
    if (u_.size() != grid.size())
        throw std::invalid_argument("OuterFunction: sample count mismatch");
    double poisson = 0.0;
    for (size_t k = 0; k < u_.size(); ++k) {
        if (!std::isfinite(u_[k]))
            throw ConditionViolation("OuterFunction: log-modulus not integrable");
        poisson += grid.weights[k] * std::abs(u_[k]) / (1.0 + sq(grid.nodes[k]));
    }
    if (!std::isfinite(poisson))
        throw ConditionViolation("OuterFunction: Szego-type integral diverges");
    cplx e;
    schwarz_exponent_imag(cplx(0.0, 1.0), e);
    phase_at_i_ = e.imag();
}

double OuterFunction::schwarz_exponent_imag(cplx lambda, cplx& out) const {
    // exponent(λ) = (1/iπ) ∫ [ 1/(t−λ) − t/(1+t²) ] u(t) dt
    cplx acc = 0.0;
    for (size_t k = 0; k < u_.size(); ++k) {
        double t = grid_->nodes[k];
        acc += grid_->weights[k] * u_[k] * (1.0 / (t - lambda) - t / (1.0 + t * t));
    }
    out = acc / cplx(0.0, PI);
    return 0.0;
}

cplx OuterFunction::eval(cplx lambda) const {
    if (lambda.imag() <= 0.0)
        throw std::invalid_argument("OuterFunction::eval: Im lambda must be > 0");
    cplx e;
    schwarz_exponent_imag(lambda, e);
    return std::exp(e - cplx(0.0, phase_at_i_));
}

double OuterFunction::boundary_log_modulus(double t) const {
    // nearest-node lookup; boundary values are only requested on grid nodes
    auto it = std::lower_bound(grid_->nodes.begin(), grid_->nodes.end(), t);
    size_t k = static_cast<size_t>(it - grid_->nodes.begin());
    if (k == grid_->nodes.size()) --k;
    if (k > 0 && std::abs(grid_->nodes[k - 1] - t) < std::abs(grid_->nodes[k] - t)) --k;
    return u_[k];
}

cplx OuterFunction::boundary(double t) const {
    // principal value with singularity subtraction:
    //   exponent = u(t) − (i/π)[ PV ∫ u(x)/(x−t) dx − ∫ x u(x)/(1+x²) dx ]
    double ut = boundary_log_modulus(t);
    double pv = 0.0, tail = 0.0;
    for (size_t k = 0; k < u_.size(); ++k) {
        double x = grid_->nodes[k], w = grid_->weights[k];
        tail += w * x * u_[k] / (1.0 + x * x);
        double d = x - t;
        if (std::abs(d) > 1e-12) {
            pv += w * (u_[k] - ut) / d;
        } else if (k >= 2 && k + 2 < u_.size()) {
            // removable point: the integrand limit is u'(t); differentiate the
            // Lagrange interpolant on the nonuniform 5-point stencil around k
            double du = 0.0;
            for (size_t j = k - 2; j <= k + 2; ++j) {
                if (j == k) {
                    double s = 0.0;
                    for (size_t m = k - 2; m <= k + 2; ++m)
                        if (m != k) s += 1.0 / (t - grid_->nodes[m]);
                    du += u_[k] * s;
                } else {
                    double coef = 1.0 / (grid_->nodes[j] - t);
                    for (size_t m = k - 2; m <= k + 2; ++m)
                        if (m != j && m != k)
                            coef *= (t - grid_->nodes[m]) / (grid_->nodes[j] - grid_->nodes[m]);
                    du += u_[j] * coef;
                }
            }
            pv += w * du;
        }
    }
    double T = grid_->cutoff;
    pv += ut * std::log(std::abs((T - t) / (T + t)));
    cplx exponent = cplx(ut, 0.0) - cplx(0.0, 1.0 / PI) * (pv - tail) - cplx(0.0, phase_at_i_);
    return std::exp(exponent);
}

SzegoResult szego_integral(const RealGrid& grid, const std::function<cplx(double)>& s_plus,
                           const std::function<double(double)>* one_minus_s2) {
    SzegoResult r;
    for (size_t k = 0; k < grid.size(); ++k) {
        double t = grid.nodes[k];
        double arg = one_minus_s2 ? (*one_minus_s2)(t) : 1.0 - abs2(s_plus(t));
        if (arg <= 0.0) {
            r.finite = false;
            r.value = -std::numeric_limits<double>::infinity();
            return r;
        }
        r.value += grid.weights[k] * std::log(arg) / (1.0 + t * t);
    }
    if (!std::isfinite(r.value)) r.finite = false;
    return r;
}

cplx cauchy_eval(const RealGrid& grid, const std::vector<cplx>& boundary_values, cplx mu,
                 const std::vector<cplx>& known_poles) {
    if (boundary_values.size() != grid.size())
        throw std::invalid_argument("cauchy_eval: value count mismatch");
    if (mu.imag() <= 0.0)
        throw std::invalid_argument("cauchy_eval: Im mu must be > 0");
    cplx acc = 0.0;
    for (size_t k = 0; k < grid.size(); ++k) {
        double t = grid.nodes[k];
        cplx v = boundary_values[k];
        for (cplx p : known_poles) v *= blaschke_factor(t, p);
        acc += grid.weights[k] * v / (t - mu);
    }
    cplx val = acc / cplx(0.0, 2.0 * PI);
    for (cplx p : known_poles) val /= blaschke_factor(mu, p);
    return val;
}

} // namespace sk
