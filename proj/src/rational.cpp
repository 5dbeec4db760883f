#include "scatterkern/rational.hpp"

#include <algorithm>
#include <cmath>

namespace sk {

namespace {

constexpr double kMergeTol = 1e-12;
constexpr double kRealPoleTol = 1e-9;
constexpr long double kPiL = 3.14159265358979323846264338328L;

bool same_point(cplx a, cplx b) {
    return std::abs(a - b) <= kMergeTol * (1.0 + std::abs(a) + std::abs(b));
}

} // namespace

RationalFn::RationalFn(cplx constant) : scale_(constant) {
    if (constant == cplx(0.0)) {
        zero_ = true;
        scale_ = 0.0L;
    }
}

RationalFn RationalFn::zero() { return RationalFn(cplx(0.0)); }

RationalFn RationalFn::linear(cplx z) {
    RationalFn r;
    r.factors_.push_back({z, 1});
    return r;
}

RationalFn RationalFn::simple_pole(cplx p) {
    RationalFn r;
    r.factors_.push_back({p, -1});
    return r;
}

RationalFn RationalFn::blaschke(cplx z, int sign) {
    RationalFn r;
    r.scale_ = (sign < 0) ? -1.0L : 1.0L;
    r.push(z, 1);
    r.push(std::conj(z), -1);
    return r;
}

void RationalFn::push(cplx loc, int mult) {
    for (auto& f : factors_)
        if (same_point(f.location, loc)) {
            f.multiplicity += mult;
            if (f.multiplicity == 0) {
                f = factors_.back();
                factors_.pop_back();
            }
            return;
        }
    if (mult != 0) factors_.push_back({loc, mult});
}

int RationalFn::degree() const {
    if (zero_) return -1000000;
    int d = 0;
    for (const auto& f : factors_) d += f.multiplicity;
    return d;
}

cplx RationalFn::eval(cplx lambda) const {
    if (zero_) return 0.0;
    lcplx z(lambda);
    lcplx acc = scale_;
    // interleave large positive and negative powers to limit the dynamic range
    std::vector<std::pair<lcplx, int>> work;
    for (const auto& f : factors_) work.push_back({z - lcplx(f.location), f.multiplicity});
    bool progress = true;
    while (progress) {
        progress = false;
        for (auto& [base, m] : work) {
            if (m > 0) {
                acc *= base;
                --m;
                progress = true;
            } else if (m < 0) {
                acc /= base;
                ++m;
                progress = true;
            }
        }
    }
    return cplx(acc);
}

cplx RationalFn::derivative_at(cplx lambda) const {
    if (zero_) return 0.0;
    // at a zero factor only the term differentiating that factor survives
    for (const auto& f : factors_) {
        if (!same_point(f.location, lambda)) continue;
        if (f.multiplicity < 0)
            throw NumericalError("RationalFn: derivative at a pole");
        if (f.multiplicity >= 2) return 0.0;
        RationalFn rest = *this;
        for (auto& g : rest.factors_)
            if (same_point(g.location, lambda)) {
                g = rest.factors_.back();
                rest.factors_.pop_back();
                break;
            }
        return rest.eval(lambda);
    }
    lcplx z(lambda);
    lcplx logd = 0.0L;
    for (const auto& f : factors_)
        logd += lcplx(static_cast<long double>(f.multiplicity)) / (z - lcplx(f.location));
    return cplx(lcplx(eval(lambda)) * logd);
}

RationalFn RationalFn::operator*(const RationalFn& o) const {
    if (zero_ || o.zero_) return zero();
    RationalFn r = *this;
    r.scale_ *= o.scale_;
    for (const auto& f : o.factors_) r.push(f.location, f.multiplicity);
    return r;
}

RationalFn RationalFn::operator*(cplx c) const {
    if (zero_ || c == cplx(0.0)) return zero();
    RationalFn r = *this;
    r.scale_ *= lcplx(c);
    return r;
}

RationalFn RationalFn::reflected() const {
    RationalFn r;
    r.zero_ = zero_;
    r.scale_ = scale_;
    int total = 0;
    for (const auto& f : factors_) {
        r.factors_.push_back({-f.location, f.multiplicity});
        total += f.multiplicity;
    }
    if (total % 2 != 0) r.scale_ = -r.scale_;
    return r;
}

RationalFn RationalFn::conj_params() const {
    RationalFn r;
    r.zero_ = zero_;
    r.scale_ = std::conj(scale_);
    for (const auto& f : factors_) r.factors_.push_back({std::conj(f.location), f.multiplicity});
    return r;
}

RationalFn RationalFn::reciprocal() const {
    if (zero_) throw NumericalError("RationalFn: reciprocal of zero");
    RationalFn r;
    r.scale_ = 1.0L / scale_;
    for (const auto& f : factors_) r.factors_.push_back({f.location, -f.multiplicity});
    return r;
}

std::vector<FactorTerm> RationalFn::poles_in_half_plane(bool upper) const {
    std::vector<FactorTerm> out;
    for (const auto& f : factors_) {
        if (f.multiplicity >= 0) continue;
        double im = f.location.imag();
        if ((upper && im > 0.0) || (!upper && im < 0.0)) out.push_back(f);
        if (std::abs(im) < kRealPoleTol)
            throw NumericalError("RationalFn: pole on the real axis");
    }
    return out;
}

int RationalFn::max_pole_multiplicity(bool upper) const {
    int m = 0;
    for (const auto& f : poles_in_half_plane(upper)) m = std::max(m, -f.multiplicity);
    return m;
}

// ---------------------------------------------------------------------------
// group integration

namespace {

using Series = std::vector<lcplx>;

Series series_mul(const Series& a, const Series& b, int order) {
    Series out(static_cast<size_t>(order) + 1, lcplx(0));
    for (size_t i = 0; i < a.size() && i <= static_cast<size_t>(order); ++i) {
        if (a[i] == lcplx(0)) continue;
        size_t jmax = std::min(b.size(), static_cast<size_t>(order) + 1 - i);
        for (size_t j = 0; j < jmax; ++j) out[i + j] += a[i] * b[j];
    }
    return out;
}

// series of (u + c)^k, k > 0 integer
Series series_pow_pos(lcplx c, int k, int order) {
    Series out(static_cast<size_t>(order) + 1, lcplx(0));
    if (c == lcplx(0)) {
        if (k <= order) out[static_cast<size_t>(k)] = 1.0L;
        return out;
    }
    lcplx term = std::pow(c, static_cast<long double>(k));
    for (int j = 0; j <= std::min(k, order); ++j) {
        out[static_cast<size_t>(j)] = term;
        if (j < k) term *= lcplx(static_cast<long double>(k - j)) /
                           (lcplx(static_cast<long double>(j + 1)) * c);
    }
    return out;
}

// series of (u + c)^{-m}, m > 0, c ≠ 0
Series series_pow_neg(lcplx c, int m, int order) {
    Series out(static_cast<size_t>(order) + 1, lcplx(0));
    lcplx term = std::pow(c, static_cast<long double>(-m));
    for (int j = 0; j <= order; ++j) {
        out[static_cast<size_t>(j)] = term;
        term *= -lcplx(static_cast<long double>(m + j)) /
                (lcplx(static_cast<long double>(j + 1)) * c);
    }
    return out;
}

Series series_exp_phase(double a, lcplx p, int order) {
    Series out(static_cast<size_t>(order) + 1, lcplx(0));
    lcplx ia(0.0L, static_cast<long double>(a));
    lcplx term = std::exp(ia * p);
    for (int j = 0; j <= order; ++j) {
        out[static_cast<size_t>(j)] = term;
        term *= ia / lcplx(static_cast<long double>(j + 1));
    }
    return out;
}

// residue of term(λ)·e^{iaλ} at the pole p of the term
lcplx residue_at(const RationalFn& term, cplx p, int mult, double a) {
    int order = mult - 1;
    Series s(static_cast<size_t>(order) + 1, lcplx(0));
    s[0] = lcplx(term.scale());
    s = series_mul(s, series_exp_phase(a, lcplx(p), order), order);
    for (const auto& f : term.factors()) {
        if (same_point(f.location, p)) continue;
        lcplx c = lcplx(p) - lcplx(f.location);
        if (f.multiplicity > 0)
            s = series_mul(s, series_pow_pos(c, f.multiplicity, order), order);
        else
            s = series_mul(s, series_pow_neg(c, -f.multiplicity, order), order);
    }
    return s[static_cast<size_t>(order)];
}

cplx group_eval(const std::vector<RationalFn>& terms, cplx lambda) {
    lcplx acc = 0.0L;
    for (const auto& t : terms) acc += lcplx(t.eval(lambda));
    return cplx(acc);
}

// a = 0 route: map to the Cayley disk w = (λ−i)/(λ+i) and integrate over a
// circle |w| = ρ threaded between the images of the upper and lower poles.
std::optional<cplx> disk_contour_integral(const std::vector<RationalFn>& terms) {
    double rho_in = 0.0, rho_out = 10.0;
    const cplx I(0.0, 1.0);
    for (const auto& t : terms)
        for (const auto& f : t.factors()) {
            if (f.multiplicity >= 0) continue;
            if (same_point(f.location, -I)) continue; // image at w = ∞
            cplx q = (f.location - I) / (f.location + I);
            double r = std::abs(q);
            if (f.location.imag() > 0.0)
                rho_in = std::max(rho_in, r);
            else
                rho_out = std::min(rho_out, r);
        }
    // keep a fixed geometric margin to both pole clusters so the trapezoid
    // converges at full precision, and stay near |w| = 1 where the integrand
    // magnitudes are balanced
    double lo = rho_in * 1.1, hi = std::min(0.95, rho_out / 1.1);
    if (lo > hi) return std::nullopt;
    double rho = std::clamp(0.9, lo, hi);

    // decay probe: the summed integrand must fall off like λ^{-2}; slower
    // decay (a λ^{-1} tail) means the line integral itself diverges
    {
        const double R1 = 3.1e5, R2 = 6.51e6;
        double v1 = std::abs(group_eval(terms, cplx(R1, 0.0))) +
                    std::abs(group_eval(terms, cplx(-R1, 0.0)));
        double v2 = std::abs(group_eval(terms, cplx(R2, 0.0))) +
                    std::abs(group_eval(terms, cplx(-R2, 0.0)));
        bool ok = (v2 < 1e-25) || (v2 <= v1 * std::pow(R1 / R2, 1.5));
        if (!ok)
            throw ConditionViolation("disk_contour_integral: integrand does not decay");
    }

    // trapezoid on the circle: ∮ G dw = (2πi/M) Σ_j G(w_j) w_j
    const int M = 512;
    const lcplx iL(0.0L, 1.0L);
    lcplx acc = 0.0L;
    for (int j = 0; j < M; ++j) {
        long double th = 2.0L * kPiL * j / M;
        lcplx w = lcplx((long double)rho) * std::exp(lcplx(0.0L, th));
        lcplx lam = iL * (lcplx(1.0L) + w) / (lcplx(1.0L) - w);
        lcplx dlam = lcplx(2.0L) * iL / ((lcplx(1.0L) - w) * (lcplx(1.0L) - w));
        acc += lcplx(group_eval(terms, cplx(lam))) * dlam * w;
    }
    return cplx(acc * lcplx(2.0L) * kPiL * iL / lcplx(static_cast<long double>(M)));
}

} // namespace

std::optional<cplx> line_integral_group(const std::vector<RationalFn>& terms, double a) {
    std::vector<const RationalFn*> live;
    for (const auto& t : terms)
        if (!t.is_zero()) live.push_back(&t);
    if (live.empty()) return cplx(0.0);

    if (a == 0.0) {
        std::vector<RationalFn> v;
        for (auto* t : live) v.push_back(*t);
        return disk_contour_integral(v);
    }

    const bool upper = a > 0.0;
    int max_mult = 0;
    for (auto* t : live) max_mult = std::max(max_mult, t->max_pole_multiplicity(upper));
    if (max_mult == 0) return cplx(0.0); // analytic in the closing half-plane

    if (max_mult > 8) return std::nullopt;
    lcplx total = 0.0L;
    for (auto* t : live) {
        if (t->degree() > -1) return std::nullopt; // sum may decay; quadrature decides
        for (const auto& f : t->poles_in_half_plane(upper))
            total += residue_at(*t, f.location, -f.multiplicity, a);
    }
    lcplx two_pi_i(0.0L, 2.0L * kPiL);
    return cplx(upper ? two_pi_i * total : -two_pi_i * total);
}

} // namespace sk
