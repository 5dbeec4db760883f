#include "scatterkern/fm.hpp"

#include <algorithm>
#include <cmath>

namespace sk {

namespace {

const cplx I_unit(0.0, 1.0);

BoundaryFn scale_fn(const BoundaryFn& b, cplx c) {
    if (b.has_rational()) return BoundaryFn::from_rational((*b.rat) * c);
    return BoundaryFn::from_handle([b, c](cplx z) { return c * b(z); });
}

// One oscillatory piece of a boundary integral: e^{iaλ}·(rational or handle).
// The handle is always present for the quadrature fallback.
struct Piece {
    double phase = 0.0;
    std::optional<RationalFn> rat;
    std::function<cplx(double)> handle;
};

bool phases_equal(double a, double b) { return std::abs(a - b) < 1e-12; }

// Collects pieces, groups them by phase, and integrates group by group:
// rational groups exactly where possible, otherwise on a grid resolving the
// group's phase.
class BoundaryIntegrator {
public:
    explicit BoundaryIntegrator(const GridProfile& profile) : profile_(profile) {}

    void add(Piece p) { pieces_.push_back(std::move(p)); }

    cplx integrate() {
        cplx total = 0.0;
        std::vector<bool> used(pieces_.size(), false);
        for (size_t i = 0; i < pieces_.size(); ++i) {
            if (used[i]) continue;
            std::vector<size_t> group{i};
            used[i] = true;
            for (size_t j = i + 1; j < pieces_.size(); ++j)
                if (!used[j] && phases_equal(pieces_[j].phase, pieces_[i].phase)) {
                    group.push_back(j);
                    used[j] = true;
                }
            total += integrate_group(group);
        }
        return total;
    }

private:
    cplx integrate_group(const std::vector<size_t>& group) {
        double a = pieces_[group[0]].phase;
        bool all_rational = true;
        for (size_t g : group)
            if (!pieces_[g].rat) all_rational = false;
        if (all_rational) {
            std::vector<RationalFn> terms;
            terms.reserve(group.size());
            for (size_t g : group) terms.push_back(*pieces_[g].rat);
            if (auto v = line_integral_group(terms, a)) return *v;
        }
        auto sum_at = [&](double t) {
            cplx val = 0.0;
            for (size_t g : group) val += pieces_[g].handle(t);
            return val;
        };
        if (std::abs(a) < 1e-9) {
            // the base grid reaches |λ| ~ 1e8; make sure the tail is harmless
            for (double R : {2.9e5, 6.3e6})
                if (!(std::abs(sum_at(R)) * R + std::abs(sum_at(-R)) * R < 1e3))
                    throw ConditionViolation("fm boundary integral does not converge");
        }
        const RealGrid& grid =
            (std::abs(a) < 1e-9) ? profile_.base_grid() : profile_.osc_grid(a);
        lcplx acc = 0.0L;
        for (size_t k = 0; k < grid.size(); ++k) {
            double t = grid.nodes[k];
            acc += lcplx(grid.weights[k] * std::exp(cplx(0.0, a * t)) * sum_at(t));
        }
        return cplx(acc);
    }

    const GridProfile& profile_;
    std::vector<Piece> pieces_;
};

Piece make_piece(double phase, const BoundaryFn& u, const BoundaryFn& v, bool reflect_u,
                 bool reflect_v, bool conj_v, const BoundaryFn* symbol, bool conj_symbol,
                 cplx scale) {
    // piece = scale · [σ or σ̄ or 1](t) · u(±t) · (v or v̄)(±t)
    Piece p;
    p.phase = phase;
    if (u.has_rational() && v.has_rational() && (!symbol || symbol->has_rational())) {
        RationalFn ru = reflect_u ? u.rat->reflected() : *u.rat;
        RationalFn rv = conj_v ? v.rat->conj_params() : *v.rat;
        if (reflect_v) rv = rv.reflected();
        RationalFn r = ru * rv * scale;
        if (symbol) {
            RationalFn rs = conj_symbol ? symbol->rat->conj_params() : *symbol->rat;
            r = r * rs;
        }
        p.rat = std::move(r);
    }
    BoundaryFn uu = u, vv = v, ss = symbol ? *symbol : BoundaryFn::constant(1.0);
    bool has_sym = symbol != nullptr;
    p.handle = [uu, vv, ss, reflect_u, reflect_v, conj_v, conj_symbol, has_sym,
                scale](double t) -> cplx {
        cplx a = uu(cplx(reflect_u ? -t : t, 0.0));
        cplx b = vv(cplx(reflect_v ? -t : t, 0.0));
        if (conj_v) b = std::conj(b);
        cplx s = 1.0;
        if (has_sym) {
            s = ss(cplx(t, 0.0));
            if (conj_symbol) s = std::conj(s);
        }
        return scale * s * a * b;
    };
    return p;
}

} // namespace

void FMVector::attach_mass_values(const FMData& d) {
    mass_values.resize(d.masses.size());
    for (size_t k = 0; k < d.masses.size(); ++k) mass_values[k] = eval(d.masses[k].lambda);
}

cplx fm_inner(const FMVector& f, const FMVector& g, const FMData& d) {
    BoundaryIntegrator integ(*d.profile);
    const double quarter = 1.0 / (4.0 * PI);
    bool sigma_zero = d.sigma_is_zero();
    for (const auto& pf : f.parts) {
        for (const auto& pg : g.parts) {
            double ai = pf.phase, bj = pg.phase;
            // f(λ) conj(g(λ))
            integ.add(make_piece(ai - bj, pf.fn, pg.fn, false, false, true, nullptr, false,
                                 quarter));
            // f(−λ) conj(g(−λ))
            integ.add(make_piece(bj - ai, pf.fn, pg.fn, true, true, true, nullptr, false,
                                 quarter));
            if (!sigma_zero) {
                // −conj(σ e^{2ixλ}) f(−λ) conj(g(λ))
                integ.add(make_piece(-2.0 * d.x - ai - bj, pf.fn, pg.fn, true, false, true,
                                     &d.sigma, true, -quarter));
                // −σ e^{2ixλ} f(λ) conj(g(−λ))
                integ.add(make_piece(2.0 * d.x + ai + bj, pf.fn, pg.fn, false, true, true,
                                     &d.sigma, false, -quarter));
            }
        }
    }
    cplx total = integ.integrate();
    size_t nm = std::min({d.masses.size(), f.mass_values.size(), g.mass_values.size()});
    for (size_t k = 0; k < nm; ++k)
        total += d.masses[k].weight * f.mass_values[k] * std::conj(g.mass_values[k]);
    return total;
}

double fm_norm(const FMVector& f, const FMData& d) {
    cplx n = fm_inner(f, f, d);
    if (!std::isfinite(n.real()))
        throw NumericalError("fm_norm: non-finite result");
    return n.real();
}

cplx fm_inner_grid(const GridFunction& f, const GridFunction& g, const FMData& d) {
    const RealGrid& grid = d.profile->base_grid();
    const size_t n = grid.size();
    if (f.on_grid.size() != n || g.on_grid.size() != n)
        throw std::invalid_argument("fm_inner_grid: sample count mismatch");
    cplx acc = 0.0;
    for (size_t i = 0; i < n; ++i) {
        double t = grid.nodes[i];
        cplx sym = d.sigma(cplx(t, 0.0)) * std::exp(cplx(0.0, 2.0 * d.x * t));
        cplx fr = f.on_grid[n - 1 - i], gr = g.on_grid[n - 1 - i];
        acc += grid.weights[i] * (f.on_grid[i] * std::conj(g.on_grid[i]) +
                                  fr * std::conj(gr) -
                                  std::conj(sym) * fr * std::conj(g.on_grid[i]) -
                                  sym * f.on_grid[i] * std::conj(gr));
    }
    acc /= 4.0 * PI;
    size_t nm = std::min({d.masses.size(), f.on_masses.size(), g.on_masses.size()});
    for (size_t k = 0; k < nm; ++k)
        acc += d.masses[k].weight * f.on_masses[k] * std::conj(g.on_masses[k]);
    return acc;
}

double fm_norm_grid(const GridFunction& f, const FMData& d) {
    return fm_inner_grid(f, f, d).real();
}

RationalFn RationalBasis::tm_element(int n) {
    RationalFn r(I_unit * std::sqrt(2.0));
    RationalFn num = RationalFn::linear(I_unit);   // (λ − i)
    cplx pole(0.0, -1.0);
    for (int j = 0; j < n; ++j) r = r * num;
    for (int j = 0; j < n + 1; ++j) r = r * RationalFn::simple_pole(pole);
    return r;
}

RationalBasis RationalBasis::h2(int order) {
    RationalBasis b;
    b.flavor = Flavor::H2;
    for (int n = 0; n < order; ++n)
        b.elems.push_back({0.0, BoundaryFn::from_rational(tm_element(n))});
    return b;
}

RationalBasis RationalBasis::h2_prefixed(int order, const BlaschkeProduct& B, size_t from) {
    RationalBasis b;
    b.flavor = Flavor::H2;
    RationalFn pre;
    for (size_t k = from; k < B.size(); ++k)
        pre = pre * RationalFn::blaschke(B.zeros()[k], BlaschkeProduct::factor_sign(B.zeros()[k]));
    for (int n = 0; n < order; ++n)
        b.elems.push_back({0.0, BoundaryFn::from_rational(pre * tm_element(n))});
    return b;
}

RationalBasis RationalBasis::hat(int order, const FMData& d) {
    RationalBasis b;
    b.flavor = Flavor::H2Hat;
    if (std::abs(d.x) < 1e-12) {
        if (!d.derived) throw std::invalid_argument("hat basis needs derived data");
        const BoundaryFn& inv = d.derived->s_e_inv;
        for (int n = 0; n < order; ++n) {
            RationalFn en = tm_element(n);
            if (inv.has_rational()) {
                b.elems.push_back({0.0, BoundaryFn::from_rational(en * (*inv.rat))});
            } else {
                BoundaryFn fn = BoundaryFn::from_handle(
                    [en, inv](cplx z) { return en.eval(z) * inv(z); });
                b.elems.push_back({0.0, std::move(fn)});
            }
        }
        return b;
    }
    for (int n = 0; n < order; ++n)
        b.elems.push_back({0.0, BoundaryFn::from_rational(tm_element(n))});
    if (d.x > 0.0)
        for (int n = 0; n < order; ++n)
            b.elems.push_back({2.0 * d.x, BoundaryFn::from_rational(tm_element(n))});
    return b;
}

namespace {

FMVector basis_vector(const RationalBasis& basis, size_t n, const FMData& d) {
    FMVector v;
    v.parts.push_back(basis.elems[n]);
    v.attach_mass_values(d);
    return v;
}

double cond_from_ldlt(const Eigen::LDLT<Eigen::MatrixXcd>& ldlt) {
    auto D = ldlt.vectorD();
    double mx = 0.0, mn = std::numeric_limits<double>::infinity();
    for (Eigen::Index i = 0; i < D.size(); ++i) {
        double a = std::abs(D(i));
        mx = std::max(mx, a);
        mn = std::min(mn, a);
    }
    return (mn > 0.0) ? mx / mn : std::numeric_limits<double>::infinity();
}

} // namespace

GramSystem gram_assemble(const RationalBasis& basis, const FMData& d) {
    const size_t N = basis.size();
    GramSystem gs;
    gs.G.resize(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    std::vector<FMVector> vecs;
    vecs.reserve(N);
    for (size_t n = 0; n < N; ++n) vecs.push_back(basis_vector(basis, n, d));
    for (size_t m = 0; m < N; ++m)
        for (size_t n = m; n < N; ++n) {
            cplx val = fm_inner(vecs[n], vecs[m], d); // G(m,n) = <e_n, e_m>
            gs.G(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = val;
            gs.G(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = std::conj(val);
        }
    // enforce exact Hermitian symmetry before factoring
    gs.G = 0.5 * (gs.G + gs.G.adjoint()).eval();
    gs.solver.compute(gs.G);
    gs.cond_estimate = cond_from_ldlt(gs.solver);
    if (gs.solver.info() != Eigen::Success || !std::isfinite(gs.cond_estimate) ||
        gs.cond_estimate > 1e15) {
        gs.ridge = 1e-12 * gs.G.norm();
        Eigen::MatrixXcd Gr =
            gs.G + gs.ridge * Eigen::MatrixXcd::Identity(gs.G.rows(), gs.G.cols());
        gs.solver.compute(Gr);
        gs.cond_estimate = cond_from_ldlt(gs.solver);
    }
    return gs;
}

cplx KernelField::eval(cplx lambda) const {
    cplx acc = 0.0;
    for (size_t n = 0; n < basis.size(); ++n)
        acc += coeff(static_cast<Eigen::Index>(n)) * basis.eval(n, lambda);
    return acc;
}

cplx KernelField::mass_value(size_t k) const { return eval(data.masses[k].lambda); }

double KernelField::diag() const {
    cplx v = eval(mu);
    return v.real();
}

cplx KernelField::translated_eval(cplx lambda) const {
    return std::exp(I_unit * data.x * (lambda - std::conj(mu))) * eval(lambda);
}

double KernelField::translated_diag() const {
    return std::exp(-2.0 * data.x * mu.imag()) * diag();
}

FMVector KernelField::to_vector() const {
    FMVector v;
    for (size_t n = 0; n < basis.size(); ++n) {
        cplx c = coeff(static_cast<Eigen::Index>(n));
        v.parts.push_back({basis.elems[n].phase, scale_fn(basis.elems[n].fn, c)});
    }
    v.attach_mass_values(data);
    return v;
}

KernelField kernel_compute(Flavor flavor, const FMData& d, cplx mu, int order) {
    if (mu.imag() <= 0.0)
        throw std::invalid_argument("kernel_compute: Im mu must be positive");
    RationalBasis basis =
        (flavor == Flavor::H2) ? RationalBasis::h2(order) : RationalBasis::hat(order, d);
    GramSystem gs = gram_assemble(basis, d);

    Eigen::VectorXcd v(static_cast<Eigen::Index>(basis.size()));
    for (size_t m = 0; m < basis.size(); ++m)
        v(static_cast<Eigen::Index>(m)) = std::conj(basis.eval(m, mu));

    KernelField k;
    k.flavor = flavor;
    k.basis = basis;
    k.data = d;
    k.mu = mu;
    k.gram_cond = gs.cond_estimate;

    if (gs.cond_estimate < 1e13) {
        k.coeff = gs.solver.solve(v);
        k.ridge_used = gs.ridge;
    } else {
        // regularized solve with a decreasing schedule; stop once the diagonal settles
        double prev = std::numeric_limits<double>::infinity();
        for (double eps : d.profile->ridge_schedule) {
            Eigen::MatrixXcd Gr =
                gs.G + eps * Eigen::MatrixXcd::Identity(gs.G.rows(), gs.G.cols());
            k.coeff = Gr.ldlt().solve(v);
            double diag = (v.adjoint() * k.coeff).real()(0, 0);
            k.ridge_used = eps;
            if (std::abs(diag - prev) < 1e-6 * std::abs(diag)) break;
            prev = diag;
        }
    }
    return k;
}

KernelField kernel_hankel(const FMData& d, cplx mu, int order) {
    if (mu.imag() <= 0.0)
        throw std::invalid_argument("kernel_hankel: Im mu must be positive");
    RationalBasis basis = RationalBasis::h2(order);

    // boundary part of the form on an independent quadrature profile
    GridProfile alt = *d.profile;
    alt.panels = d.profile->panels + 7;
    alt.points_per_panel = d.profile->points_per_panel + 3;
    alt.cutoff = d.profile->cutoff * 0.7;
    alt.osc_half_width = d.profile->osc_half_width * 1.15;
    FMData db = d;
    db.profile = &alt;
    db.masses.clear(); // masses enter through the low-rank update below

    const size_t N = basis.size();
    Eigen::MatrixXcd Mb(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(N));
    std::vector<FMVector> vecs;
    for (size_t n = 0; n < N; ++n) {
        FMVector v;
        v.parts.push_back(basis.elems[n]);
        vecs.push_back(std::move(v));
    }
    for (size_t m = 0; m < N; ++m)
        for (size_t n = m; n < N; ++n) {
            cplx val = fm_inner(vecs[n], vecs[m], db);
            Mb(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n)) = val;
            Mb(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(m)) = std::conj(val);
        }
    Mb = 0.5 * (Mb + Mb.adjoint()).eval();

    const size_t K = d.masses.size();
    Eigen::MatrixXcd A(static_cast<Eigen::Index>(N), static_cast<Eigen::Index>(K));
    Eigen::VectorXd W(static_cast<Eigen::Index>(K));
    for (size_t k = 0; k < K; ++k) {
        W(static_cast<Eigen::Index>(k)) = d.masses[k].weight;
        for (size_t m = 0; m < N; ++m)
            A(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(k)) =
                std::conj(basis.eval(m, d.masses[k].lambda));
    }

    Eigen::VectorXcd v(static_cast<Eigen::Index>(N));
    for (size_t m = 0; m < N; ++m)
        v(static_cast<Eigen::Index>(m)) = std::conj(basis.eval(m, mu));

    KernelField k;
    k.flavor = Flavor::H2;
    k.basis = basis;
    k.data = d;
    k.mu = mu;

    double prev = std::numeric_limits<double>::infinity();
    for (double eps : d.profile->ridge_schedule) {
        Eigen::MatrixXcd T0 =
            Mb + eps * Eigen::MatrixXcd::Identity(Mb.rows(), Mb.cols());
        Eigen::LDLT<Eigen::MatrixXcd> f0(T0);
        Eigen::VectorXcd c = f0.solve(v);
        if (K > 0) {
            // Woodbury update for the point-mass rank-K term
            Eigen::MatrixXcd T0A = f0.solve(A);
            Eigen::MatrixXcd S = W.cwiseInverse().asDiagonal();
            Eigen::MatrixXcd core = S + A.adjoint() * T0A;
            c -= T0A * core.ldlt().solve(A.adjoint() * c);
        }
        k.coeff = c;
        k.ridge_used = eps;
        double diag = 0.0;
        for (size_t n = 0; n < N; ++n)
            diag += (std::conj(v(static_cast<Eigen::Index>(n))) * c(static_cast<Eigen::Index>(n)))
                        .real();
        if (std::abs(diag - prev) < 1e-6 * std::abs(diag)) break;
        prev = diag;
    }
    k.gram_cond = cond_from_ldlt(Eigen::LDLT<Eigen::MatrixXcd>(Mb));
    return k;
}

KernelIdentityReport kernel_identity_check(const DerivedData& d, cplx lambda0, int order) {
    if (std::abs(lambda0.real()) < 1e-12)
        throw std::invalid_argument("kernel_identity_check: Re lambda0 must be nonzero");
    KernelIdentityReport rep;
    cplx ml0 = -std::conj(lambda0);

    FMData plus = make_view(d, Side::Plus, 0.0);
    KernelField k = kernel_compute(Flavor::H2, plus, lambda0, order);

    FMData minus_mod = divide_by_blaschke_pair(make_view(d, Side::Minus, 0.0), lambda0);
    KernelField khat = kernel_compute(Flavor::H2Hat, minus_mod, ml0, order);

    double two_im = 2.0 * lambda0.imag();
    cplx s_prod = d.s(ml0) * d.s(lambda0);
    rep.lhs = k.diag() * khat.diag();
    rep.rhs = (1.0 / (s_prod * sq(two_im))).real();
    rep.relative_residual = std::abs(rep.lhs - rep.rhs) / std::abs(rep.rhs);
    rep.ridge_used = std::max(k.ridge_used, khat.ridge_used);

    // pointwise identity: (k(·,λ₀))⁻ = C · b_{−λ̄₀}⁻¹ · k̂_mod(·, −λ̄₀) on the grid
    const RealGrid& g = d.profile.base_grid();
    GridFunction kf;
    kf.on_grid.resize(g.size());
    for (size_t i = 0; i < g.size(); ++i) kf.on_grid[i] = k.eval(cplx(g.nodes[i], 0.0));
    kf.on_masses.resize(d.data.masses.size());
    for (size_t j = 0; j < kf.on_masses.size(); ++j) kf.on_masses[j] = k.mass_value(j);
    GridFunction km = duality_map(kf, d, Side::Plus);

    cplx C = 1.0 / (d.s(ml0) * two_im * khat.diag());
    double num = 0.0, den = 0.0;
    for (size_t i = 0; i < g.size(); ++i) {
        double t = g.nodes[i];
        if (std::abs(t) > 12.0) continue; // compare where the kernels carry mass
        cplx rhs_val = C / blaschke_factor(t, ml0) * khat.eval(cplx(t, 0.0));
        num = std::max(num, std::abs(km.on_grid[i] - rhs_val));
        den = std::max(den, std::abs(rhs_val));
    }
    rep.vector_residual = num / std::max(den, 1e-300);
    return rep;
}

FlavorOrderReport lemma3_check(const DerivedData& d, cplx lambda0, int order) {
    FlavorOrderReport rep;
    FMData plus = make_view(d, Side::Plus, 0.0);
    rep.K_h2 = std::sqrt(std::max(kernel_compute(Flavor::H2, plus, lambda0, order).diag(), 0.0));
    rep.K_hat =
        std::sqrt(std::max(kernel_compute(Flavor::H2Hat, plus, lambda0, order).diag(), 0.0));
    rep.equality_gap = std::abs(rep.K_h2 - rep.K_hat);
    rep.ordering_ok = rep.K_h2 <= rep.K_hat + 1e-8;

    // dropping masses enlarges the space, so the diagonal can only grow
    for (size_t keep = d.data.masses.size() + 1; keep-- > 0;) {
        ScatteringData trunc = d.data;
        trunc.masses.resize(std::min(keep, d.data.masses.size()));
        DerivedData dt = derive(trunc, d.profile);
        FMData view = make_view(dt, Side::Plus, 0.0);
        double K = std::sqrt(std::max(kernel_compute(Flavor::H2, view, lambda0, order).diag(), 0.0));
        if (!rep.truncation_diagonals.empty() &&
            K + 1e-8 < rep.truncation_diagonals.back())
            rep.ordering_ok = false;
        rep.truncation_diagonals.push_back(K);
    }
    return rep;
}

} // namespace sk
