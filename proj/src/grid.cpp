#include "scatterkern/grid.hpp"

#include <cmath>
#include <cstring>

namespace sk {

void gauss_legendre(int n, std::vector<double>& x, std::vector<double>& w) {
    // Newton on Legendre polynomials, standard Golub–Welsch-free variant
    x.resize(static_cast<size_t>(n));
    w.resize(static_cast<size_t>(n));
    const int m = (n + 1) / 2;
    for (int i = 0; i < m; ++i) {
        double z = std::cos(PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int it = 0; it < 100; ++it) {
            double p1 = 1.0, p2 = 0.0;
            for (int j = 0; j < n; ++j) {
                double p3 = p2;
                p2 = p1;
                p1 = ((2.0 * j + 1.0) * z * p2 - j * p3) / (j + 1.0);
            }
            pp = n * (z * p1 - p2) / (z * z - 1.0);
            double z1 = z;
            z = z1 - p1 / pp;
            if (std::abs(z - z1) < 1e-15) break;
        }
        x[static_cast<size_t>(i)] = -z;
        x[static_cast<size_t>(n - 1 - i)] = z;
        w[static_cast<size_t>(i)] = 2.0 / ((1.0 - z * z) * pp * pp);
        w[static_cast<size_t>(n - 1 - i)] = w[static_cast<size_t>(i)];
    }
}

void RealGrid::check_invariants() const {
    for (size_t i = 0; i + 1 < nodes.size(); ++i)
        if (!(nodes[i] < nodes[i + 1])) throw NumericalError("RealGrid: nodes not increasing");
    for (double w : weights)
        if (!(w > 0.0)) throw NumericalError("RealGrid: nonpositive weight");
    size_t n = nodes.size();
    for (size_t i = 0; i < n; ++i)
        if (std::abs(nodes[i] + nodes[n - 1 - i]) > 1e-12 * (1.0 + std::abs(nodes[i])))
            throw NumericalError("RealGrid: node set not symmetric under negation");
}

namespace {

void append_panel(RealGrid& g, double a, double b, const std::vector<double>& gx,
                  const std::vector<double>& gw, bool tan_map) {
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    for (size_t k = 0; k < gx.size(); ++k) {
        double t = mid + half * gx[k];
        double w = half * gw[k];
        if (tan_map) {
            double c = std::cos(t);
            g.nodes.push_back(std::tan(t));
            g.weights.push_back(w / (c * c));
        } else {
            g.nodes.push_back(t);
            g.weights.push_back(w);
        }
    }
}

} // namespace

RealGrid make_tan_grid(int panels_per_side, int points_per_panel, double cutoff,
                       int graded_panels, double grading) {
    if (graded_panels < 10) graded_panels = 10;
    std::vector<double> gx, gw;
    gauss_legendre(points_per_panel, gx, gw);
    // The map runs all the way to π/2 so no measure is dropped; `cutoff` only
    // caps where the uniform block ends, geometric panels take over after it.
    const double theta_max = 0.5 * PI;
    const double theta_split = std::min(std::atan(cutoff > 0 ? std::min(cutoff, 50.0) : 50.0),
                                        theta_max * 0.995);

    std::vector<double> edges;
    for (int i = 0; i <= panels_per_side; ++i)
        edges.push_back(theta_split * i / panels_per_side);
    double rest = theta_max - theta_split;
    double len = rest * (1.0 - grading);
    double pos = theta_split;
    for (int i = 0; i < graded_panels - 1; ++i) {
        pos += len;
        edges.push_back(pos);
        len *= grading;
    }
    edges.push_back(theta_max);

    RealGrid g;
    g.cutoff = cutoff;
    for (size_t i = 0; i + 1 < edges.size(); ++i)
        append_panel(g, edges[i], edges[i + 1], gx, gw, true);
    g.cutoff = g.nodes.back();
    // mirror
    size_t half = g.nodes.size();
    RealGrid full;
    full.cutoff = g.cutoff;
    for (size_t i = half; i-- > 0;) {
        full.nodes.push_back(-g.nodes[i]);
        full.weights.push_back(g.weights[i]);
    }
    for (size_t i = 0; i < half; ++i) {
        full.nodes.push_back(g.nodes[i]);
        full.weights.push_back(g.weights[i]);
    }
    full.check_invariants();
    return full;
}

RealGrid make_osc_grid(double max_freq, double half_width, int points_per_panel) {
    std::vector<double> gx, gw;
    gauss_legendre(points_per_panel, gx, gw);
    double panel = std::min(0.5, 0.9 * PI / (std::abs(max_freq) + 1e-12));
    int n_panels = static_cast<int>(std::ceil(half_width / panel));
    panel = half_width / n_panels;

    RealGrid g;
    g.cutoff = half_width;
    for (int i = 0; i < n_panels; ++i)
        append_panel(g, i * panel, (i + 1) * panel, gx, gw, false);
    // roll-off window on the outer half
    double w0 = 0.5 * half_width;
    for (size_t k = 0; k < g.nodes.size(); ++k) {
        double ax = std::abs(g.nodes[k]);
        if (ax > w0) {
            double s = (ax - w0) / (half_width - w0);
            double c = std::cos(0.5 * PI * s);
            g.weights[k] *= c * c;
        }
    }
    RealGrid full;
    full.cutoff = half_width;
    for (size_t i = g.nodes.size(); i-- > 0;) {
        if (g.nodes[i] <= 1e-14) continue; // drop the λ=0 edge duplicate if any
        full.nodes.push_back(-g.nodes[i]);
        full.weights.push_back(g.weights[i]);
    }
    for (size_t i = 0; i < g.nodes.size(); ++i) {
        if (g.nodes[i] <= 1e-14) continue;
        full.nodes.push_back(g.nodes[i]);
        full.weights.push_back(g.weights[i]);
    }
    full.check_invariants();
    return full;
}

const RealGrid& GridProfile::base_grid() const {
    if (!base_) base_ = std::make_shared<RealGrid>(make_tan_grid(panels, points_per_panel, cutoff));
    return *base_;
}

const RealGrid& GridProfile::osc_grid(double freq) const {
    long bucket = static_cast<long>(std::ceil(std::abs(freq) * 4.0));
    auto it = osc_cache_.find(bucket);
    if (it == osc_cache_.end()) {
        auto g = std::make_shared<RealGrid>(
            make_osc_grid(bucket / 4.0 + 0.25, osc_half_width, osc_points_per_panel));
        it = osc_cache_.emplace(bucket, std::move(g)).first;
    }
    return *it->second;
}

uint64_t GridProfile::hash() const {
    auto mix = [](uint64_t h, uint64_t v) {
        h ^= v + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    };
    auto dbl = [](double x) {
        uint64_t u;
        std::memcpy(&u, &x, sizeof(u));
        return u;
    };
    uint64_t h = 0;
    h = mix(h, dbl(cutoff));
    h = mix(h, static_cast<uint64_t>(panels));
    h = mix(h, static_cast<uint64_t>(points_per_panel));
    h = mix(h, static_cast<uint64_t>(basis_order));
    h = mix(h, dbl(osc_half_width));
    h = mix(h, static_cast<uint64_t>(osc_points_per_panel));
    for (double r : ridge_schedule) h = mix(h, dbl(r));
    h = mix(h, dbl(tol.solver));
    h = mix(h, dbl(tol.identity));
    h = mix(h, dbl(tol.asym));
    return h;
}

GridProfile GridProfile::named(const std::string& name) {
    GridProfile p;
    if (name == "fast") {
        p.panels = 18;
        p.points_per_panel = 10;
        p.basis_order = 12;
        p.osc_half_width = 60.0;
    } else if (name == "hires") {
        p.panels = 44;
        p.points_per_panel = 14;
        p.basis_order = 28;
        p.osc_half_width = 160.0;
    } else if (name != "default" && !name.empty()) {
        throw std::invalid_argument("GridProfile: unknown profile '" + name + "'");
    }
    if (!(p.tol.solver < p.tol.identity && p.tol.identity < p.tol.asym))
        throw std::logic_error("GridProfile: tolerance ordering violated");
    return p;
}

} // namespace sk
