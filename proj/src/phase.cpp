#include "ergm/phase.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ergm {

namespace {

void check_unit(double p) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("p must lie in [0, 1], got " + std::to_string(p));
}

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

double gap(const ModelSpec& m, double p) { return phi(m, p) - p; }

Stability stability_of(double derivative, double margin) {
    if (std::abs(derivative - 1.0) <= margin) return Stability::Marginal;
    return derivative < 1.0 ? Stability::Attracting : Stability::Repelling;
}

}  // namespace

double psi(const ModelSpec& m, double p) {
    check_unit(p);
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto e = static_cast<double>(m.patterns()[i].edge_count());
        s += 2.0 * m.betas()[i] * e * std::pow(p, e - 1.0);
    }
    return s;
}

double psi_prime(const ModelSpec& m, double p) {
    check_unit(p);
    double s = 0.0;
    for (std::size_t i = 0; i < m.size(); ++i) {
        const auto e = static_cast<double>(m.patterns()[i].edge_count());
        if (e < 2.0) continue;
        s += 2.0 * m.betas()[i] * e * (e - 1.0) * std::pow(p, e - 2.0);
    }
    return s;
}

double phi(const ModelSpec& m, double p) { return sigmoid(psi(m, p)); }

double phi_prime(const ModelSpec& m, double p) {
    const double f = phi(m, p);
    return psi_prime(m, p) * f * (1.0 - f);
}

std::string to_string(Stability s) {
    switch (s) {
        case Stability::Attracting: return "attracting";
        case Stability::Repelling: return "repelling";
        case Stability::Marginal: return "marginal";
    }
    return "?";
}

std::string to_string(Phase p) {
    switch (p) {
        case Phase::HighTemperature: return "HighTemperature";
        case Phase::LowTemperature: return "LowTemperature";
        case Phase::Critical: return "Critical";
    }
    return "?";
}

FixedPointSet find_fixed_points(const ModelSpec& m, const FixedPointOptions& opts) {
    if (!(opts.tol > 0.0)) throw std::invalid_argument("find_fixed_points: tol must be positive");
    if (opts.grid_points < 2) throw std::invalid_argument("find_fixed_points: grid needs at least two points");
    const std::size_t n = opts.grid_points;
    std::vector<double> p(n + 1), f(n + 1);
    for (std::size_t k = 0; k <= n; ++k) {
        p[k] = static_cast<double>(k) / static_cast<double>(n);
        f[k] = gap(m, p[k]);
    }

    std::vector<double> roots;
    for (std::size_t k = 0; k <= n; ++k) {
        if (f[k] == 0.0) {
            roots.push_back(p[k]);
            continue;
        }
        if (k == n || f[k + 1] == 0.0 || (f[k] > 0.0) == (f[k + 1] > 0.0)) continue;
        double lo = p[k], hi = p[k + 1];
        const bool lo_positive = f[k] > 0.0;
        for (int it = 0; it < 200 && hi - lo > 0.0; ++it) {
            const double mid = 0.5 * (lo + hi);
            if (mid <= lo || mid >= hi) break;
            const double fm = gap(m, mid);
            if (fm == 0.0) {
                lo = hi = mid;
                break;
            }
            ((fm > 0.0) == lo_positive ? lo : hi) = mid;
        }
        roots.push_back(std::abs(gap(m, lo)) <= std::abs(gap(m, hi)) ? lo : hi);
    }

    // Tangential roots: phi - p touches zero without changing sign, so the
    // scan above misses them. Look for interior local minima of |phi - p|
    // flanked by same-sign values and refine by golden-section search.
    const double touch = std::sqrt(opts.tol);
    for (std::size_t k = 1; k < n; ++k) {
        const double a = std::abs(f[k - 1]), b = std::abs(f[k]), c = std::abs(f[k + 1]);
        if (!(b <= a && b <= c) || f[k] == 0.0) continue;
        if ((f[k - 1] > 0.0) != (f[k] > 0.0) || (f[k + 1] > 0.0) != (f[k] > 0.0)) continue;
        double lo = p[k - 1], hi = p[k + 1];
        const double ratio = 0.5 * (std::sqrt(5.0) - 1.0);
        for (int it = 0; it < 200 && hi - lo > 1e-15; ++it) {
            const double x1 = hi - ratio * (hi - lo), x2 = lo + ratio * (hi - lo);
            if (std::abs(gap(m, x1)) < std::abs(gap(m, x2))) hi = x2;
            else lo = x1;
        }
        const double x = 0.5 * (lo + hi);
        if (std::abs(gap(m, x)) <= touch) roots.push_back(x);
    }

    std::sort(roots.begin(), roots.end());
    roots.erase(std::unique(roots.begin(), roots.end(),
                            [&](double x, double y) { return std::abs(x - y) <= opts.tol; }),
                roots.end());

    FixedPointSet out;
    for (std::size_t i = 0; i < roots.size(); ++i) {
        const double d = phi_prime(m, roots[i]);
        out.points.push_back({roots[i], d, stability_of(d, opts.critical_margin)});
        if (i > 0 && roots[i] - roots[i - 1] < 10.0 * opts.tol) out.resolution_warning = true;
    }
    // A tangential root is a double root; the sign of phi - p does not change
    // across it, so it is marginal regardless of the derivative band.
    for (auto& fp : out.points) {
        const double h = 1e-7;
        if (fp.p_star - h <= 0.0 || fp.p_star + h >= 1.0) continue;
        const double left = gap(m, fp.p_star - h), right = gap(m, fp.p_star + h);
        if (left != 0.0 && right != 0.0 && (left > 0.0) == (right > 0.0)) fp.stability = Stability::Marginal;
    }
    return out;
}

double PhaseReport::p_bar_above(double p_star) const {
    for (const auto& fp : fixed_points)
        if (fp.p_star > p_star) return fp.p_star;
    return 1.0;
}

std::vector<FixedPoint> PhaseReport::attracting() const {
    std::vector<FixedPoint> out;
    for (const auto& fp : fixed_points)
        if (fp.stability == Stability::Attracting) out.push_back(fp);
    return out;
}

PhaseReport classify(const ModelSpec& m, const FixedPointOptions& opts) {
    auto set = find_fixed_points(m, opts);
    PhaseReport r;
    r.fixed_points = std::move(set.points);
    r.resolution_warning = set.resolution_warning;
    const auto attracting = r.attracting();
    const bool any_marginal = std::any_of(r.fixed_points.begin(), r.fixed_points.end(),
                                          [](const FixedPoint& fp) { return fp.stability == Stability::Marginal; });
    if (any_marginal) r.classification = Phase::Critical;
    else if (r.fixed_points.size() == 1 && attracting.size() == 1) r.classification = Phase::HighTemperature;
    else if (attracting.size() >= 2) r.classification = Phase::LowTemperature;
    else r.classification = Phase::Critical;
    if (!attracting.empty()) r.p_bar = r.p_bar_above(attracting.front().p_star);
    return r;
}

}  // namespace ergm
