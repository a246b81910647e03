#include "ergm/spectral.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <vector>

#include "ergm/rng.hpp"

namespace ergm {

namespace {

using Vec = std::vector<double>;

double dot(const Vec& a, const Vec& b) { return std::inner_product(a.begin(), a.end(), b.begin(), 0.0); }

void normalise(Vec& v) {
    const double norm = std::sqrt(dot(v, v));
    if (norm > 0) for (double& x : v) x /= norm;
}

void project_out(Vec& v, const std::vector<Vec>& basis) {
    for (const auto& b : basis) {
        const double c = dot(v, b);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] -= c * b[i];
    }
}

// y = (sign * A + shift * I) x, walking the adjacency bit rows.
void apply(const GraphState& g, double sign, double shift, const Vec& x, Vec& y) {
    const std::size_t n = g.n();
    for (std::size_t a = 0; a < n; ++a) {
        double s = 0.0;
        auto row = g.row(a);
        for (std::size_t w = 0; w < row.size(); ++w) {
            auto bits = row[w];
            while (bits) {
                s += x[w * GraphState::kWordBits + static_cast<std::size_t>(std::countr_zero(bits))];
                bits &= bits - 1;
            }
        }
        y[a] = sign * s + shift * x[a];
    }
}

struct PowerResult {
    double value;
    Vec vector;
    std::size_t iterations;
    bool converged;
};

PowerResult dominant(const GraphState& g, double sign, double shift, const std::vector<Vec>& deflate,
                     const SpectralOptions& opts, Rng& rng) {
    const std::size_t n = g.n();
    Vec v(n), w(n);
    for (double& x : v) x = rng.uniform() - 0.5;
    project_out(v, deflate);
    normalise(v);
    double mu = 0.0;
    for (std::size_t it = 1; it <= opts.max_iterations; ++it) {
        apply(g, sign, shift, v, w);
        project_out(w, deflate);
        mu = dot(v, w);
        // Stop on the eigen-residual |Av - mu v|; the Rayleigh quotient alone
        // stalls early when the next eigenvalue is close.
        double res = 0.0;
        for (std::size_t i = 0; i < n; ++i) res += (w[i] - mu * v[i]) * (w[i] - mu * v[i]);
        normalise(w);
        std::swap(v, w);
        if (std::sqrt(res) <= opts.tol * std::max(std::abs(mu), 1.0)) return {mu, v, it, true};
    }
    return {mu, v, opts.max_iterations, false};
}

}  // namespace

SpectralEstimate adjacency_spectrum(const GraphState& x, const SpectralOptions& opts) {
    SpectralEstimate out;
    const std::size_t n = x.n();
    if (n < 2 || x.edge_count() == 0) return out;
    double shift = 0.0;
    for (std::size_t a = 0; a < n; ++a) shift = std::max(shift, static_cast<double>(x.degree_raw(a)));

    Rng rng(opts.seed);
    const std::size_t top_count = std::min<std::size_t>(2, n);
    const std::size_t bottom_count = std::min<std::size_t>(2, n - top_count);

    std::vector<double> tops, bottoms;
    std::vector<Vec> basis;
    for (std::size_t k = 0; k < top_count; ++k) {
        auto r = dominant(x, 1.0, shift, basis, opts, rng);
        tops.push_back(r.value - shift);
        basis.push_back(std::move(r.vector));
        out.iterations += r.iterations;
        out.converged &= r.converged;
    }
    basis.clear();
    for (std::size_t k = 0; k < bottom_count; ++k) {
        auto r = dominant(x, -1.0, shift, basis, opts, rng);
        bottoms.push_back(shift - r.value);
        basis.push_back(std::move(r.vector));
        out.iterations += r.iterations;
        out.converged &= r.converged;
    }

    out.largest = tops[0];
    out.second_largest = tops.size() > 1 ? tops[1] : tops[0];
    out.smallest = bottoms.empty() ? out.second_largest : bottoms[0];
    out.second_smallest = bottoms.size() > 1 ? bottoms[1] : out.smallest;

    std::vector<double> candidates = tops;
    candidates.insert(candidates.end(), bottoms.begin(), bottoms.end());
    std::stable_sort(candidates.begin(), candidates.end(),
                     [](double a, double b) { return std::abs(a) > std::abs(b); });
    out.lambda1 = candidates[0];
    out.lambda2 = candidates.size() > 1 ? candidates[1] : 0.0;
    return out;
}

}  // namespace ergm
