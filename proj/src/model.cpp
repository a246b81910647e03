#include "ergm/model.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include "ergm/csv.hpp"
#include "ergm/subgraph_counts.hpp"

namespace ergm {

ModelSpec::ModelSpec(std::vector<SubgraphPattern> patterns, std::vector<double> betas, bool allow_nonferromagnetic)
    : patterns_(std::move(patterns)), betas_(std::move(betas)), allow_nonferro_(allow_nonferromagnetic) {
    if (patterns_.empty()) throw std::invalid_argument("model needs at least the edge pattern");
    if (patterns_.size() != betas_.size()) {
        throw std::invalid_argument("model has " + std::to_string(patterns_.size()) + " patterns but " +
                                    std::to_string(betas_.size()) + " betas");
    }
    if (!patterns_.front().is_edge_pattern()) {
        throw std::invalid_argument("the first model pattern must be the edge graph, got '" +
                                    patterns_.front().name() + "'");
    }
    for (std::size_t i = 0; i < betas_.size(); ++i) {
        if (!std::isfinite(betas_[i])) throw std::invalid_argument("beta_" + std::to_string(i + 1) + " is not finite");
        if (i > 0 && betas_[i] <= 0.0 && !allow_nonferro_) {
            throw std::invalid_argument("beta_" + std::to_string(i + 1) +
                                        " must be positive (set allow_nonferromagnetic to override)");
        }
    }
}

ModelSpec ModelSpec::edges_only(double beta1) { return {{SubgraphPattern::edge()}, {beta1}}; }

ModelSpec ModelSpec::edge_triangle(double beta1, double beta2) {
    return {{SubgraphPattern::edge(), SubgraphPattern::triangle()}, {beta1, beta2}};
}

ModelSpec ModelSpec::edge_two_star(double beta1, double beta2) {
    return {{SubgraphPattern::edge(), SubgraphPattern::two_star()}, {beta1, beta2}};
}

bool ModelSpec::is_ferromagnetic() const noexcept {
    return std::all_of(betas_.begin() + 1, betas_.end(), [](double b) { return b >= 0.0; });
}

std::size_t ModelSpec::max_pattern_vertices() const noexcept {
    std::size_t m = 0;
    for (const auto& p : patterns_) m = std::max(m, p.vertex_count());
    return m;
}

ModelInstance::ModelInstance(ModelSpec spec, std::size_t n) : spec_(std::move(spec)), n_(n) {
    if (spec_.max_pattern_vertices() > n) {
        throw std::invalid_argument("model pattern with " + std::to_string(spec_.max_pattern_vertices()) +
                                    " vertices does not fit in n=" + std::to_string(n));
    }
    for (std::size_t i = 0; i < spec_.size(); ++i) {
        const auto& g = spec_.patterns()[i];
        scaled_beta_.push_back(spec_.betas()[i] /
                               std::pow(static_cast<double>(n), static_cast<double>(g.vertex_count() - 2)));
        kinds_.push_back(g.is_edge_pattern()  ? Kind::Edge
                         : g.is_two_star()    ? Kind::TwoStar
                         : g.is_triangle()    ? Kind::Triangle
                                              : Kind::Generic);
    }
}

double ModelInstance::hamiltonian(const GraphState& x) const {
    if (x.n() != n_) throw std::invalid_argument("hamiltonian: graph size does not match the model binding");
    double h = 0.0;
    for (std::size_t i = 0; i < kinds_.size(); ++i)
        h += scaled_beta_[i] * static_cast<double>(count_global(x, spec_.patterns()[i]));
    return h;
}

double ModelInstance::local_field(const GraphState& x, const EdgeId& e) const {
    if (x.n() != n_) throw std::invalid_argument("local_field: graph size does not match the model binding");
    return local_field_raw(x, e.first() - 1, e.second() - 1);
}

double ModelInstance::local_field_raw(const GraphState& x, std::size_t a, std::size_t b) const {
    double h = 0.0;
    for (std::size_t i = 0; i < kinds_.size(); ++i) {
        double c;
        switch (kinds_[i]) {
            case Kind::Edge:
                c = 2.0;
                break;
            case Kind::Triangle:
                c = 6.0 * static_cast<double>(x.common_neighbours_raw(a, b));
                break;
            case Kind::TwoStar: {
                const std::size_t bump = x.has_edge_raw(a, b) ? 0 : 1;
                c = 2.0 * static_cast<double>(x.degree_raw(a) + x.degree_raw(b) + 2 * bump - 2);
                break;
            }
            default:
                c = static_cast<double>(count_at_edge(x, spec_.patterns()[i], EdgeId::from_vertices(n_, a + 1, b + 1)));
        }
        h += scaled_beta_[i] * c;
    }
    return h;
}

ExactDistribution exact_distribution(const ModelSpec& spec, std::size_t n) {
    if (n > kMaxExactVertices) {
        throw std::invalid_argument("exact_distribution: n=" + std::to_string(n) + " exceeds the enumeration limit of " +
                                    std::to_string(kMaxExactVertices));
    }
    const ModelInstance model(spec, n);
    const std::size_t states = std::size_t{1} << pair_count(n);
    ExactDistribution d;
    d.n = n;
    d.log_weights.resize(states);
    for (std::size_t mask = 0; mask < states; ++mask)
        d.log_weights[mask] = model.hamiltonian(GraphState::from_mask(n, mask));
    const double top = *std::max_element(d.log_weights.begin(), d.log_weights.end());
    double sum = 0.0;
    for (double h : d.log_weights) sum += std::exp(h - top);
    d.log_z = top + std::log(sum);
    d.probabilities.resize(states);
    for (std::size_t mask = 0; mask < states; ++mask) d.probabilities[mask] = std::exp(d.log_weights[mask] - d.log_z);
    return d;
}

double exact_edge_marginal(const ExactDistribution& d, const EdgeId& e) {
    if (e.second() > d.n) throw std::out_of_range("exact_edge_marginal: edge outside the distribution's vertex set");
    double p = 0.0;
    for (std::size_t mask = 0; mask < d.state_count(); ++mask)
        if ((mask >> e.index()) & 1u) p += d.probabilities[mask];
    return p;
}

std::vector<double> exact_joint(const ExactDistribution& d, std::span<const EdgeId> edges) {
    if (edges.size() > 6) throw std::invalid_argument("exact_joint: at most 6 edges");
    std::vector<double> joint(std::size_t{1} << edges.size(), 0.0);
    for (std::size_t mask = 0; mask < d.state_count(); ++mask) {
        std::size_t a = 0;
        for (std::size_t i = 0; i < edges.size(); ++i)
            if ((mask >> edges[i].index()) & 1u) a |= std::size_t{1} << i;
        joint[a] += d.probabilities[mask];
    }
    return joint;
}

double tv_distance(const ExactDistribution& d, std::span<const std::uint64_t> visit_counts) {
    if (visit_counts.size() != d.state_count()) throw std::invalid_argument("tv_distance: table size mismatch");
    std::uint64_t total = 0;
    for (auto c : visit_counts) total += c;
    if (total == 0) throw std::invalid_argument("tv_distance: empty empirical table");
    std::vector<double> freq(visit_counts.size());
    for (std::size_t i = 0; i < freq.size(); ++i)
        freq[i] = static_cast<double>(visit_counts[i]) / static_cast<double>(total);
    return tv_distance(d, std::span<const double>(freq));
}

double tv_distance(const ExactDistribution& d, std::span<const double> frequencies) {
    if (frequencies.size() != d.state_count()) throw std::invalid_argument("tv_distance: table size mismatch");
    double s = 0.0;
    for (std::size_t i = 0; i < frequencies.size(); ++i) s += std::abs(d.probabilities[i] - frequencies[i]);
    return 0.5 * s;
}

void write_exact_csv(std::ostream& os, const ExactDistribution& d) {
    csv::write_row(os, {"mask", "H", "probability"});
    for (std::size_t mask = 0; mask < d.state_count(); ++mask)
        csv::write_row(os, {std::to_string(mask), csv::number(d.log_weights[mask]), csv::number(d.probabilities[mask])});
}

}  // namespace ergm
