#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "ergm/graph.hpp"
#include "ergm/pattern.hpp"

namespace ergm {

/// Patterns G_1..G_s with parameters beta_1..beta_s. G_1 must be the edge
/// pattern. Interaction parameters beta_i (i >= 2) must be positive unless
/// the caller explicitly opts out; the monotone coupling relies on it.
///
/// Counts follow the labeled-embedding convention, so a pattern with k
/// automorphisms contributes k times per copy. To express a model written in
/// terms of unlabeled copies, divide its beta_i by |Aut(G_i)|.
class ModelSpec {
public:
    ModelSpec(std::vector<SubgraphPattern> patterns, std::vector<double> betas,
              bool allow_nonferromagnetic = false);

    static ModelSpec edges_only(double beta1);
    static ModelSpec edge_triangle(double beta1, double beta2);
    static ModelSpec edge_two_star(double beta1, double beta2);

    const std::vector<SubgraphPattern>& patterns() const noexcept { return patterns_; }
    const std::vector<double>& betas() const noexcept { return betas_; }
    std::size_t size() const noexcept { return patterns_.size(); }
    bool allows_nonferromagnetic() const noexcept { return allow_nonferro_; }
    bool is_ferromagnetic() const noexcept;
    std::size_t max_pattern_vertices() const noexcept;

private:
    std::vector<SubgraphPattern> patterns_;
    std::vector<double> betas_;
    bool allow_nonferro_;
};

/// A ModelSpec validated against a vertex count, with the normalisers
/// n^{|V_i|-2} computed once.
class ModelInstance {
public:
    ModelInstance(ModelSpec spec, std::size_t n);

    const ModelSpec& spec() const noexcept { return spec_; }
    std::size_t n() const noexcept { return n_; }

    /// H(X) = sum_i beta_i N_{G_i}(X) / n^{|V_i|-2}.
    double hamiltonian(const GraphState& x) const;
    /// d_e H(X) = H(X_{e+}) - H(X_{e-}) = sum_i beta_i N_{G_i}(X,e) / n^{|V_i|-2}.
    double local_field(const GraphState& x, const EdgeId& e) const;
    /// Same, for 0-based endpoints a < b. Inner-loop entry point.
    double local_field_raw(const GraphState& x, std::size_t a, std::size_t b) const;

private:
    enum class Kind : std::uint8_t { Edge, TwoStar, Triangle, Generic };

    ModelSpec spec_;
    std::size_t n_;
    std::vector<double> scaled_beta_;  // beta_i / n^{|V_i|-2}
    std::vector<Kind> kinds_;
};

inline constexpr std::size_t kMaxExactVertices = 6;

/// The Gibbs measure on all 2^{C(n,2)} graphs, indexed by edge mask in the
/// linear edge order.
struct ExactDistribution {
    std::size_t n = 0;
    std::vector<double> log_weights;  // H(X) per mask
    double log_z = 0.0;
    std::vector<double> probabilities;

    std::size_t state_count() const noexcept { return probabilities.size(); }
};

/// Exhaustive enumeration; refuses n > kMaxExactVertices.
ExactDistribution exact_distribution(const ModelSpec& spec, std::size_t n);

double exact_edge_marginal(const ExactDistribution& d, const EdgeId& e);

/// Joint law of (x_{e_1}, ..., x_{e_k}); entry a has bit i equal to a_i.
std::vector<double> exact_joint(const ExactDistribution& d, std::span<const EdgeId> edges);

/// (1/2) sum |p(X) - q(X)| against an empirical table of visit counts per mask.
double tv_distance(const ExactDistribution& d, std::span<const std::uint64_t> visit_counts);
/// Same, against a normalised frequency table.
double tv_distance(const ExactDistribution& d, std::span<const double> frequencies);

/// CSV rows "mask,H,probability".
void write_exact_csv(std::ostream& os, const ExactDistribution& d);

}  // namespace ergm
