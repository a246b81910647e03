#pragma once

#include <cstdint>
#include <span>

#include "ergm/graph.hpp"
#include "ergm/pattern.hpp"

namespace ergm {

// Counts are over ordered tuples of distinct host vertices (labeled
// embeddings). A pattern G is "contained" in a tuple when every G-edge maps to
// a host edge; extra host edges are allowed. Consequently a pattern with k
// automorphisms is counted k times per unlabeled copy (a triangle six times).
//
// "At an edge" counts N_G(X,e) are embeddings into X ∪ {e} in which some
// G-edge maps onto e; they do not depend on the current value of x_e and equal
// N_G(X ∪ {e}) - N_G(X \ {e}). Pair counts N_G(X,e,e') likewise require both e
// and e' to be images of G-edges in X ∪ {e,e'}.

using Count = std::uint64_t;

/// N_G(X). Throws std::invalid_argument if |V(G)| > n.
Count count_global(const GraphState& x, const SubgraphPattern& g);

/// N_G(X, e).
Count count_at_edge(const GraphState& x, const SubgraphPattern& g, const EdgeId& e);

/// N_G(X, e, e2). Throws std::invalid_argument if e == e2.
Count count_at_edge_pair(const GraphState& x, const SubgraphPattern& g, const EdgeId& e, const EdgeId& e2);

/// N*_G(X): labeled induced copies; pattern non-edges must be absent in X.
Count count_induced_global(const GraphState& x, const SubgraphPattern& g);

/// Closed forms for K_n: N_G(K_n) = C(n,|V|)|V|! and
/// N_G(K_n,e) = 2|E| C(n-2,|V|-2) (|V|-2)!.
Count complete_graph_count(std::size_t n, const SubgraphPattern& g);
Count complete_graph_count_at_edge(std::size_t n, const SubgraphPattern& g);

/// A global count with its Hamiltonian normaliser n^{|V|-2}.
struct CountReport {
    SubgraphPattern pattern;
    Count value;
    Count normalizer;       // n^{|V|-2}, exact
    double normalized;      // value / normalizer
};
CountReport count_report(const GraphState& x, const SubgraphPattern& g);

/// r_G(X,e) = (N_G(X,e) / (2|E| n^{|V|-2}))^{1/(|E|-1)}. Defined only for
/// patterns with at least two edges; throws std::invalid_argument otherwise.
double r_statistic(const GraphState& x, const SubgraphPattern& g, const EdgeId& e);

struct RExtremes {
    double r_max;
    double r_min;
};

/// Max and min of r_statistic over every vertex pair and every pattern.
RExtremes r_extremes(const GraphState& x, std::span<const SubgraphPattern> patterns);

}  // namespace ergm
