#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

namespace ergm {

/// Hard cap on pattern size. Per-step counting cost grows like n^{|V|-2}.
inline constexpr std::size_t kMaxPatternVertices = 6;

/// A small fixed graph G on vertices {1, ..., |V|} whose labeled copies are
/// counted in a host graph.
class SubgraphPattern {
public:
    using Edge = std::pair<std::uint8_t, std::uint8_t>;  // 1-based, first < second

    /// Validates: 2 <= |V| <= kMaxPatternVertices, 1 <= |E| <= C(|V|,2), no
    /// self-loops or duplicates. Edges are normalised to (lo, hi) and sorted.
    SubgraphPattern(std::string name, std::size_t vertex_count, std::vector<std::pair<int, int>> edges);

    static SubgraphPattern edge();
    static SubgraphPattern two_star();
    static SubgraphPattern triangle();
    static SubgraphPattern star(std::size_t leaves);
    static SubgraphPattern path(std::size_t vertices);
    static SubgraphPattern cycle(std::size_t length);
    static SubgraphPattern clique(std::size_t vertices);
    /// "edge", "two_star", "triangle", plus "star<k>", "path<k>", "cycle<k>", "clique<k>".
    static SubgraphPattern named(const std::string& name);

    const std::string& name() const noexcept { return name_; }
    std::size_t vertex_count() const noexcept { return vertex_count_; }
    std::size_t edge_count() const noexcept { return edges_.size(); }
    const std::vector<Edge>& edges() const noexcept { return edges_; }

    /// Adjacency of the pattern as bit masks over 0-based pattern vertices.
    std::uint32_t neighbour_mask(std::size_t v) const noexcept { return adj_[v]; }
    bool has_edge(std::size_t u, std::size_t v) const noexcept { return (adj_[u] >> v) & 1u; }

    bool is_edge_pattern() const noexcept { return vertex_count_ == 2 && edges_.size() == 1; }
    /// Any 3-vertex graph with two edges is a path through one centre.
    bool is_two_star() const noexcept { return vertex_count_ == 3 && edges_.size() == 2; }
    bool is_triangle() const noexcept { return vertex_count_ == 3 && edges_.size() == 3; }

    /// G_alpha: the same vertex set with the given edge (index into edges()) removed.
    /// Requires at least two edges.
    SubgraphPattern without_edge(std::size_t edge_position) const;

    friend bool operator==(const SubgraphPattern& a, const SubgraphPattern& b) noexcept {
        return a.vertex_count_ == b.vertex_count_ && a.edges_ == b.edges_;
    }

private:
    std::string name_;
    std::size_t vertex_count_;
    std::vector<Edge> edges_;
    std::vector<std::uint32_t> adj_;
};

/// All isomorphism classes of graphs with at least one edge on `vertices`
/// vertices (vertices <= 5), in a fixed deterministic order.
std::vector<SubgraphPattern> all_nonempty_graphs(std::size_t vertices);

}  // namespace ergm
