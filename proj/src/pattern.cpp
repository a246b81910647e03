#include "ergm/pattern.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <set>
#include <stdexcept>

namespace ergm {

SubgraphPattern::SubgraphPattern(std::string name, std::size_t vertex_count,
                                 std::vector<std::pair<int, int>> edges)
    : name_(std::move(name)), vertex_count_(vertex_count), adj_(vertex_count, 0) {
    if (vertex_count < 2 || vertex_count > kMaxPatternVertices) {
        throw std::invalid_argument("pattern '" + name_ + "': vertex_count must be in [2, " +
                                    std::to_string(kMaxPatternVertices) + "]");
    }
    if (edges.empty()) throw std::invalid_argument("pattern '" + name_ + "': needs at least one edge");
    for (auto [u, v] : edges) {
        if (u < 1 || v < 1 || static_cast<std::size_t>(u) > vertex_count ||
            static_cast<std::size_t>(v) > vertex_count) {
            throw std::invalid_argument("pattern '" + name_ + "': edge (" + std::to_string(u) + "," +
                                        std::to_string(v) + ") references a vertex outside [1, " +
                                        std::to_string(vertex_count) + "]");
        }
        if (u == v) throw std::invalid_argument("pattern '" + name_ + "': self-loop at " + std::to_string(u));
        auto lo = static_cast<std::uint8_t>(std::min(u, v));
        auto hi = static_cast<std::uint8_t>(std::max(u, v));
        edges_.emplace_back(lo, hi);
    }
    std::sort(edges_.begin(), edges_.end());
    if (std::adjacent_find(edges_.begin(), edges_.end()) != edges_.end()) {
        throw std::invalid_argument("pattern '" + name_ + "': duplicate edge");
    }
    for (auto [u, v] : edges_) {
        adj_[u - 1] |= 1u << (v - 1);
        adj_[v - 1] |= 1u << (u - 1);
    }
}

SubgraphPattern SubgraphPattern::edge() { return {"edge", 2, {{1, 2}}}; }

SubgraphPattern SubgraphPattern::two_star() { return {"two_star", 3, {{1, 2}, {2, 3}}}; }

SubgraphPattern SubgraphPattern::triangle() { return {"triangle", 3, {{1, 2}, {2, 3}, {1, 3}}}; }

SubgraphPattern SubgraphPattern::star(std::size_t leaves) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 2; i <= leaves + 1; ++i) e.emplace_back(1, static_cast<int>(i));
    return {"star" + std::to_string(leaves), leaves + 1, std::move(e)};
}

SubgraphPattern SubgraphPattern::path(std::size_t vertices) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 1; i < vertices; ++i) e.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
    return {"path" + std::to_string(vertices), vertices, std::move(e)};
}

SubgraphPattern SubgraphPattern::cycle(std::size_t length) {
    if (length < 3) throw std::invalid_argument("cycle length must be at least 3");
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 1; i < length; ++i) e.emplace_back(static_cast<int>(i), static_cast<int>(i + 1));
    e.emplace_back(1, static_cast<int>(length));
    return {"cycle" + std::to_string(length), length, std::move(e)};
}

SubgraphPattern SubgraphPattern::clique(std::size_t vertices) {
    std::vector<std::pair<int, int>> e;
    for (std::size_t i = 1; i <= vertices; ++i)
        for (std::size_t j = i + 1; j <= vertices; ++j) e.emplace_back(static_cast<int>(i), static_cast<int>(j));
    return {"clique" + std::to_string(vertices), vertices, std::move(e)};
}

SubgraphPattern SubgraphPattern::named(const std::string& name) {
    if (name == "edge") return edge();
    if (name == "two_star") return two_star();
    if (name == "triangle") return triangle();
    auto suffix = [&](const std::string& prefix) -> std::size_t {
        if (name.rfind(prefix, 0) != 0 || name.size() == prefix.size()) return 0;
        const std::string digits = name.substr(prefix.size());
        if (!std::all_of(digits.begin(), digits.end(), [](char c) { return c >= '0' && c <= '9'; })) return 0;
        return std::stoul(digits);
    };
    if (auto k = suffix("star")) return star(k);
    if (auto k = suffix("path")) return path(k);
    if (auto k = suffix("cycle")) return cycle(k);
    if (auto k = suffix("clique")) return clique(k);
    throw std::invalid_argument("unknown pattern shorthand '" + name + "'");
}

SubgraphPattern SubgraphPattern::without_edge(std::size_t edge_position) const {
    if (edges_.size() < 2) throw std::invalid_argument("without_edge: pattern has a single edge");
    if (edge_position >= edges_.size()) throw std::out_of_range("without_edge: bad edge position");
    std::vector<std::pair<int, int>> e;
    for (std::size_t k = 0; k < edges_.size(); ++k)
        if (k != edge_position) e.emplace_back(edges_[k].first, edges_[k].second);
    return {name_ + "-e" + std::to_string(edge_position + 1), vertex_count_, std::move(e)};
}

std::vector<SubgraphPattern> all_nonempty_graphs(std::size_t vertices) {
    if (vertices < 2 || vertices > 5) throw std::invalid_argument("all_nonempty_graphs: vertices must be in [2, 5]");
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < vertices; ++i)
        for (std::size_t j = i + 1; j < vertices; ++j) pairs.emplace_back(i, j);
    std::vector<std::vector<std::size_t>> slot(vertices, std::vector<std::size_t>(vertices));
    for (std::size_t k = 0; k < pairs.size(); ++k) {
        slot[pairs[k].first][pairs[k].second] = k;
        slot[pairs[k].second][pairs[k].first] = k;
    }

    std::vector<std::size_t> perm(vertices);
    std::set<std::pair<int, std::uint32_t>> canon;  // (edge count, minimal mask)
    for (std::uint32_t mask = 1; mask < (1u << pairs.size()); ++mask) {
        std::iota(perm.begin(), perm.end(), 0);
        std::uint32_t best = mask;
        do {
            std::uint32_t m = 0;
            for (std::size_t k = 0; k < pairs.size(); ++k)
                if ((mask >> k) & 1u) m |= 1u << slot[perm[pairs[k].first]][perm[pairs[k].second]];
            best = std::min(best, m);
        } while (std::next_permutation(perm.begin(), perm.end()));
        canon.emplace(std::popcount(mask), best);
    }

    std::vector<SubgraphPattern> out;
    for (auto [count, mask] : canon) {
        std::vector<std::pair<int, int>> e;
        for (std::size_t k = 0; k < pairs.size(); ++k)
            if ((mask >> k) & 1u) e.emplace_back(static_cast<int>(pairs[k].first + 1), static_cast<int>(pairs[k].second + 1));
        out.emplace_back("g" + std::to_string(vertices) + "_" + std::to_string(out.size() + 1), vertices, std::move(e));
    }
    return out;
}

}  // namespace ergm
