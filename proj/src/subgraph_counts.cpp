#include "ergm/subgraph_counts.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace ergm {

namespace {

using Word = GraphState::Word;
constexpr std::size_t kBits = GraphState::kWordBits;

void require_fits(const GraphState& x, const SubgraphPattern& g) {
    if (g.vertex_count() > x.n()) {
        throw std::invalid_argument("pattern '" + g.name() + "' has " + std::to_string(g.vertex_count()) +
                                    " vertices but the host graph only " + std::to_string(x.n()));
    }
}

struct Fixed {
    std::size_t pattern_vertex;
    std::size_t host_vertex;
};

// Counts injective maps of the pattern into the host that extend the given
// partial assignment. Unassigned pattern vertices are placed one at a time;
// the candidate set for each is the intersection of the host rows of its
// already-placed pattern neighbours (and, for induced counting, the
// complement of the rows of placed non-neighbours).
class Embedder {
public:
    Embedder(const GraphState& host, const SubgraphPattern& g, bool induced)
        : host_(host), g_(g), induced_(induced), words_(host.words_per_row()) {
        phi_.fill(kUnset);
        used_.assign(words_, 0);
        full_.assign(words_, ~Word{0});
        if (host.n() % kBits != 0) full_.back() = (Word{1} << (host.n() % kBits)) - 1;
    }

    Count count(std::span<const Fixed> fixed) {
        for (const auto& f : fixed) {
            if (phi_[f.pattern_vertex] != kUnset) {
                if (phi_[f.pattern_vertex] != f.host_vertex) return 0;
                continue;
            }
            if (test(used_, f.host_vertex)) return 0;
            phi_[f.pattern_vertex] = f.host_vertex;
            set(used_, f.host_vertex);
        }
        const std::size_t m = g_.vertex_count();
        for (std::size_t u = 0; u < m; ++u) {
            if (phi_[u] == kUnset) continue;
            for (std::size_t v = u + 1; v < m; ++v) {
                if (phi_[v] == kUnset) continue;
                const bool host_edge = host_.has_edge_raw(phi_[u], phi_[v]);
                if (g_.has_edge(u, v) && !host_edge) return 0;
                if (induced_ && !g_.has_edge(u, v) && host_edge) return 0;
            }
        }

        std::uint32_t placed = 0;
        for (std::size_t u = 0; u < m; ++u)
            if (phi_[u] != kUnset) placed |= 1u << u;
        order_.clear();
        while (std::popcount(placed) < static_cast<int>(m)) {
            std::size_t best = m;
            int best_links = -1;
            for (std::size_t u = 0; u < m; ++u) {
                if ((placed >> u) & 1u) continue;
                int links = std::popcount(g_.neighbour_mask(u) & placed);
                if (links > best_links) {
                    best_links = links;
                    best = u;
                }
            }
            order_.push_back(best);
            placed |= 1u << best;
        }
        if (order_.empty()) return 1;
        cand_.assign(order_.size() * words_, 0);
        return descend(0);
    }

private:
    static constexpr std::size_t kUnset = std::numeric_limits<std::size_t>::max();

    static bool test(const std::vector<Word>& bits, std::size_t v) { return (bits[v / kBits] >> (v % kBits)) & 1u; }
    static void set(std::vector<Word>& bits, std::size_t v) { bits[v / kBits] |= Word{1} << (v % kBits); }
    static void clear(std::vector<Word>& bits, std::size_t v) { bits[v / kBits] &= ~(Word{1} << (v % kBits)); }

    Count descend(std::size_t depth) {
        const std::size_t u = order_[depth];
        Word* c = cand_.data() + depth * words_;
        for (std::size_t w = 0; w < words_; ++w) c[w] = full_[w] & ~used_[w];
        const std::size_t m = g_.vertex_count();
        for (std::size_t v = 0; v < m; ++v) {
            if (v == u || phi_[v] == kUnset) continue;
            auto r = host_.row(phi_[v]);
            if (g_.has_edge(u, v)) {
                for (std::size_t w = 0; w < words_; ++w) c[w] &= r[w];
            } else if (induced_) {
                for (std::size_t w = 0; w < words_; ++w) c[w] &= ~r[w];
            }
        }
        if (depth + 1 == order_.size()) {
            Count total = 0;
            for (std::size_t w = 0; w < words_; ++w) total += static_cast<Count>(std::popcount(c[w]));
            return total;
        }
        Count total = 0;
        for (std::size_t w = 0; w < words_; ++w) {
            Word bits = c[w];
            while (bits) {
                const std::size_t hv = w * kBits + static_cast<std::size_t>(std::countr_zero(bits));
                bits &= bits - 1;
                phi_[u] = hv;
                set(used_, hv);
                total += descend(depth + 1);
                clear(used_, hv);
            }
        }
        phi_[u] = kUnset;
        return total;
    }

    const GraphState& host_;
    const SubgraphPattern& g_;
    bool induced_;
    std::size_t words_;
    std::array<std::size_t, kMaxPatternVertices> phi_{};
    std::vector<Word> used_;
    std::vector<Word> full_;
    std::vector<Word> cand_;
    std::vector<std::size_t> order_;
};

Count falling_factorial(std::size_t n, std::size_t k) {
    Count out = 1;
    for (std::size_t i = 0; i < k; ++i) {
        const Count f = n - i;
        if (out > std::numeric_limits<Count>::max() / f) throw std::overflow_error("falling factorial overflows 64 bits");
        out *= f;
    }
    return out;
}

Count int_pow(std::size_t base, std::size_t exp) {
    Count out = 1;
    for (std::size_t i = 0; i < exp; ++i) {
        if (out > std::numeric_limits<Count>::max() / base) throw std::overflow_error("power overflows 64 bits");
        out *= base;
    }
    return out;
}

Count triangle_count(const GraphState& x) {
    Count sum = 0;
    for (std::size_t a = 0; a < x.n(); ++a)
        for (std::size_t b = a + 1; b < x.n(); ++b)
            if (x.has_edge_raw(a, b)) sum += x.common_neighbours_raw(a, b);
    return 2 * sum;
}

Count generic_at_edge(const GraphState& host, const SubgraphPattern& g, std::size_t a, std::size_t b) {
    Count total = 0;
    for (auto [u, v] : g.edges()) {
        const std::size_t pu = u - 1u, pv = v - 1u;
        for (int flip = 0; flip < 2; ++flip) {
            const std::array<Fixed, 2> fixed{Fixed{pu, flip ? b : a}, Fixed{pv, flip ? a : b}};
            Embedder emb(host, g, false);
            total += emb.count(fixed);
        }
    }
    return total;
}

}  // namespace

Count count_global(const GraphState& x, const SubgraphPattern& g) {
    require_fits(x, g);
    if (g.is_edge_pattern()) return 2 * static_cast<Count>(x.edge_count());
    if (g.is_two_star()) {
        Count sum = 0;
        for (std::size_t a = 0; a < x.n(); ++a) {
            const Count d = x.degree_raw(a);
            if (d >= 2) sum += d * (d - 1);
        }
        return sum;
    }
    if (g.is_triangle()) return triangle_count(x);
    Embedder emb(x, g, false);
    return emb.count({});
}

Count count_at_edge(const GraphState& x, const SubgraphPattern& g, const EdgeId& e) {
    require_fits(x, g);
    const std::size_t a = e.first() - 1, b = e.second() - 1;
    if (b >= x.n()) throw std::out_of_range("count_at_edge: edge outside host graph");
    if (g.is_edge_pattern()) return 2;
    if (g.is_triangle()) return 6 * static_cast<Count>(x.common_neighbours_raw(a, b));
    if (g.is_two_star()) {
        const Count bump = x.has_edge_raw(a, b) ? 0 : 1;
        return 2 * ((x.degree_raw(a) + bump - 1) + (x.degree_raw(b) + bump - 1));
    }
    if (x.has_edge_raw(a, b)) return generic_at_edge(x, g, a, b);
    GraphState host = x;
    host.set_edge_raw(a, b, true);
    return generic_at_edge(host, g, a, b);
}

Count count_at_edge_pair(const GraphState& x, const SubgraphPattern& g, const EdgeId& e, const EdgeId& e2) {
    require_fits(x, g);
    if (e == e2) throw std::invalid_argument("count_at_edge_pair: the two edges must differ");
    if (g.edge_count() < 2) return 0;
    const std::size_t a = e.first() - 1, b = e.second() - 1;
    const std::size_t c = e2.first() - 1, d = e2.second() - 1;
    if (std::max(b, d) >= x.n()) throw std::out_of_range("count_at_edge_pair: edge outside host graph");
    GraphState host = x;
    host.set_edge_raw(a, b, true);
    host.set_edge_raw(c, d, true);

    const auto& edges = g.edges();
    Count total = 0;
    for (std::size_t i = 0; i < edges.size(); ++i) {
        for (std::size_t j = 0; j < edges.size(); ++j) {
            if (i == j) continue;
            const std::size_t u1 = edges[i].first - 1u, v1 = edges[i].second - 1u;
            const std::size_t u2 = edges[j].first - 1u, v2 = edges[j].second - 1u;
            for (int f1 = 0; f1 < 2; ++f1) {
                for (int f2 = 0; f2 < 2; ++f2) {
                    const std::array<Fixed, 4> fixed{Fixed{u1, f1 ? b : a}, Fixed{v1, f1 ? a : b},
                                                     Fixed{u2, f2 ? d : c}, Fixed{v2, f2 ? c : d}};
                    Embedder emb(host, g, false);
                    total += emb.count(fixed);
                }
            }
        }
    }
    return total;
}

Count count_induced_global(const GraphState& x, const SubgraphPattern& g) {
    require_fits(x, g);
    Embedder emb(x, g, true);
    return emb.count({});
}

Count complete_graph_count(std::size_t n, const SubgraphPattern& g) {
    if (g.vertex_count() > n) return 0;
    return falling_factorial(n, g.vertex_count());
}

Count complete_graph_count_at_edge(std::size_t n, const SubgraphPattern& g) {
    if (g.vertex_count() > n) return 0;
    return 2 * static_cast<Count>(g.edge_count()) * falling_factorial(n - 2, g.vertex_count() - 2);
}

CountReport count_report(const GraphState& x, const SubgraphPattern& g) {
    const Count value = count_global(x, g);
    const Count norm = int_pow(x.n(), g.vertex_count() - 2);
    return {g, value, norm, static_cast<double>(value) / static_cast<double>(norm)};
}

double r_statistic(const GraphState& x, const SubgraphPattern& g, const EdgeId& e) {
    if (g.edge_count() < 2) {
        throw std::invalid_argument("r_statistic: pattern '" + g.name() + "' has fewer than two edges");
    }
    const double count = static_cast<double>(count_at_edge(x, g, e));
    const double norm = 2.0 * static_cast<double>(g.edge_count()) *
                        std::pow(static_cast<double>(x.n()), static_cast<double>(g.vertex_count() - 2));
    return std::pow(count / norm, 1.0 / static_cast<double>(g.edge_count() - 1));
}

RExtremes r_extremes(const GraphState& x, std::span<const SubgraphPattern> patterns) {
    if (patterns.empty()) throw std::invalid_argument("r_extremes: empty pattern list");
    for (const auto& g : patterns) {
        if (g.edge_count() < 2) {
            throw std::invalid_argument("r_extremes: pattern '" + g.name() + "' has fewer than two edges");
        }
        require_fits(x, g);
    }
    RExtremes out{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity()};
    const std::size_t n = x.n();
    for (const auto& g : patterns) {
        if (g.is_triangle()) {
            // r = sqrt(6 codeg / (6 n)); extremes of codeg suffice.
            std::size_t lo = std::numeric_limits<std::size_t>::max(), hi = 0;
            for (std::size_t a = 0; a < n; ++a)
                for (std::size_t b = a + 1; b < n; ++b) {
                    const std::size_t c = x.common_neighbours_raw(a, b);
                    lo = std::min(lo, c);
                    hi = std::max(hi, c);
                }
            if (n < 2) continue;
            out.r_max = std::max(out.r_max, std::sqrt(static_cast<double>(hi) / static_cast<double>(n)));
            out.r_min = std::min(out.r_min, std::sqrt(static_cast<double>(lo) / static_cast<double>(n)));
            continue;
        }
        for (std::size_t k = 0; k < pair_count(n); ++k) {
            const double r = r_statistic(x, g, EdgeId::from_index(n, k));
            out.r_max = std::max(out.r_max, r);
            out.r_min = std::min(out.r_min, r);
        }
    }
    return out;
}

}  // namespace ergm
