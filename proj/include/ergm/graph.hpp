#pragma once

#include <bit>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace ergm {

/// Number of unordered vertex pairs on n vertices.
constexpr std::size_t pair_count(std::size_t n) noexcept { return n < 2 ? 0 : n * (n - 1) / 2; }

/// An unordered vertex pair (i, j), 1 <= i < j <= n, together with its dense
/// linear index. Pairs are ordered lexicographically: (1,2), (1,3), ..., (1,n),
/// (2,3), ... This ordering is also the bit order of state masks.
class EdgeId {
public:
    EdgeId() = default;

    /// Build from 1-based endpoints in either order. Throws std::out_of_range
    /// for indices outside [1, n] and std::invalid_argument for i == j.
    static EdgeId from_vertices(std::size_t n, std::size_t i, std::size_t j);
    /// Build from a linear index in [0, C(n,2)).
    static EdgeId from_index(std::size_t n, std::size_t index);

    std::size_t first() const noexcept { return lo_ + 1; }
    std::size_t second() const noexcept { return hi_ + 1; }
    std::size_t index() const noexcept { return index_; }

    bool shares_vertex(const EdgeId& other) const noexcept {
        return lo_ == other.lo_ || lo_ == other.hi_ || hi_ == other.lo_ || hi_ == other.hi_;
    }

    friend bool operator==(const EdgeId& a, const EdgeId& b) noexcept { return a.index_ == b.index_; }

private:
    friend class GraphState;
    EdgeId(std::size_t lo, std::size_t hi, std::size_t index) : lo_(lo), hi_(hi), index_(index) {}

    std::size_t lo_ = 0;  // 0-based
    std::size_t hi_ = 1;
    std::size_t index_ = 0;
};

/// Precomputed decoding table for linear edge indices on a fixed n. The
/// dynamics draw an index per step, so decoding must be O(1).
class EdgeTable {
public:
    explicit EdgeTable(std::size_t n);

    std::size_t n() const noexcept { return n_; }
    std::size_t size() const noexcept { return ends_.size(); }
    /// 0-based endpoints of the pair with the given linear index.
    std::pair<std::uint32_t, std::uint32_t> endpoints(std::size_t index) const noexcept {
        return ends_[index];
    }
    EdgeId edge(std::size_t index) const { return EdgeId::from_index(n_, index); }

private:
    std::size_t n_;
    std::vector<std::pair<std::uint32_t, std::uint32_t>> ends_;
};

/// Labeled simple graph X on vertex set {1, ..., n}.
///
/// Stored as a symmetric adjacency bit matrix, one packed row per vertex, so
/// that edge queries and flips are O(1) and neighbourhood intersections are
/// word-parallel. Vertices are 1-based in every public signature that takes
/// vertex numbers; the *_raw accessors take 0-based indices and are meant for
/// counting kernels.
class GraphState {
public:
    using Word = std::uint64_t;
    static constexpr std::size_t kWordBits = 64;

    GraphState() : GraphState(1) {}
    explicit GraphState(std::size_t n);

    static GraphState empty(std::size_t n) { return GraphState(n); }
    static GraphState complete(std::size_t n);
    /// Graph whose edge set is given by a bit mask over linear edge indices.
    /// Requires C(n,2) <= 64.
    static GraphState from_mask(std::size_t n, std::uint64_t mask);

    std::size_t n() const noexcept { return n_; }
    std::size_t words_per_row() const noexcept { return words_; }
    std::size_t edge_count() const noexcept { return edges_; }
    double density() const noexcept {
        return n_ < 2 ? 0.0 : static_cast<double>(edges_) / static_cast<double>(pair_count(n_));
    }

    bool has_edge(const EdgeId& e) const noexcept { return has_edge_raw(e.lo_, e.hi_); }
    /// 1-based vertex query; throws std::out_of_range on bad indices.
    bool has_edge(std::size_t i, std::size_t j) const;
    bool has_edge_raw(std::size_t a, std::size_t b) const noexcept {
        return (row(a)[b / kWordBits] >> (b % kWordBits)) & Word{1};
    }

    /// Sets x_e. Returns true if the state changed.
    bool set_edge(const EdgeId& e, bool present) noexcept { return set_edge_raw(e.lo_, e.hi_, present); }
    bool set_edge(std::size_t i, std::size_t j, bool present);
    bool set_edge_raw(std::size_t a, std::size_t b, bool present) noexcept;

    std::size_t degree_raw(std::size_t a) const noexcept { return degrees_[a]; }
    std::size_t degree(std::size_t i) const;

    std::span<const Word> row(std::size_t a) const noexcept {
        return {bits_.data() + a * words_, words_};
    }

    /// |N(a) ∩ N(b)| for 0-based a, b.
    std::size_t common_neighbours_raw(std::size_t a, std::size_t b) const noexcept {
        auto ra = row(a);
        auto rb = row(b);
        std::size_t c = 0;
        for (std::size_t w = 0; w < words_; ++w) c += static_cast<std::size_t>(std::popcount(ra[w] & rb[w]));
        return c;
    }

    /// Edge set as a bit mask over linear indices. Requires C(n,2) <= 64.
    std::uint64_t to_mask() const;
    /// Present edges in linear-index order.
    std::vector<EdgeId> edges() const;

    friend bool operator==(const GraphState& a, const GraphState& b) noexcept {
        return a.n_ == b.n_ && a.bits_ == b.bits_;
    }

private:
    Word* row_mut(std::size_t a) noexcept { return bits_.data() + a * words_; }

    std::size_t n_;
    std::size_t words_;
    std::size_t edges_ = 0;
    std::vector<Word> bits_;
    std::vector<std::uint32_t> degrees_;
};

/// Number of pairs where x_e != y_e. Throws std::invalid_argument on mismatched n.
std::size_t hamming_distance(const GraphState& x, const GraphState& y);

/// True iff every edge of x is an edge of y.
bool is_subconfiguration(const GraphState& x, const GraphState& y);

/// Edge-list text format: a header line "n=<count>" followed by one "i j"
/// line per edge (1-based, i < j, linear-index order).
void write_edge_list(std::ostream& os, const GraphState& g);
GraphState read_edge_list(std::istream& is);

}  // namespace ergm
