#include "ergm/graph.hpp"

#include <algorithm>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace ergm {

namespace {

std::size_t linear_index(std::size_t n, std::size_t lo, std::size_t hi) noexcept {
    return lo * (2 * n - lo - 1) / 2 + (hi - lo - 1);
}

void check_vertex(std::size_t n, std::size_t v) {
    if (v < 1 || v > n) {
        throw std::out_of_range("vertex " + std::to_string(v) + " outside [1, " + std::to_string(n) + "]");
    }
}

}  // namespace

EdgeId EdgeId::from_vertices(std::size_t n, std::size_t i, std::size_t j) {
    check_vertex(n, i);
    check_vertex(n, j);
    if (i == j) throw std::invalid_argument("self-loop (" + std::to_string(i) + "," + std::to_string(j) + ")");
    std::size_t lo = std::min(i, j) - 1;
    std::size_t hi = std::max(i, j) - 1;
    return {lo, hi, linear_index(n, lo, hi)};
}

EdgeId EdgeId::from_index(std::size_t n, std::size_t index) {
    if (index >= pair_count(n)) {
        throw std::out_of_range("edge index " + std::to_string(index) + " outside [0, " +
                                std::to_string(pair_count(n)) + ")");
    }
    std::size_t lo = 0;
    std::size_t rest = index;
    while (rest >= n - lo - 1) {
        rest -= n - lo - 1;
        ++lo;
    }
    return {lo, lo + 1 + rest, index};
}

EdgeTable::EdgeTable(std::size_t n) : n_(n) {
    ends_.reserve(pair_count(n));
    for (std::uint32_t a = 0; a < n; ++a)
        for (std::uint32_t b = a + 1; b < n; ++b) ends_.emplace_back(a, b);
}

GraphState::GraphState(std::size_t n)
    : n_(n), words_((n + kWordBits - 1) / kWordBits), bits_(n * words_, 0), degrees_(n, 0) {
    if (n < 1) throw std::invalid_argument("graph needs at least one vertex");
}

GraphState GraphState::complete(std::size_t n) {
    GraphState g(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b) g.set_edge_raw(a, b, true);
    return g;
}

GraphState GraphState::from_mask(std::size_t n, std::uint64_t mask) {
    if (pair_count(n) > 64) throw std::invalid_argument("mask representation needs C(n,2) <= 64");
    GraphState g(n);
    std::size_t k = 0;
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b, ++k)
            if ((mask >> k) & 1u) g.set_edge_raw(a, b, true);
    return g;
}

bool GraphState::has_edge(std::size_t i, std::size_t j) const {
    check_vertex(n_, i);
    check_vertex(n_, j);
    return has_edge_raw(i - 1, j - 1);
}

bool GraphState::set_edge(std::size_t i, std::size_t j, bool present) {
    return set_edge(EdgeId::from_vertices(n_, i, j), present);
}

bool GraphState::set_edge_raw(std::size_t a, std::size_t b, bool present) noexcept {
    if (has_edge_raw(a, b) == present) return false;
    const Word ba = Word{1} << (b % kWordBits);
    const Word ab = Word{1} << (a % kWordBits);
    row_mut(a)[b / kWordBits] ^= ba;
    row_mut(b)[a / kWordBits] ^= ab;
    if (present) {
        ++edges_;
        ++degrees_[a];
        ++degrees_[b];
    } else {
        --edges_;
        --degrees_[a];
        --degrees_[b];
    }
    return true;
}

std::size_t GraphState::degree(std::size_t i) const {
    check_vertex(n_, i);
    return degrees_[i - 1];
}

std::uint64_t GraphState::to_mask() const {
    if (pair_count(n_) > 64) throw std::invalid_argument("mask representation needs C(n,2) <= 64");
    std::uint64_t mask = 0;
    std::size_t k = 0;
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = a + 1; b < n_; ++b, ++k)
            if (has_edge_raw(a, b)) mask |= std::uint64_t{1} << k;
    return mask;
}

std::vector<EdgeId> GraphState::edges() const {
    std::vector<EdgeId> out;
    out.reserve(edges_);
    for (std::size_t a = 0; a < n_; ++a)
        for (std::size_t b = a + 1; b < n_; ++b)
            if (has_edge_raw(a, b)) out.push_back(EdgeId::from_vertices(n_, a + 1, b + 1));
    return out;
}

std::size_t hamming_distance(const GraphState& x, const GraphState& y) {
    if (x.n() != y.n()) throw std::invalid_argument("hamming_distance: graphs have different vertex counts");
    std::size_t d = 0;
    for (std::size_t a = 0; a < x.n(); ++a) {
        auto rx = x.row(a);
        auto ry = y.row(a);
        for (std::size_t w = 0; w < rx.size(); ++w) d += static_cast<std::size_t>(std::popcount(rx[w] ^ ry[w]));
    }
    return d / 2;
}

bool is_subconfiguration(const GraphState& x, const GraphState& y) {
    if (x.n() != y.n()) throw std::invalid_argument("is_subconfiguration: graphs have different vertex counts");
    for (std::size_t a = 0; a < x.n(); ++a) {
        auto rx = x.row(a);
        auto ry = y.row(a);
        for (std::size_t w = 0; w < rx.size(); ++w)
            if (rx[w] & ~ry[w]) return false;
    }
    return true;
}

void write_edge_list(std::ostream& os, const GraphState& g) {
    os << "n=" << g.n() << '\n';
    for (std::size_t a = 0; a < g.n(); ++a)
        for (std::size_t b = a + 1; b < g.n(); ++b)
            if (g.has_edge_raw(a, b)) os << a + 1 << ' ' << b + 1 << '\n';
}

GraphState read_edge_list(std::istream& is) {
    std::string line;
    std::size_t n = 0;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        if (line.rfind("n=", 0) != 0) throw std::runtime_error("edge list: expected header 'n=<count>', got '" + line + "'");
        try {
            n = std::stoul(line.substr(2));
        } catch (const std::exception&) {
            throw std::runtime_error("edge list: bad vertex count in '" + line + "'");
        }
        break;
    }
    if (n == 0) throw std::runtime_error("edge list: missing or zero vertex count");
    GraphState g(n);
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty() || line[0] == '#') continue;
        std::istringstream ls(line);
        std::size_t i = 0, j = 0;
        std::string extra;
        if (!(ls >> i >> j) || (ls >> extra)) {
            throw std::runtime_error("edge list line " + std::to_string(lineno) + ": expected 'i j'");
        }
        g.set_edge(i, j, true);
    }
    return g;
}

}  // namespace ergm
