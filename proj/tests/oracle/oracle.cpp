#include "oracle.hpp"

#include <cmath>
#include <functional>
#include <stdexcept>

namespace oracle {

namespace {

using Pred = std::function<bool(const std::vector<int>&)>;

void guard(int n, std::size_t v) {
    double work = 1;
    for (std::size_t i = 0; i < v; ++i) work *= n;
    if (work > 1e8) throw std::invalid_argument("oracle: enumeration too large");
}

std::uint64_t enumerate(int n, std::size_t v, const Pred& accept) {
    guard(n, v);
    std::vector<int> f(v, 0);
    std::vector<bool> used(n + 1, false);
    std::uint64_t total = 0;
    std::function<void(std::size_t)> rec = [&](std::size_t pos) {
        if (pos == v) {
            if (accept(f)) ++total;
            return;
        }
        for (int x = 1; x <= n; ++x) {
            if (used[x]) continue;
            used[x] = true;
            f[pos] = x;
            rec(pos + 1);
            used[x] = false;
        }
    };
    rec(0);
    return total;
}

bool same_pair(int a, int b, int i, int j) { return (a == i && b == j) || (a == j && b == i); }

}  // namespace

std::uint64_t count(const Graph& x, const Pattern& g) {
    const int n = static_cast<int>(x.n());
    return enumerate(n, g.vertex_count(), [&](const std::vector<int>& f) {
        for (auto [u, v] : g.edges())
            if (!x.has_edge(f[u - 1], f[v - 1])) return false;
        return true;
    });
}

std::uint64_t count_at_edge(const Graph& x, const Pattern& g, int i, int j) {
    const int n = static_cast<int>(x.n());
    return enumerate(n, g.vertex_count(), [&](const std::vector<int>& f) {
        bool hit = false;
        for (auto [u, v] : g.edges()) {
            const int a = f[u - 1], b = f[v - 1];
            if (same_pair(a, b, i, j)) {
                hit = true;
            } else if (!x.has_edge(a, b)) {
                return false;
            }
        }
        return hit;
    });
}

std::uint64_t count_at_edge_pair(const Graph& x, const Pattern& g, int i, int j, int k, int l) {
    const int n = static_cast<int>(x.n());
    return enumerate(n, g.vertex_count(), [&](const std::vector<int>& f) {
        bool hit1 = false, hit2 = false;
        for (auto [u, v] : g.edges()) {
            const int a = f[u - 1], b = f[v - 1];
            if (same_pair(a, b, i, j)) {
                hit1 = true;
            } else if (same_pair(a, b, k, l)) {
                hit2 = true;
            } else if (!x.has_edge(a, b)) {
                return false;
            }
        }
        return hit1 && hit2;
    });
}

std::uint64_t count_induced(const Graph& x, const Pattern& g) {
    const int n = static_cast<int>(x.n());
    const int v = static_cast<int>(g.vertex_count());
    std::vector<std::vector<bool>> adj(v + 1, std::vector<bool>(v + 1, false));
    for (auto [a, b] : g.edges()) adj[a][b] = adj[b][a] = true;
    return enumerate(n, g.vertex_count(), [&](const std::vector<int>& f) {
        for (int a = 1; a <= v; ++a)
            for (int b = a + 1; b <= v; ++b)
                if (x.has_edge(f[a - 1], f[b - 1]) != adj[a][b]) return false;
        return true;
    });
}

std::uint64_t falling_factorial(std::uint64_t n, std::uint64_t k) {
    std::uint64_t r = 1;
    for (std::uint64_t i = 0; i < k; ++i) r *= (n - i);
    return k > n ? 0 : r;
}

std::vector<std::pair<int, int>> pairs(int n) {
    std::vector<std::pair<int, int>> out;
    for (int i = 1; i <= n; ++i)
        for (int j = i + 1; j <= n; ++j) out.emplace_back(i, j);
    return out;
}

Graph graph_from_bits(int n, std::uint64_t bits) {
    Graph g(static_cast<std::size_t>(n));
    const auto ps = pairs(n);
    for (std::size_t k = 0; k < ps.size(); ++k)
        if ((bits >> k) & 1u) g.set_edge(ps[k].first, ps[k].second, true);
    return g;
}

double hamiltonian(const Model& m, const Graph& x) {
    double h = 0;
    const double n = static_cast<double>(x.n());
    for (std::size_t i = 0; i < m.patterns.size(); ++i) {
        const double norm = std::pow(n, static_cast<double>(m.patterns[i].vertex_count()) - 2.0);
        h += m.betas[i] * static_cast<double>(count(x, m.patterns[i])) / norm;
    }
    return h;
}

std::vector<double> gibbs(const Model& m, int n) {
    const std::size_t states = std::size_t{1} << pairs(n).size();
    std::vector<double> w(states);
    double z = 0;
    for (std::size_t s = 0; s < states; ++s) {
        w[s] = std::exp(hamiltonian(m, graph_from_bits(n, s)));
        z += w[s];
    }
    for (auto& x : w) x /= z;
    return w;
}

Matrix transition_matrix(const Model& m, int n, bool metropolis) {
    if (n > 4) throw std::invalid_argument("oracle: transition matrix limited to n <= 4");
    const std::size_t c = pairs(n).size();
    const std::size_t states = std::size_t{1} << c;
    std::vector<double> h(states);
    for (std::size_t s = 0; s < states; ++s) h[s] = hamiltonian(m, graph_from_bits(n, s));
    Matrix p(states, std::vector<double>(states, 0.0));
    const double pick = 1.0 / static_cast<double>(c);
    for (std::size_t s = 0; s < states; ++s) {
        for (std::size_t k = 0; k < c; ++k) {
            const std::size_t on = s | (std::size_t{1} << k);
            const std::size_t off = s & ~(std::size_t{1} << k);
            if (metropolis) {
                const std::size_t t = s ^ (std::size_t{1} << k);
                const double a = std::min(1.0, std::exp(h[t] - h[s]));
                p[s][t] += pick * a;
                p[s][s] += pick * (1 - a);
            } else {
                const double q = 1.0 / (1.0 + std::exp(-(h[on] - h[off])));
                p[s][on] += pick * q;
                p[s][off] += pick * (1 - q);
            }
        }
    }
    return p;
}

}  // namespace oracle
