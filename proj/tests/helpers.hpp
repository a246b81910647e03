#pragma once

#include <random>

#include "ergm/graph.hpp"

namespace testing {

inline ergm::GraphState random_graph(std::size_t n, double p, std::mt19937_64& gen) {
    std::bernoulli_distribution coin(p);
    ergm::GraphState g(n);
    for (std::size_t i = 1; i <= n; ++i)
        for (std::size_t j = i + 1; j <= n; ++j)
            if (coin(gen)) g.set_edge(i, j, true);
    return g;
}

inline std::pair<std::size_t, std::size_t> random_pair(std::size_t n, std::mt19937_64& gen) {
    std::uniform_int_distribution<std::size_t> pick(1, n);
    std::size_t a = pick(gen), b = pick(gen);
    while (b == a) b = pick(gen);
    return {std::min(a, b), std::max(a, b)};
}

}  // namespace testing
