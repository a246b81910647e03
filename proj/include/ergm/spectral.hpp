#pragma once

#include <cstdint>

#include "ergm/graph.hpp"

namespace ergm {

struct SpectralOptions {
    double tol = 1e-8;
    std::size_t max_iterations = 10000;
    std::uint64_t seed = 0x5eed;
};

/// Extreme adjacency eigenvalues from matrix-free power iteration.
///
/// The adjacency matrix A is shifted by its maximum degree d so that both
/// A + dI and dI - A are positive semidefinite; power iteration with
/// deflation (re-orthogonalisation against converged vectors) on each gives
/// the two largest and the two smallest eigenvalues of A. The two eigenvalues
/// of largest magnitude are among those four.
struct SpectralEstimate {
    double lambda1 = 0.0;  // largest |lambda|
    double lambda2 = 0.0;  // second largest |lambda|
    double largest = 0.0;
    double second_largest = 0.0;
    double smallest = 0.0;
    double second_smallest = 0.0;
    std::size_t iterations = 0;  // total over all runs
    bool converged = true;
};

SpectralEstimate adjacency_spectrum(const GraphState& x, const SpectralOptions& opts = {});

}  // namespace ergm
