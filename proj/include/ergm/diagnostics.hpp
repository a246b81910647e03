#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ergm/dynamics.hpp"
#include "ergm/graph.hpp"
#include "ergm/model.hpp"
#include "ergm/phase.hpp"
#include "ergm/rng.hpp"
#include "ergm/spectral.hpp"

namespace ergm {

/// G(n, p) sample: each pair present independently with probability p,
/// drawing one uniform per pair in linear edge order.
GraphState sample_erdos_renyi(std::size_t n, double p, Rng& rng);

/// The fixed point diagnostics compare against. Uses the unique fixed point
/// in the high temperature phase; otherwise the caller must name one, and
/// this throws std::invalid_argument.
double resolve_p_star(const ModelSpec& m, std::optional<double> requested);

// ---------------------------------------------------------------------------
// Burn-in

struct BurnInRow {
    std::uint64_t step;
    double r_max;
    double r_min;
    double edge_density;
};

struct BurnInTrace {
    std::vector<BurnInRow> rows;
    std::vector<std::string> tracked_patterns;
    double p_star = 0.0;
    double epsilon = 0.0;
    /// First recorded step with max(|r_max - p*|, |r_min - p*|) < epsilon.
    std::optional<std::uint64_t> first_entry_step;

    bool inside(const BurnInRow& r) const;
    /// True iff every row at or after `from_step` is inside the band.
    bool stays_inside_from(std::uint64_t from_step) const;
};

struct BurnInOptions {
    std::uint64_t steps = 0;
    std::uint64_t thin = 1;
    double epsilon = 0.05;
    std::optional<double> p_star;
    std::vector<SubgraphPattern> extra_patterns;
    std::uint64_t seed = 1;
};

/// Runs Glauber dynamics from `start` and records r extremes (over the model
/// patterns with at least two edges plus `extra_patterns`) and edge density.
BurnInTrace burn_in_trace(const ModelSpec& m, const GraphState& start, const BurnInOptions& opts);

// ---------------------------------------------------------------------------
// Edge independence

struct IndependenceReport {
    std::vector<EdgeId> edges;
    std::vector<double> joint;      // entry a: bit i is a_i
    std::vector<double> reference;  // prod p*^{a_i} (1-p*)^{1-a_i}
    double p_star = 0.0;
    double max_abs_deviation = 0.0;
    std::uint64_t samples = 0;      // 0 for exact reports
};

struct IndependenceOptions {
    std::uint64_t samples = 1000;
    std::uint64_t gap_steps = 0;        // 0: n^2
    std::uint64_t burn_in_steps = 0;    // 0: 10 n^2
    std::optional<double> p_star;
    std::uint64_t seed = 1;
};

/// Empirical joint law of each edge tuple over states taken every gap_steps
/// after burn-in on one Glauber chain started from G(n, p*). Every tuple is
/// read from the same retained states. Throws for tuples of more than 6 edges
/// or fewer than 1000 samples.
std::vector<IndependenceReport> independence_test(const ModelSpec& m, std::size_t n,
                                                  const std::vector<std::vector<EdgeId>>& edge_sets,
                                                  const IndependenceOptions& opts);

/// The same comparison from an exact distribution table.
IndependenceReport exact_independence(const ExactDistribution& d, const std::vector<EdgeId>& edges, double p_star);
/// Deviation of the exact joint law from the product of its exact marginals.
double exact_marginal_product_deviation(const ExactDistribution& d, const std::vector<EdgeId>& edges);

// ---------------------------------------------------------------------------
// Metastability

struct HysteresisOptions {
    std::size_t n = 0;
    std::uint64_t steps = 0;
    std::vector<std::uint64_t> seeds;
    /// Density is inspected every check_interval steps (0: C(n,2)).
    std::uint64_t check_interval = 0;
};

struct HysteresisReport {
    Phase phase;
    bool warning = false;                 // model not in the low temperature phase
    std::vector<double> final_from_empty;
    std::vector<double> final_from_complete;
    double mean_from_empty = 0.0;
    double mean_from_complete = 0.0;
    double separation = 0.0;              // (mean_c - mean_e) / pooled sd
    /// Density level splitting the two basins (repelling fixed point), when
    /// the model has one.
    std::optional<double> separatrix;
    /// Chains that were ever observed on the far side of the separatrix.
    std::optional<std::size_t> crossings;
};

/// Runs one chain from the empty graph and one from the complete graph per
/// seed and compares where they settle.
HysteresisReport hysteresis_probe(const ModelSpec& m, const HysteresisOptions& opts);

// ---------------------------------------------------------------------------
// Weak pseudo-randomness

struct PseudoRandomCheck {
    std::string name;
    int property;          // 1..4
    std::string formula;
    double observed;
    double predicted;
    double tolerance;
    bool pass;
};

struct PseudoRandomOptions {
    double tolerance = 0.10;
    /// Patterns for the induced-count property; empty means every graph
    /// with at least one edge on 4 vertices.
    std::vector<SubgraphPattern> induced_patterns;
    std::vector<std::size_t> cycle_lengths{4};
    std::size_t subset_samples = 100;
    std::uint64_t seed = 1;
    SpectralOptions spectral;
};

struct PseudoRandomReport {
    std::vector<PseudoRandomCheck> checks;
    SpectralEstimate spectrum;
    std::string subset_note;
    bool all_pass() const;
    bool property_passes(int property) const;
};

/// Finite-n instantiation of four weak pseudo-randomness properties at
/// density p. "o(1)" and "o(n^k)" terms become relative tolerances against
/// the G(n,p) expectation; the subset property samples subsets of sizes
/// n/4, n/2 and 3n/4 instead of enumerating all of them.
PseudoRandomReport pseudo_random_check(const GraphState& x, double p, const PseudoRandomOptions& opts = {});

}  // namespace ergm
