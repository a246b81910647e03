#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ergm/graph.hpp"
#include "ergm/model.hpp"
#include "ergm/rng.hpp"

namespace ergm {

enum class Kernel { Glauber, Metropolis };

/// Shared read-only data for chains on a fixed (model, n).
struct ChainContext {
    ModelInstance model;
    EdgeTable edges;

    ChainContext(ModelSpec spec, std::size_t n) : model(std::move(spec), n), edges(n) {}
    std::size_t n() const noexcept { return model.n(); }
};

using ContextPtr = std::shared_ptr<const ChainContext>;
ContextPtr make_context(const ModelSpec& spec, std::size_t n);

/// One single-site chain X(t).
struct ChainState {
    ChainState(ContextPtr ctx, GraphState initial, std::uint64_t seed, Kernel kernel = Kernel::Glauber);

    ContextPtr context;
    GraphState graph;
    std::uint64_t step_count = 0;
    Rng rng;
    Kernel kernel;
};

struct StepOutcome {
    std::size_t edge_index;
    bool present;   // x_e after the step
    bool changed;
};

// Every step consumes exactly one edge draw followed by exactly one uniform,
// whether or not the state changes.

/// Heat-bath update: pick e uniformly, set x_e = 1 iff u < sigma(d_e H(X)).
StepOutcome glauber_step(ChainState& s);
/// Single-edge flip proposal accepted with probability min(1, exp(dH)).
StepOutcome metropolis_step(ChainState& s);
/// Dispatches on s.kernel.
StepOutcome step(ChainState& s);
void advance(ChainState& s, std::uint64_t steps);

/// Two Glauber chains driven by the same edge draw and the same uniform.
/// Started ordered (lower <= upper), the order is preserved for
/// ferromagnetic models; once equal, the chains move together.
struct CoupledPair {
    CoupledPair(ContextPtr ctx, GraphState upper, GraphState lower, std::uint64_t seed);

    ContextPtr context;
    GraphState upper;
    GraphState lower;
    Rng rng;
    std::uint64_t step_count = 0;
    std::size_t distance;                     // Hamming distance, maintained incrementally
    std::optional<std::uint64_t> coupled_at;  // first step count with distance 0
};

/// Throws std::logic_error if the update would break lower <= upper.
void coupled_step(CoupledPair& p);

struct CouplingResult {
    std::size_t n;
    std::optional<std::uint64_t> coalescence_step;  // empty on timeout
    std::uint64_t max_steps;
    std::uint64_t seed;

    bool timed_out() const noexcept { return !coalescence_step.has_value(); }
};

/// Runs the coupled pair from (complete, empty) until the graphs agree or
/// max_steps have elapsed. A timeout is reported as a value.
CouplingResult coupling_time(const ModelSpec& spec, std::size_t n, std::uint64_t max_steps, std::uint64_t seed);
CouplingResult coupling_time(const ContextPtr& ctx, std::uint64_t max_steps, std::uint64_t seed);

/// 50 n^2 ln n.
std::uint64_t default_max_coupling_steps(std::size_t n);

enum class Observable { EdgeDensity, Hamiltonian, RMax, RMin };
std::string to_string(Observable o);

struct TraceTable {
    std::vector<std::string> columns;         // "step" then one per observable
    std::vector<std::vector<double>> rows;
};

/// Advances the chain exactly `steps` steps, recording the observables at
/// step 0 and then every `thin` steps: floor(steps/thin) + 1 rows. RMax/RMin
/// use `r_patterns`, which must all have at least two edges.
TraceTable run_trace(ChainState& s, std::uint64_t steps, const std::vector<Observable>& observables,
                     std::uint64_t thin, const std::vector<SubgraphPattern>& r_patterns = {});

}  // namespace ergm
