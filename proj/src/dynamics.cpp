#include "ergm/dynamics.hpp"

#include <cmath>
#include <stdexcept>

#include "ergm/subgraph_counts.hpp"

namespace ergm {

namespace {

double sigmoid(double x) {
    if (x >= 0) return 1.0 / (1.0 + std::exp(-x));
    const double e = std::exp(x);
    return e / (1.0 + e);
}

void check_graph(const ContextPtr& ctx, const GraphState& g) {
    if (!ctx) throw std::invalid_argument("chain needs a model context");
    if (g.n() != ctx->n()) throw std::invalid_argument("initial graph size does not match the model binding");
}

}  // namespace

ContextPtr make_context(const ModelSpec& spec, std::size_t n) { return std::make_shared<const ChainContext>(spec, n); }

ChainState::ChainState(ContextPtr ctx, GraphState initial, std::uint64_t seed, Kernel k)
    : context(std::move(ctx)), graph(std::move(initial)), rng(seed), kernel(k) {
    check_graph(context, graph);
}

StepOutcome glauber_step(ChainState& s) {
    const auto& ctx = *s.context;
    const std::size_t k = ctx.edges.size() == 0 ? 0 : s.rng.below(ctx.edges.size());
    const double u = s.rng.uniform();
    ++s.step_count;
    if (ctx.edges.size() == 0) return {0, false, false};
    const auto [a, b] = ctx.edges.endpoints(k);
    const bool value = u < sigmoid(ctx.model.local_field_raw(s.graph, a, b));
    const bool changed = s.graph.set_edge_raw(a, b, value);
    return {k, value, changed};
}

StepOutcome metropolis_step(ChainState& s) {
    const auto& ctx = *s.context;
    const std::size_t k = ctx.edges.size() == 0 ? 0 : s.rng.below(ctx.edges.size());
    const double u = s.rng.uniform();
    ++s.step_count;
    if (ctx.edges.size() == 0) return {0, false, false};
    const auto [a, b] = ctx.edges.endpoints(k);
    const bool current = s.graph.has_edge_raw(a, b);
    const double field = ctx.model.local_field_raw(s.graph, a, b);
    const double delta = current ? -field : field;
    const bool accept = delta >= 0.0 || u < std::exp(delta);
    if (!accept) return {k, current, false};
    s.graph.set_edge_raw(a, b, !current);
    return {k, !current, true};
}

StepOutcome step(ChainState& s) { return s.kernel == Kernel::Glauber ? glauber_step(s) : metropolis_step(s); }

void advance(ChainState& s, std::uint64_t steps) {
    if (s.kernel == Kernel::Glauber) {
        for (std::uint64_t t = 0; t < steps; ++t) glauber_step(s);
    } else {
        for (std::uint64_t t = 0; t < steps; ++t) metropolis_step(s);
    }
}

CoupledPair::CoupledPair(ContextPtr ctx, GraphState up, GraphState low, std::uint64_t seed)
    : context(std::move(ctx)), upper(std::move(up)), lower(std::move(low)), rng(seed) {
    check_graph(context, upper);
    check_graph(context, lower);
    if (!is_subconfiguration(lower, upper)) throw std::invalid_argument("coupled pair requires lower <= upper");
    distance = hamming_distance(upper, lower);
    if (distance == 0) coupled_at = 0;
}

void coupled_step(CoupledPair& p) {
    const auto& ctx = *p.context;
    const std::size_t k = ctx.edges.size() == 0 ? 0 : p.rng.below(ctx.edges.size());
    const double u = p.rng.uniform();
    ++p.step_count;
    if (ctx.edges.size() == 0) return;
    const auto [a, b] = ctx.edges.endpoints(k);
    const bool differed = p.upper.has_edge_raw(a, b) != p.lower.has_edge_raw(a, b);
    bool up_value, low_value;
    if (p.distance == 0) {
        up_value = low_value = u < sigmoid(ctx.model.local_field_raw(p.upper, a, b));
    } else {
        up_value = u < sigmoid(ctx.model.local_field_raw(p.upper, a, b));
        low_value = u < sigmoid(ctx.model.local_field_raw(p.lower, a, b));
    }
    if (low_value && !up_value) {
        throw std::logic_error("monotone coupling order violated at step " + std::to_string(p.step_count) +
                               " (non-ferromagnetic model?)");
    }
    p.upper.set_edge_raw(a, b, up_value);
    p.lower.set_edge_raw(a, b, low_value);
    const bool differs = up_value != low_value;
    if (differed && !differs) --p.distance;
    else if (!differed && differs) ++p.distance;
    if (p.distance == 0 && !p.coupled_at) p.coupled_at = p.step_count;
}

CouplingResult coupling_time(const ContextPtr& ctx, std::uint64_t max_steps, std::uint64_t seed) {
    if (max_steps < 1) throw std::invalid_argument("coupling_time: max_steps must be at least 1");
    const std::size_t n = ctx->n();
    CoupledPair pair(ctx, GraphState::complete(n), GraphState::empty(n), seed);
    while (!pair.coupled_at && pair.step_count < max_steps) coupled_step(pair);
    return {n, pair.coupled_at, max_steps, seed};
}

CouplingResult coupling_time(const ModelSpec& spec, std::size_t n, std::uint64_t max_steps, std::uint64_t seed) {
    return coupling_time(make_context(spec, n), max_steps, seed);
}

std::uint64_t default_max_coupling_steps(std::size_t n) {
    const double nn = static_cast<double>(n);
    return static_cast<std::uint64_t>(std::ceil(50.0 * nn * nn * std::log(std::max(nn, 2.0))));
}

std::string to_string(Observable o) {
    switch (o) {
        case Observable::EdgeDensity: return "edge_density";
        case Observable::Hamiltonian: return "hamiltonian";
        case Observable::RMax: return "r_max";
        case Observable::RMin: return "r_min";
    }
    return "?";
}

TraceTable run_trace(ChainState& s, std::uint64_t steps, const std::vector<Observable>& observables,
                     std::uint64_t thin, const std::vector<SubgraphPattern>& r_patterns) {
    if (thin < 1) throw std::invalid_argument("run_trace: thin must be at least 1");
    bool needs_r = false;
    for (auto o : observables) needs_r |= (o == Observable::RMax || o == Observable::RMin);
    if (needs_r && r_patterns.empty()) throw std::invalid_argument("run_trace: r observables need patterns");

    TraceTable t;
    t.columns.push_back("step");
    for (auto o : observables) t.columns.push_back(to_string(o));
    auto record = [&] {
        std::vector<double> row{static_cast<double>(s.step_count)};
        std::optional<RExtremes> r;
        for (auto o : observables) {
            switch (o) {
                case Observable::EdgeDensity: row.push_back(s.graph.density()); break;
                case Observable::Hamiltonian: row.push_back(s.context->model.hamiltonian(s.graph)); break;
                case Observable::RMax:
                case Observable::RMin:
                    if (!r) r = r_extremes(s.graph, r_patterns);
                    row.push_back(o == Observable::RMax ? r->r_max : r->r_min);
                    break;
            }
        }
        t.rows.push_back(std::move(row));
    };
    record();
    for (std::uint64_t done = 0; done + thin <= steps; done += thin) {
        advance(s, thin);
        record();
    }
    advance(s, steps % thin);
    return t;
}

}  // namespace ergm
