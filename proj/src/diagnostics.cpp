#include "ergm/diagnostics.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "ergm/subgraph_counts.hpp"

namespace ergm {

namespace {

std::vector<double> bernoulli_product(std::size_t k, double p) {
    std::vector<double> ref(std::size_t{1} << k);
    for (std::size_t a = 0; a < ref.size(); ++a) {
        const int ones = std::popcount(a);
        ref[a] = std::pow(p, ones) * std::pow(1.0 - p, static_cast<double>(k) - ones);
    }
    return ref;
}

double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
    double m = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
    return m;
}

double mean(const std::vector<double>& v) {
    return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double variance(const std::vector<double>& v) {
    if (v.size() < 2) return 0.0;
    const double m = mean(v);
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
}

double falling(std::size_t n, std::size_t k) {
    double out = 1.0;
    for (std::size_t i = 0; i < k; ++i) out *= static_cast<double>(n - i);
    return out;
}

}  // namespace

GraphState sample_erdos_renyi(std::size_t n, double p, Rng& rng) {
    if (!(p >= 0.0 && p <= 1.0)) throw std::domain_error("sample_erdos_renyi: p must lie in [0, 1]");
    GraphState g(n);
    for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = a + 1; b < n; ++b)
            if (rng.uniform() < p) g.set_edge_raw(a, b, true);
    return g;
}

double resolve_p_star(const ModelSpec& m, std::optional<double> requested) {
    if (requested) {
        if (!(*requested > 0.0 && *requested < 1.0)) throw std::invalid_argument("p_star must lie in (0, 1)");
        return *requested;
    }
    const auto report = classify(m);
    if (report.classification != Phase::HighTemperature) {
        throw std::invalid_argument("model is " + to_string(report.classification) +
                                    "; select the fixed point to compare against explicitly");
    }
    return report.fixed_points.front().p_star;
}

// ---------------------------------------------------------------------------

bool BurnInTrace::inside(const BurnInRow& r) const {
    return std::max(std::abs(r.r_max - p_star), std::abs(r.r_min - p_star)) < epsilon;
}

bool BurnInTrace::stays_inside_from(std::uint64_t from_step) const {
    bool any = false;
    for (const auto& r : rows) {
        if (r.step < from_step) continue;
        any = true;
        if (!inside(r)) return false;
    }
    return any;
}

BurnInTrace burn_in_trace(const ModelSpec& m, const GraphState& start, const BurnInOptions& opts) {
    std::vector<SubgraphPattern> tracked;
    for (const auto& g : m.patterns())
        if (g.edge_count() >= 2) tracked.push_back(g);
    for (const auto& g : opts.extra_patterns) {
        if (g.edge_count() < 2) {
            throw std::invalid_argument("burn_in_trace: pattern '" + g.name() + "' has fewer than two edges");
        }
        tracked.push_back(g);
    }
    if (tracked.empty()) throw std::invalid_argument("burn_in_trace: no pattern with at least two edges to track");

    BurnInTrace trace;
    trace.p_star = resolve_p_star(m, opts.p_star);
    trace.epsilon = opts.epsilon;
    for (const auto& g : tracked) trace.tracked_patterns.push_back(g.name());

    ChainState chain(make_context(m, start.n()), start, opts.seed);
    const auto table = run_trace(chain, opts.steps, {Observable::RMax, Observable::RMin, Observable::EdgeDensity},
                                 opts.thin, tracked);
    for (const auto& row : table.rows) {
        BurnInRow r{static_cast<std::uint64_t>(row[0]), row[1], row[2], row[3]};
        trace.rows.push_back(r);
        if (!trace.first_entry_step && trace.inside(r)) trace.first_entry_step = r.step;
    }
    return trace;
}

// ---------------------------------------------------------------------------

std::vector<IndependenceReport> independence_test(const ModelSpec& m, std::size_t n,
                                                  const std::vector<std::vector<EdgeId>>& edge_sets,
                                                  const IndependenceOptions& opts) {
    if (opts.samples < 1000) throw std::invalid_argument("independence_test: at least 1000 samples required");
    for (const auto& set : edge_sets) {
        if (set.empty() || set.size() > 6) throw std::invalid_argument("independence_test: tuples need 1 to 6 edges");
        for (const auto& e : set)
            if (e.second() > n) throw std::out_of_range("independence_test: edge outside the vertex set");
    }
    const double p_star = resolve_p_star(m, opts.p_star);
    const std::uint64_t nn = static_cast<std::uint64_t>(n) * n;
    const std::uint64_t gap = opts.gap_steps ? opts.gap_steps : nn;
    const std::uint64_t burn = opts.burn_in_steps ? opts.burn_in_steps : 10 * nn;

    Rng init(Rng::splitmix64(opts.seed ^ 0x1d3a5eedULL));
    ChainState chain(make_context(m, n), sample_erdos_renyi(n, p_star, init), opts.seed);
    advance(chain, burn);

    std::vector<std::vector<std::uint64_t>> counts;
    for (const auto& set : edge_sets) counts.emplace_back(std::size_t{1} << set.size(), 0);
    for (std::uint64_t s = 0; s < opts.samples; ++s) {
        advance(chain, gap);
        for (std::size_t t = 0; t < edge_sets.size(); ++t) {
            std::size_t a = 0;
            for (std::size_t i = 0; i < edge_sets[t].size(); ++i)
                if (chain.graph.has_edge(edge_sets[t][i])) a |= std::size_t{1} << i;
            ++counts[t][a];
        }
    }

    std::vector<IndependenceReport> out;
    for (std::size_t t = 0; t < edge_sets.size(); ++t) {
        IndependenceReport r;
        r.edges = edge_sets[t];
        r.p_star = p_star;
        r.samples = opts.samples;
        for (auto c : counts[t]) r.joint.push_back(static_cast<double>(c) / static_cast<double>(opts.samples));
        r.reference = bernoulli_product(r.edges.size(), p_star);
        r.max_abs_deviation = max_abs_diff(r.joint, r.reference);
        out.push_back(std::move(r));
    }
    return out;
}

IndependenceReport exact_independence(const ExactDistribution& d, const std::vector<EdgeId>& edges, double p_star) {
    IndependenceReport r;
    r.edges = edges;
    r.p_star = p_star;
    r.joint = exact_joint(d, edges);
    r.reference = bernoulli_product(edges.size(), p_star);
    r.max_abs_deviation = max_abs_diff(r.joint, r.reference);
    return r;
}

double exact_marginal_product_deviation(const ExactDistribution& d, const std::vector<EdgeId>& edges) {
    const auto joint = exact_joint(d, edges);
    std::vector<double> marg;
    for (const auto& e : edges) marg.push_back(exact_edge_marginal(d, e));
    std::vector<double> prod(joint.size());
    for (std::size_t a = 0; a < joint.size(); ++a) {
        double p = 1.0;
        for (std::size_t i = 0; i < edges.size(); ++i) p *= ((a >> i) & 1u) ? marg[i] : 1.0 - marg[i];
        prod[a] = p;
    }
    return max_abs_diff(joint, prod);
}

// ---------------------------------------------------------------------------

HysteresisReport hysteresis_probe(const ModelSpec& m, const HysteresisOptions& opts) {
    if (opts.n < 2) throw std::invalid_argument("hysteresis_probe: n must be at least 2");
    if (opts.seeds.empty()) throw std::invalid_argument("hysteresis_probe: no seeds");
    HysteresisReport r;
    const auto phase = classify(m);
    r.phase = phase.classification;
    r.warning = phase.classification != Phase::LowTemperature;

    const auto attracting = phase.attracting();
    if (attracting.size() >= 2) {
        for (const auto& fp : phase.fixed_points) {
            if (fp.stability == Stability::Repelling && fp.p_star > attracting.front().p_star &&
                fp.p_star < attracting.back().p_star) {
                r.separatrix = fp.p_star;
                break;
            }
        }
    }

    const auto ctx = make_context(m, opts.n);
    const std::uint64_t interval = opts.check_interval ? opts.check_interval : pair_count(opts.n);
    std::size_t crossings = 0;
    for (std::uint64_t seed : opts.seeds) {
        for (int from_complete = 0; from_complete < 2; ++from_complete) {
            GraphState start = from_complete ? GraphState::complete(opts.n) : GraphState::empty(opts.n);
            // Distinct streams for the two starts of one seed.
            ChainState chain(ctx, std::move(start), Rng::splitmix64(seed) + static_cast<std::uint64_t>(from_complete));
            bool crossed = false;
            std::uint64_t done = 0;
            while (done < opts.steps) {
                const std::uint64_t chunk = std::min(interval, opts.steps - done);
                advance(chain, chunk);
                done += chunk;
                if (r.separatrix) {
                    const double dens = chain.graph.density();
                    crossed |= from_complete ? dens < *r.separatrix : dens > *r.separatrix;
                }
            }
            if (crossed) ++crossings;
            (from_complete ? r.final_from_complete : r.final_from_empty).push_back(chain.graph.density());
        }
    }
    r.mean_from_empty = mean(r.final_from_empty);
    r.mean_from_complete = mean(r.final_from_complete);
    const double pooled = std::sqrt(0.5 * (variance(r.final_from_empty) + variance(r.final_from_complete)));
    const double diff = r.mean_from_complete - r.mean_from_empty;
    r.separation = pooled > 0.0 ? diff / pooled : (diff == 0.0 ? 0.0 : std::copysign(INFINITY, diff));
    if (r.separatrix) r.crossings = crossings;
    return r;
}

// ---------------------------------------------------------------------------

bool PseudoRandomReport::all_pass() const {
    return std::all_of(checks.begin(), checks.end(), [](const PseudoRandomCheck& c) { return c.pass; });
}

bool PseudoRandomReport::property_passes(int property) const {
    return std::all_of(checks.begin(), checks.end(),
                       [&](const PseudoRandomCheck& c) { return c.property != property || c.pass; });
}

PseudoRandomReport pseudo_random_check(const GraphState& x, double p, const PseudoRandomOptions& opts) {
    if (!(p > 0.0 && p < 1.0)) throw std::domain_error("pseudo_random_check: p must lie in (0, 1)");
    const std::size_t n = x.n();
    const double tol = opts.tolerance;
    const double nd = static_cast<double>(n);
    const double m = static_cast<double>(x.edge_count());
    const double expected_edges = p * static_cast<double>(pair_count(n));
    PseudoRandomReport rep;

    auto relative = [&](std::string name, int prop, std::string formula, double observed, double predicted) {
        const bool pass = std::abs(observed - predicted) <= tol * predicted;
        rep.checks.push_back({std::move(name), prop, std::move(formula), observed, predicted, tol, pass});
    };

    // Property 1: induced counts of every graph on l vertices.
    auto patterns = opts.induced_patterns.empty() ? all_nonempty_graphs(4) : opts.induced_patterns;
    for (const auto& g : patterns) {
        const std::size_t l = g.vertex_count();
        const double e = static_cast<double>(g.edge_count());
        const double non = static_cast<double>(l * (l - 1) / 2) - e;
        const double predicted = falling(n, l) * std::pow(p, e) * std::pow(1.0 - p, non);
        relative("induced_count:" + g.name(), 1, "N*_G(X) ~ (n)_l p^|E| (1-p)^(C(l,2)-|E|)",
                 static_cast<double>(count_induced_global(x, g)), predicted);
    }

    // Property 2: edge count and the two leading adjacency eigenvalues.
    rep.spectrum = adjacency_spectrum(x, opts.spectral);
    {
        const double floor = (1.0 - tol) * p * nd * nd / 2.0;
        rep.checks.push_back({"edge_count_lower", 2, "N_edges(X) >= (1-tol) n^2 p / 2", m, p * nd * nd / 2.0, tol,
                              m >= floor});
        relative("lambda1", 2, "lambda_1 ~ n p", rep.spectrum.lambda1, nd * p);
        const double l2 = std::abs(rep.spectrum.lambda2);
        rep.checks.push_back({"lambda2", 2, "|lambda_2| <= tol n", l2, 0.0, tol, l2 <= tol * nd});
    }

    // Property 3: edges inside sampled vertex subsets.
    {
        Rng rng(opts.seed);
        std::vector<std::size_t> order(n);
        const std::size_t sizes[3] = {n / 4, n / 2, 3 * n / 4};
        double worst = 0.0;
        double worst_observed = 0.0, worst_predicted = 0.0;
        std::size_t failures = 0;
        for (std::size_t s = 0; s < opts.subset_samples; ++s) {
            const std::size_t size = sizes[s % 3];
            if (size < 2) continue;
            std::iota(order.begin(), order.end(), 0);
            for (std::size_t i = 0; i < size; ++i) std::swap(order[i], order[i + rng.below(n - i)]);
            std::size_t inside = 0;
            for (std::size_t i = 0; i < size; ++i)
                for (std::size_t j = i + 1; j < size; ++j) inside += x.has_edge_raw(order[i], order[j]);
            const double predicted = p * static_cast<double>(size * (size - 1) / 2);
            const double dev = std::abs(static_cast<double>(inside) - predicted) / predicted;
            if (dev > tol) ++failures;
            if (dev >= worst) {
                worst = dev;
                worst_observed = static_cast<double>(inside);
                worst_predicted = predicted;
            }
        }
        rep.checks.push_back({"subset_edges_worst", 3, "E(H_X(U)) ~ p C(|U|,2) over sampled U", worst_observed,
                              worst_predicted, tol, failures == 0});
        rep.subset_note = std::to_string(opts.subset_samples) +
                          " random subsets of sizes n/4, n/2, 3n/4 checked (not all subsets); " +
                          std::to_string(failures) + " outside tolerance";
    }

    // Property 4: edge count and even cycle counts.
    relative("edge_count", 4, "N_edges(X) ~ p C(n,2)", m, expected_edges);
    for (std::size_t l : opts.cycle_lengths) {
        if (l < 4 || l % 2 != 0) throw std::invalid_argument("pseudo_random_check: cycle lengths must be even and >= 4");
        const double observed = static_cast<double>(count_global(x, SubgraphPattern::cycle(l)));
        const double bound = std::pow(nd * p, static_cast<double>(l));
        rep.checks.push_back({"cycle_count:C" + std::to_string(l), 4, "N_{C_l}(X) <= (1+tol) (n p)^l", observed, bound,
                              tol, observed <= (1.0 + tol) * bound});
    }
    return rep;
}

}  // namespace ergm
