// Acceptance suite: one PASS/FAIL line per criterion.
//
//   ergm_acceptance            run all criteria
//   ergm_acceptance 3 5        run the listed criteria
//
// Exit status is 0 iff every selected criterion passed.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <unistd.h>

#include "chain_matrix.hpp"
#include "helpers.hpp"
#include "json.hpp"
#include "oracle/oracle.hpp"

#include "ergm/diagnostics.hpp"
#include "ergm/dynamics.hpp"
#include "ergm/experiment.hpp"
#include "ergm/model.hpp"
#include "ergm/phase.hpp"
#include "ergm/subgraph_counts.hpp"

using namespace ergm;

namespace {

struct Outcome {
    bool pass;
    std::string detail;
};

std::string fmt(const char* f, double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, v);
    return buf;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<SubgraphPattern> patterns_up_to_4() {
    std::vector<SubgraphPattern> out;
    for (std::size_t v = 2; v <= 4; ++v)
        for (auto& p : all_nonempty_graphs(v)) out.push_back(p);
    return out;
}

// ---------------------------------------------------------------------------
// Parameter points, located by scanning the edge+triangle plane with the
// phase classifier.

struct Point {
    double beta1, beta2;
    PhaseReport report;
};

const std::vector<Point>& scan_plane() {
    static std::vector<Point> cache;
    if (!cache.empty()) return cache;
    for (int i = 0; i <= 60; ++i) {
        const double b1 = -3.0 + 0.05 * i;
        for (int j = 1; j <= 30; ++j) {
            const double b2 = 0.1 * j;
            cache.push_back({b1, b2, classify(ModelSpec::edge_triangle(b1, b2))});
        }
    }
    return cache;
}

// High temperature with p* closest to 1/2 and a clearly sub-critical slope;
// ties go to the stronger interaction.
Point high_temperature_point() {
    const Point* best = nullptr;
    double best_score = 1e9;
    for (const auto& p : scan_plane()) {
        if (p.report.classification != Phase::HighTemperature) continue;
        const auto& fp = p.report.fixed_points.front();
        if (fp.phi_derivative > 0.5) continue;
        const double score = std::abs(fp.p_star - 0.5) - 1e-6 * p.beta2;
        if (score < best_score) best_score = score, best = &p;
    }
    if (!best) throw std::runtime_error("no high temperature point found");
    return *best;
}

// Low temperature with three simple roots, maximising the smallest spacing
// between adjacent fixed points.
Point low_temperature_point() {
    const Point* best = nullptr;
    double best_gap = -1;
    for (const auto& p : scan_plane()) {
        if (p.report.classification != Phase::LowTemperature || p.report.fixed_points.size() != 3) continue;
        const auto& f = p.report.fixed_points;
        const double gap = std::min(f[1].p_star - f[0].p_star, f[2].p_star - f[1].p_star);
        if (gap > best_gap) best_gap = gap, best = &p;
    }
    if (!best) throw std::runtime_error("no low temperature point found");
    return *best;
}

std::string describe(const Point& p) {
    std::string s = "beta=(" + fmt("%.2f", p.beta1) + "," + fmt("%.2f", p.beta2) + ") p*=";
    for (std::size_t i = 0; i < p.report.fixed_points.size(); ++i)
        s += (i ? "/" : "") + fmt("%.4f", p.report.fixed_points[i].p_star);
    return s;
}

// ---------------------------------------------------------------------------

Outcome criterion1() {
    const auto t0 = std::chrono::steady_clock::now();
    std::mt19937_64 gen(20240101);
    const auto pats = patterns_up_to_4();
    std::size_t cases = 0, mismatches = 0;
    while (cases < 600) {
        const std::size_t n = 4 + gen() % 5;
        const double p = 0.15 + 0.7 * static_cast<double>(gen() % 1000) / 1000.0;
        const auto x = testing::random_graph(n, p, gen);
        const auto& g = pats[gen() % pats.size()];
        auto [i, j] = testing::random_pair(n, gen);
        auto [k, l] = testing::random_pair(n, gen);
        if (i == k && j == l) continue;
        const auto e = EdgeId::from_vertices(n, i, j), e2 = EdgeId::from_vertices(n, k, l);
        mismatches += count_global(x, g) != oracle::count(x, g);
        mismatches += count_at_edge(x, g, e) != oracle::count_at_edge(x, g, int(i), int(j));
        mismatches += count_at_edge_pair(x, g, e, e2) !=
                      oracle::count_at_edge_pair(x, g, int(i), int(j), int(k), int(l));
        mismatches += count_induced_global(x, g) != oracle::count_induced(x, g);
        ++cases;
    }
    const double secs = seconds_since(t0);
    return {mismatches == 0 && secs < 60,
            std::to_string(cases) + " cases x 4 counts, " + std::to_string(mismatches) + " mismatches, " +
                fmt("%.1fs", secs) + " (limit 60s)"};
}

Outcome criterion2() {
    std::size_t checks = 0, mismatches = 0;
    for (const auto& g : patterns_up_to_4()) {
        for (std::size_t n = 4; n <= 7; ++n) {
            const auto kn = GraphState::complete(n);
            mismatches += complete_graph_count(n, g) != oracle::count(kn, g);
            ++checks;
            for (std::size_t k = 0; k < pair_count(n); ++k) {
                const auto e = EdgeId::from_index(n, k);
                mismatches += complete_graph_count_at_edge(n, g) !=
                              oracle::count_at_edge(kn, g, int(e.first()), int(e.second()));
                ++checks;
            }
        }
    }
    return {mismatches == 0, std::to_string(checks) + " closed-form comparisons, " + std::to_string(mismatches) +
                                 " mismatches"};
}

Outcome criterion3() {
    std::mt19937_64 gen(31337);
    std::size_t checks = 0, mismatches = 0;
    for (int t = 0; t < 100; ++t) {
        const std::size_t n = 3 + gen() % 6;
        const auto x = testing::random_graph(n, 0.2 + 0.6 * static_cast<double>(gen() % 100) / 100.0, gen);
        for (const auto& g : {SubgraphPattern::triangle(), SubgraphPattern::two_star()}) {
            for (std::size_t k = 0; k < pair_count(n); ++k) {
                const auto e = EdgeId::from_index(n, k);
                Count lhs = 0;
                for (std::size_t k2 = 0; k2 < pair_count(n); ++k2)
                    if (k2 != k) lhs += count_at_edge_pair(x, g, e, EdgeId::from_index(n, k2));
                Count rhs = 0, rhs_oracle = 0;
                for (std::size_t a = 0; a < g.edge_count(); ++a) {
                    const auto ga = g.without_edge(a);
                    rhs += count_at_edge(x, ga, e);
                    rhs_oracle += oracle::count_at_edge(x, ga, int(e.first()), int(e.second()));
                }
                mismatches += lhs != rhs || rhs != rhs_oracle;
                ++checks;
            }
        }
    }
    return {mismatches == 0,
            std::to_string(checks) + " (graph, pattern, edge) identities, " + std::to_string(mismatches) + " mismatches"};
}

Outcome criterion4() {
    const std::vector<ModelSpec> models{ModelSpec::edge_triangle(0.2, 0.1), ModelSpec::edges_only(0.0),
                                        ModelSpec::edge_two_star(-0.4, 0.7), ModelSpec::edge_triangle(-1.2, 1.3)};
    double db = 0, st = 0, vs_oracle = 0;
    for (const auto& spec : models) {
        for (std::size_t n = spec.max_pattern_vertices(); n <= 4; ++n) {
            const auto p = testing::chain_matrix(spec, n, Kernel::Glauber);
            const auto pi = exact_distribution(spec, n).probabilities;
            const auto r = testing::balance_residuals(p, pi);
            db = std::max(db, r.detailed_balance);
            st = std::max(st, r.stationarity);
            const auto ref = oracle::transition_matrix({spec.patterns(), spec.betas()}, int(n));
            const auto ref_pi = oracle::gibbs({spec.patterns(), spec.betas()}, int(n));
            for (std::size_t a = 0; a < p.size(); ++a) {
                vs_oracle = std::max(vs_oracle, std::abs(pi[a] - ref_pi[a]));
                for (std::size_t b = 0; b < p.size(); ++b) vs_oracle = std::max(vs_oracle, std::abs(p[a][b] - ref[a][b]));
            }
        }
    }
    return {db < 1e-10 && st < 1e-10 && vs_oracle < 1e-10,
            "max detailed-balance residual " + fmt("%.2e", db) + ", stationarity residual " + fmt("%.2e", st) +
                ", oracle difference " + fmt("%.2e", vs_oracle) + " (limit 1e-10)"};
}

Outcome criterion5() {
    const auto t0 = std::chrono::steady_clock::now();
    const auto spec = ModelSpec::edge_triangle(0.2, 0.1);
    const std::size_t n = 4;
    const auto d = exact_distribution(spec, n);
    ChainState s(make_context(spec, n), GraphState::empty(n), 5);
    const std::uint64_t steps = 10'000'000, thin = 10;
    std::vector<std::uint64_t> visits(d.state_count(), 0);
    for (std::uint64_t t = 0; t < steps; t += thin) {
        advance(s, thin);
        ++visits[s.graph.to_mask()];
    }
    const double tv = tv_distance(d, visits);
    const double secs = seconds_since(t0);
    return {tv < 0.05 && secs < 120, "TV=" + fmt("%.5f", tv) + " over 1e7 steps thinned by 10 (limit 0.05), " +
                                         fmt("%.1fs", secs) + " (limit 120s)"};
}

Outcome criterion6() {
    const auto hot = high_temperature_point();
    const auto ctx_spec = ModelSpec::edge_triangle(hot.beta1, hot.beta2);
    const std::vector<std::size_t> ns{16, 24, 32, 48};
    const std::uint64_t seeds = 30;
    std::vector<MixingRow> rows;
    std::string medians;
    for (auto n : ns) {
        const auto ctx = make_context(ctx_spec, n);
        std::vector<CouplingResult> runs;
        for (std::uint64_t s = 1; s <= seeds; ++s) runs.push_back(coupling_time(ctx, default_max_coupling_steps(n), s));
        rows.push_back(summarize_coupling(n, runs));
        medians += " n=" + std::to_string(n) + ":" +
                   (rows.back().median_steps ? fmt("%.0f", *rows.back().median_steps) : std::string("censored")) +
                   (rows.back().censored_count ? "(" + std::to_string(rows.back().censored_count) + " timeouts)" : "");
    }
    try {
        const auto fit = fit_mixing_scaling(rows);
        return {fit.exponent >= 1.7 && fit.exponent <= 2.3,
                describe(hot) + ", 30 seeds per n, median tau:" + medians + "; b=" + fmt("%.3f", fit.exponent) +
                    "+-" + fmt("%.3f", fit.exponent_stderr) + " (range [1.7, 2.3])"};
    } catch (const std::invalid_argument& ex) {
        return {false, describe(hot) + medians + "; fit failed: " + ex.what()};
    }
}

Outcome criterion7() {
    const auto cold = low_temperature_point();
    const auto hot = high_temperature_point();
    HysteresisOptions o;
    o.n = 64;
    o.steps = 10'000'000;
    for (std::uint64_t s = 1; s <= 20; ++s) o.seeds.push_back(s);

    const auto low = hysteresis_probe(ModelSpec::edge_triangle(cold.beta1, cold.beta2), o);
    const double max_empty = *std::max_element(low.final_from_empty.begin(), low.final_from_empty.end());
    const double min_complete = *std::min_element(low.final_from_complete.begin(), low.final_from_complete.end());
    const bool separated = max_empty < min_complete && low.separatrix && max_empty < *low.separatrix &&
                           min_complete > *low.separatrix;
    const bool no_crossings = low.crossings && *low.crossings == 0;

    const auto high = hysteresis_probe(ModelSpec::edge_triangle(hot.beta1, hot.beta2), o);
    const double gap = std::abs(high.mean_from_complete - high.mean_from_empty);

    return {separated && no_crossings && gap < 0.03,
            "low " + describe(cold) + ": empty-start densities <= " + fmt("%.4f", max_empty) +
                ", complete-start >= " + fmt("%.4f", min_complete) + ", crossings=" +
                (low.crossings ? std::to_string(*low.crossings) : std::string("n/a")) + "; high " + describe(hot) +
                ": mean gap " + fmt("%.4f", gap) + " (limit 0.03)"};
}

Outcome criterion8() {
    const auto hot = high_temperature_point();
    const auto spec = ModelSpec::edge_triangle(hot.beta1, hot.beta2);
    const std::size_t n = 100;
    const std::uint64_t nn = n * n;
    const double eps = 0.05;
    int good = 0;
    double worst = 0, best_seed_worst = 1e9;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        BurnInOptions o;
        o.steps = 100 * nn;
        o.thin = nn / 2;
        o.epsilon = eps;
        o.seed = seed;
        const auto t = burn_in_trace(spec, GraphState::empty(n), o);
        double dev = 0;
        for (const auto& r : t.rows) {
            if (r.step < 20 * nn) continue;
            dev = std::max({dev, std::abs(r.r_max - t.p_star), std::abs(r.r_min - t.p_star)});
        }
        worst = std::max(worst, dev);
        best_seed_worst = std::min(best_seed_worst, dev);
        good += dev < eps;
    }
    return {good >= 18, describe(hot) + ": " + std::to_string(good) + "/20 seeds inside p*+-0.05 after 20n^2 " +
                            "(need 18); max |r - p*| per seed ranges " + fmt("%.3f", best_seed_worst) + ".." +
                            fmt("%.3f", worst)};
}

Outcome criterion9() {
    const auto hot = high_temperature_point();
    const auto spec = ModelSpec::edge_triangle(hot.beta1, hot.beta2);
    const std::size_t n = 100;
    const std::vector<std::vector<EdgeId>> sets{
        {EdgeId::from_vertices(n, 1, 2), EdgeId::from_vertices(n, 1, 3)},
        {EdgeId::from_vertices(n, 1, 2), EdgeId::from_vertices(n, 3, 4)}};
    IndependenceOptions o;
    o.samples = 100000;
    o.seed = 9;
    const auto reports = independence_test(spec, n, sets, o);
    const double adj = reports[0].max_abs_deviation, dis = reports[1].max_abs_deviation;

    const auto d = exact_distribution(spec, 4);
    const auto p_star = resolve_p_star(spec, std::nullopt);
    const std::vector<EdgeId> adj4{EdgeId::from_vertices(4, 1, 2), EdgeId::from_vertices(4, 1, 3)};
    const std::vector<EdgeId> dis4{EdgeId::from_vertices(4, 1, 2), EdgeId::from_vertices(4, 3, 4)};
    const auto ea = exact_independence(d, adj4, p_star), ed = exact_independence(d, dis4, p_star);

    return {adj < 0.02 && dis < 0.02,
            describe(hot) + ", n=100, 1e5 samples gap n^2: max deviation adjacent " + fmt("%.4f", adj) +
                ", disjoint " + fmt("%.4f", dis) + " (limit 0.02); exact n=4 vs Bernoulli(p*): adjacent " +
                fmt("%.4f", ea.max_abs_deviation) + ", disjoint " + fmt("%.4f", ed.max_abs_deviation) +
                ", vs own marginals: adjacent " + fmt("%.2e", exact_marginal_product_deviation(d, adj4)) +
                ", disjoint " + fmt("%.2e", exact_marginal_product_deviation(d, dis4))};
}

Outcome criterion10() {
    const auto hot = high_temperature_point();
    const auto spec = ModelSpec::edge_triangle(hot.beta1, hot.beta2);
    const std::size_t n = 200;
    const double p_star = resolve_p_star(spec, std::nullopt);
    Rng init(10);
    ChainState chain(make_context(spec, n), sample_erdos_renyi(n, p_star, init), 10);
    advance(chain, 10 * n * n);
    const auto rep = pseudo_random_check(chain.graph, p_star);

    GraphState kmm(n);
    for (std::size_t i = 1; i <= n / 2; ++i)
        for (std::size_t j = n / 2 + 1; j <= n; ++j) kmm.set_edge(i, j, true);
    const auto bad = pseudo_random_check(kmm, 0.5);

    std::string failed;
    for (const auto& c : rep.checks)
        if (!c.pass) failed += " " + c.name;
    return {rep.all_pass() && !bad.property_passes(2),
            describe(hot) + ", ERGM sample n=200: " + std::to_string(rep.checks.size()) + " checks, " +
                (failed.empty() ? std::string("all pass") : "failing:" + failed) + ", lambda2=" +
                fmt("%.2f", rep.spectrum.lambda2) + "; K_{100,100}: spectral property " +
                (bad.property_passes(2) ? "passes" : "fails") + " with |lambda2|=" +
                fmt("%.2f", std::abs(bad.spectrum.lambda2))};
}

Outcome criterion11() {
    bool edges_ok = true;
    for (int b = -2; b <= 2; ++b) edges_ok &= classify(ModelSpec::edges_only(b)).classification == Phase::HighTemperature;

    const auto cold = low_temperature_point();
    const auto& fp = cold.report.fixed_points;
    const bool low_ok = cold.report.classification == Phase::LowTemperature && fp.size() == 3 &&
                        fp[0].stability == Stability::Attracting && fp[1].stability == Stability::Repelling &&
                        fp[2].stability == Stability::Attracting;

    std::mt19937_64 gen(11);
    std::uniform_real_distribution<double> b1(-3, 1), b2(0.05, 3), pd(0.02, 0.98);
    double worst = 0;
    for (int t = 0; t < 100; ++t) {
        const ModelSpec m({SubgraphPattern::edge(), SubgraphPattern::triangle(), SubgraphPattern::two_star()},
                          {b1(gen), b2(gen), b2(gen) * 0.5});
        const double p = pd(gen), h = 1e-5;
        const double fd = (phi(m, p + h) - phi(m, p - h)) / (2 * h);
        const double an = phi_prime(m, p);
        worst = std::max(worst, std::abs(an - fd) / std::max(std::abs(an), 1e-300));
    }
    return {edges_ok && low_ok && worst < 1e-6,
            std::string("edges-only beta1 in {-2..2}: ") + (edges_ok ? "all HighTemperature" : "misclassified") +
                "; " + describe(cold) + " -> " + to_string(cold.report.classification) + " with " +
                std::to_string(fp.size()) + " roots; phi' vs finite differences max rel err " + fmt("%.2e", worst)};
}

Outcome criterion12() {
    namespace fs = std::filesystem;
    using nlohmann::json;
    const json model{{"patterns", {"edge", "triangle"}}, {"betas", {-0.25, 0.3}}};
    std::vector<json> configs{
        {{"experiment", "phase"}, {"phase_curve_points", 21}},
        {{"experiment", "phase-sweep"},
         {"sweep", {{"index_a", 0}, {"values_a", {{"from", -2.0}, {"to", 0.0}, {"count", 9}}}, {"index_b", 1},
                    {"values_b", {{"from", 0.2}, {"to", 2.0}, {"count", 4}}}}}},
        {{"experiment", "sample"}, {"n", 20}, {"steps", 20000}, {"thin", 500}, {"seeds", {1, 2, 3}}},
        {{"experiment", "couple"}, {"n", 16}, {"seeds", {{"base", 1}, {"count", 4}}}},
        {{"experiment", "mix-scan"}, {"n_list", {8, 12, 16}}, {"seeds", {{"base", 1}, {"count", 5}}}},
        {{"experiment", "diag-burn-in"}, {"n", 30}, {"steps", 20000}, {"thin", 1000}, {"seeds", {4, 5}}},
        {{"experiment", "diag-independence"}, {"n", 6}, {"samples", 2000}, {"edge_tuples", {{{1, 2}, {3, 4}}}}},
        {{"experiment", "diag-hysteresis"}, {"n", 12}, {"steps", 5000}, {"seeds", {1, 2}}},
        {{"experiment", "diag-pseudo"}, {"n", 60}, {"subset_samples", 10}, {"seeds", {1, 2}}},
        {{"experiment", "exact-compare"}, {"n", 4}, {"steps", 50000}, {"thin", 5}, {"seeds", {1, 2}}}};
    const auto root = fs::temp_directory_path() / ("ergm_acceptance_" + std::to_string(::getpid()));
    std::size_t files = 0, differ = 0;
    std::string bad;
    for (const auto& c : configs) {
        json j = model;
        j.update(c);
        std::vector<std::vector<std::string>> contents;
        for (int run = 0; run < 2; ++run) {
            const auto dir = root / (c["experiment"].get<std::string>() + "_" + std::to_string(run));
            fs::remove_all(dir);
            j["out_dir"] = dir.string();
            j["threads"] = run + 1;
            const auto res = run_experiment(parse_config(j));
            std::vector<std::string> texts;
            for (const auto& f : res.files) {
                std::ifstream in(dir / f, std::ios::binary);
                std::ostringstream ss;
                ss << in.rdbuf();
                texts.push_back(f + "\n" + ss.str());
            }
            contents.push_back(std::move(texts));
        }
        files += contents[0].size();
        if (contents[0] != contents[1]) ++differ, bad += " " + c["experiment"].get<std::string>();
    }
    fs::remove_all(root);
    return {differ == 0, std::to_string(configs.size()) + " experiments, " + std::to_string(files) +
                             " output files compared across reruns (1 vs 2 threads), " + std::to_string(differ) +
                             " differing" + bad};
}

const std::map<int, std::pair<std::string, std::function<Outcome()>>>& criteria() {
    static const std::map<int, std::pair<std::string, std::function<Outcome()>>> table{
        {1, {"counting oracle equivalence", criterion1}},
        {2, {"complete-graph closed forms", criterion2}},
        {3, {"edge-sum identity", criterion3}},
        {4, {"exact reversibility", criterion4}},
        {5, {"MCMC vs exact distribution", criterion5}},
        {6, {"high temperature coupling scaling", criterion6}},
        {7, {"low temperature metastability", criterion7}},
        {8, {"r-statistic concentration", criterion8}},
        {9, {"edge independence", criterion9}},
        {10, {"weak pseudo-randomness", criterion10}},
        {11, {"phase classifier", criterion11}},
        {12, {"determinism", criterion12}},
    };
    return table;
}

}  // namespace

int main(int argc, char** argv) {
    std::vector<int> selected;
    for (int i = 1; i < argc; ++i) selected.push_back(std::atoi(argv[i]));
    if (selected.empty())
        for (const auto& [k, _] : criteria()) selected.push_back(k);

    bool all = true;
    for (int k : selected) {
        const auto it = criteria().find(k);
        if (it == criteria().end()) {
            std::printf("criterion %d: unknown\n", k);
            all = false;
            continue;
        }
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = it->second.second();
        } catch (const std::exception& ex) {
            o = {false, std::string("exception: ") + ex.what()};
        }
        std::printf("criterion %2d [%s]: %s - %s [%.1fs]\n", k, it->second.first.c_str(), o.pass ? "PASS" : "FAIL",
                    o.detail.c_str(), seconds_since(t0));
        std::fflush(stdout);
        all &= o.pass;
    }
    return all ? 0 : 1;
}
