#include "ergm/experiment.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <filesystem>
#include <fstream>
#include <limits>
#include <mutex>
#include <sstream>
#include <thread>

#include "ergm/csv.hpp"
#include "ergm/diagnostics.hpp"
#include "ergm/phase.hpp"
#include "ergm/subgraph_counts.hpp"

namespace ergm {

using nlohmann::json;
namespace fs = std::filesystem;

std::string sha256_hex(const std::string& data) {
    unsigned char digest[EVP_MAX_MD_SIZE];
    unsigned int len = 0;
    if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
        throw std::runtime_error("sha256: digest failed");
    }
    static const char* hex = "0123456789abcdef";
    std::string out;
    for (unsigned i = 0; i < len; ++i) {
        out += hex[digest[i] >> 4];
        out += hex[digest[i] & 15];
    }
    return out;
}

MixingRow summarize_coupling(std::size_t n, const std::vector<CouplingResult>& runs) {
    MixingRow row;
    row.n = n;
    row.runs = runs.size();
    if (runs.empty()) return row;
    std::vector<double> t;
    for (const auto& r : runs) {
        if (r.timed_out()) {
            ++row.censored_count;
            t.push_back(std::numeric_limits<double>::infinity());
        } else {
            t.push_back(static_cast<double>(*r.coalescence_step));
        }
    }
    std::sort(t.begin(), t.end());
    const std::size_t k = t.size();
    const double med = k % 2 ? t[k / 2] : 0.5 * (t[k / 2 - 1] + t[k / 2]);
    if (std::isfinite(med)) row.median_steps = med;
    return row;
}

MixingScalingFit fit_mixing_scaling(const std::vector<MixingRow>& rows) {
    MixingScalingFit fit;
    fit.rows = rows;
    std::vector<double> xs, ys;
    for (const auto& r : rows) {
        if (!r.median_steps || r.n < 2 || *r.median_steps <= 0) continue;
        const double ln_n = std::log(static_cast<double>(r.n));
        xs.push_back(ln_n);
        ys.push_back(std::log(*r.median_steps / ln_n));
    }
    if (xs.size() < 3) throw std::invalid_argument("fit_mixing_scaling: need at least 3 uncensored n values");
    const double k = static_cast<double>(xs.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) mx += xs[i], my += ys[i];
    mx /= k;
    my /= k;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxx += (xs[i] - mx) * (xs[i] - mx);
        sxy += (xs[i] - mx) * (ys[i] - my);
    }
    if (sxx <= 0) throw std::invalid_argument("fit_mixing_scaling: need at least 3 distinct n values");
    fit.exponent = sxy / sxx;
    const double a = my - fit.exponent * mx;
    fit.prefactor = std::exp(a);
    double ssr = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double res = ys[i] - (fit.exponent * xs[i] + a);
        fit.residuals.push_back(res);
        ssr += res * res;
    }
    fit.exponent_stderr = std::sqrt(ssr / (k - 2) / sxx);
    fit.points_used = xs.size();
    return fit;
}

namespace {

// Runs f(i) for i in [0, count) on up to `threads` workers; results are
// stored by index so the output order never depends on scheduling.
template <class F>
auto parallel_map(std::size_t count, unsigned threads, F f) -> std::vector<decltype(f(std::size_t{}))> {
    using R = decltype(f(std::size_t{}));
    std::vector<std::optional<R>> slots(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto worker = [&] {
        for (;;) {
            const std::size_t i = next.fetch_add(1);
            if (i >= count) return;
            try {
                slots[i].emplace(f(i));
            } catch (...) {
                std::lock_guard lock(error_mutex);
                if (!error) error = std::current_exception();
                next = count;
            }
        }
    };
    const unsigned workers = static_cast<unsigned>(std::min<std::size_t>(std::max(1u, threads), count));
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < workers; ++t) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (error) std::rethrow_exception(error);
    std::vector<R> out;
    out.reserve(count);
    for (auto& s : slots) out.push_back(std::move(*s));
    return out;
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

class Outputs {
public:
    explicit Outputs(const ExperimentConfig& cfg) : cfg_(cfg), dir_(cfg.out_dir) {
        std::error_code ec;
        fs::create_directories(dir_, ec);
        if (ec || !fs::is_directory(dir_)) throw std::runtime_error("cannot create output directory '" + cfg.out_dir + "'");
    }

    json header() const {
        return {{"experiment", cfg_.experiment},
                {"config_sha256", cfg_.config_hash},
                {"config", cfg_.canonical},
                {"seeds", cfg_.seeds},
                {"rng", Rng::kAlgorithm}};
    }

    std::string csv_preamble() const {
        std::string seeds;
        for (std::size_t i = 0; i < cfg_.seeds.size(); ++i) seeds += (i ? ";" : "") + std::to_string(cfg_.seeds[i]);
        return "# config_sha256=" + cfg_.config_hash + "\r\n# seeds=" + seeds + "\r\n# rng=" + Rng::kAlgorithm +
               "\r\n";
    }

    void write_json(const std::string& name, json body) {
        json doc = header();
        for (auto& [k, v] : body.items()) doc[k] = v;
        write(name, doc.dump(2) + "\n");
    }

    void write_csv(const std::string& name, const std::vector<std::string>& columns,
                   const std::vector<std::vector<std::string>>& rows) {
        std::ostringstream os;
        os << csv_preamble();
        csv::write_row(os, columns);
        for (const auto& r : rows) csv::write_row(os, r);
        write(name, os.str());
    }

    void write(const std::string& name, const std::string& content) {
        const fs::path target = dir_ / name;
        const fs::path tmp = dir_ / ("." + name + ".tmp");
        {
            std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
            if (!out) throw std::runtime_error("cannot write '" + tmp.string() + "'");
            out << content;
            out.flush();
            if (!out) throw std::runtime_error("write failed for '" + tmp.string() + "'");
        }
        std::error_code ec;
        fs::rename(tmp, target, ec);
        if (ec) throw std::runtime_error("cannot rename into '" + target.string() + "': " + ec.message());
        files_.push_back({name, sha256_hex(content), content.size()});
    }

    RunResult finish() {
        json list = json::array();
        for (const auto& f : files_) list.push_back({{"path", f.name}, {"sha256", f.hash}, {"bytes", f.bytes}});
        json doc = header();
        doc["files"] = list;
        const std::string content = doc.dump(2) + "\n";
        RunResult r;
        for (const auto& f : files_) r.files.push_back(f.name);
        write("manifest.json", content);
        r.files.push_back("manifest.json");
        return r;
    }

private:
    struct FileEntry {
        std::string name;
        std::string hash;
        std::size_t bytes;
    };
    const ExperimentConfig& cfg_;
    fs::path dir_;
    std::vector<FileEntry> files_;
};

std::string num(double v) { return csv::number(v); }
std::string num(std::uint64_t v) { return std::to_string(v); }

FixedPointOptions fixed_point_options(const ExperimentConfig& cfg) {
    FixedPointOptions o;
    o.tol = cfg.tolerances.fixed_point_tol;
    o.grid_points = cfg.tolerances.grid_points;
    o.critical_margin = cfg.tolerances.critical_margin;
    return o;
}

json phase_json(const PhaseReport& r) {
    json pts = json::array();
    for (const auto& fp : r.fixed_points) {
        pts.push_back({{"p_star", fp.p_star}, {"phi_prime", fp.phi_derivative}, {"stability", to_string(fp.stability)}});
    }
    return {{"fixed_points", pts},
            {"classification", to_string(r.classification)},
            {"resolution_warning", r.resolution_warning},
            {"p_bar", r.p_bar}};
}

json tolerances_json(const Tolerances& t) {
    return {{"fixed_point_tol", t.fixed_point_tol},
            {"critical_margin", t.critical_margin},
            {"grid_points", t.grid_points},
            {"epsilon", t.epsilon},
            {"pseudo_tolerance", t.pseudo_tolerance}};
}

std::vector<SubgraphPattern> r_patterns(const ExperimentConfig& cfg) {
    std::vector<SubgraphPattern> out;
    for (const auto& p : cfg.model.patterns())
        if (p.edge_count() >= 2) out.push_back(p);
    for (const auto& p : cfg.extra_patterns) out.push_back(p);
    return out;
}

GraphState initial_state(const ExperimentConfig& cfg, std::uint64_t seed) {
    const std::size_t n = *cfg.n;
    if (cfg.start == "complete") return GraphState::complete(n);
    if (cfg.start == "erdos_renyi") {
        Rng init(Rng::splitmix64(seed ^ 0x1d3a5eedULL));
        return sample_erdos_renyi(n, resolve_p_star(cfg.model, cfg.p_star), init);
    }
    return GraphState::empty(n);
}

std::vector<EdgeId> tuple_edges(std::size_t n, const std::vector<std::pair<std::size_t, std::size_t>>& t) {
    std::vector<EdgeId> out;
    for (const auto& [a, b] : t) out.push_back(EdgeId::from_vertices(n, a, b));
    return out;
}

json edges_json(const std::vector<EdgeId>& edges) {
    json out = json::array();
    for (const auto& e : edges) out.push_back({e.first(), e.second()});
    return out;
}

void run_phase(const ExperimentConfig& cfg, Outputs& out) {
    const auto report = classify(cfg.model, fixed_point_options(cfg));
    json body = phase_json(report);
    body["model"] = model_to_json(cfg.model);
    body["tolerances"] = tolerances_json(cfg.tolerances);
    out.write_json("phase.json", body);
    if (cfg.phase_curve_points >= 2) {
        std::vector<std::vector<std::string>> rows;
        const std::size_t k = cfg.phase_curve_points;
        for (std::size_t i = 0; i < k; ++i) {
            const double p = static_cast<double>(i) / static_cast<double>(k - 1);
            rows.push_back({num(p), num(phi(cfg.model, p)), num(phi_prime(cfg.model, p))});
        }
        out.write_csv("phase_curve.csv", {"p", "phi", "phi_prime"}, rows);
    }
}

void run_phase_sweep(const ExperimentConfig& cfg, Outputs& out) {
    const auto& sw = *cfg.sweep;
    std::vector<std::pair<double, std::optional<double>>> grid;
    for (double a : sw.values_a) {
        if (sw.index_b) {
            for (double b : sw.values_b) grid.emplace_back(a, b);
        } else {
            grid.emplace_back(a, std::nullopt);
        }
    }
    const auto build = [&](std::size_t i) {
        auto betas = cfg.model.betas();
        betas[sw.index_a] = grid[i].first;
        if (sw.index_b) betas[*sw.index_b] = *grid[i].second;
        try {
            return ModelSpec(cfg.model.patterns(), betas, cfg.model.allows_nonferromagnetic());
        } catch (const std::invalid_argument& ex) {
            throw ConfigError(std::string("config field 'sweep': ") + ex.what());
        }
    };
    for (std::size_t i = 0; i < grid.size(); ++i) build(i);  // validate before any work
    const auto fpo = fixed_point_options(cfg);
    const auto reports = parallel_map(grid.size(), cfg.threads, [&](std::size_t i) { return classify(build(i), fpo); });

    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < grid.size(); ++i) {
        const auto& r = reports[i];
        std::string pts;
        for (const auto& fp : r.fixed_points) {
            if (!pts.empty()) pts += ';';
            pts += num(fp.p_star) + ":" + to_string(fp.stability);
        }
        rows.push_back({num(grid[i].first), grid[i].second ? num(*grid[i].second) : std::string(),
                        to_string(r.classification), std::to_string(r.fixed_points.size()),
                        std::to_string(r.attracting().size()), pts, r.resolution_warning ? "1" : "0"});
    }
    const std::string a_name = "beta_" + std::to_string(sw.index_a + 1);
    const std::string b_name = sw.index_b ? "beta_" + std::to_string(*sw.index_b + 1) : std::string("unused");
    out.write_csv("phase_sweep.csv",
                  {a_name, b_name, "classification", "fixed_points", "attracting", "points", "resolution_warning"},
                  rows);
}

void run_sample(const ExperimentConfig& cfg, Outputs& out) {
    const auto ctx = make_context(cfg.model, *cfg.n);
    const auto rpats = r_patterns(cfg);
    std::vector<Observable> obs{Observable::EdgeDensity, Observable::Hamiltonian};
    if (!rpats.empty()) {
        obs.push_back(Observable::RMax);
        obs.push_back(Observable::RMin);
    }
    struct Result {
        TraceTable trace;
        GraphState final_state;
    };
    const auto results = parallel_map(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
        ChainState chain(ctx, initial_state(cfg, cfg.seeds[i]), cfg.seeds[i], cfg.kernel);
        auto t = run_trace(chain, cfg.steps, obs, cfg.thin, rpats);
        return Result{std::move(t), chain.graph};
    });
    json summary = json::array();
    for (std::size_t i = 0; i < results.size(); ++i) {
        const auto seed = std::to_string(cfg.seeds[i]);
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : results[i].trace.rows) {
            std::vector<std::string> cells{num(static_cast<std::uint64_t>(r[0]))};
            for (std::size_t c = 1; c < r.size(); ++c) cells.push_back(num(r[c]));
            rows.push_back(std::move(cells));
        }
        out.write_csv("sample_" + seed + "_trace.csv", results[i].trace.columns, rows);
        std::ostringstream g;
        g << "# config_sha256=" << cfg.config_hash << "\n# seed=" << seed << "\n";
        write_edge_list(g, results[i].final_state);
        out.write("sample_" + seed + "_final.txt", g.str());
        const auto& fin = results[i].final_state;
        summary.push_back({{"seed", cfg.seeds[i]},
                           {"edges", fin.edge_count()},
                           {"density", fin.density()},
                           {"hamiltonian", ctx->model.hamiltonian(fin)}});
    }
    out.write_json("sample.json", {{"n", *cfg.n},
                                   {"steps", cfg.steps},
                                   {"thin", cfg.thin},
                                   {"kernel", cfg.kernel == Kernel::Glauber ? "glauber" : "metropolis"},
                                   {"start", cfg.start},
                                   {"model", model_to_json(cfg.model)},
                                   {"results", summary}});
}

json coupling_json(const CouplingResult& r) {
    return {{"seed", r.seed},
            {"n", r.n},
            {"coalescence_step", r.coalescence_step ? json(*r.coalescence_step) : json(nullptr)},
            {"max_steps", r.max_steps},
            {"timed_out", r.timed_out()}};
}

void run_couple(const ExperimentConfig& cfg, Outputs& out) {
    const std::size_t n = *cfg.n;
    const auto ctx = make_context(cfg.model, n);
    const auto max_steps = cfg.max_steps.value_or(default_max_coupling_steps(n));
    const auto results = parallel_map(cfg.seeds.size(), cfg.threads,
                                      [&](std::size_t i) { return coupling_time(ctx, max_steps, cfg.seeds[i]); });
    json list = json::array();
    for (const auto& r : results) list.push_back(coupling_json(r));
    out.write_json("couple.json", {{"n", n}, {"model", model_to_json(cfg.model)}, {"results", list}});
}

void run_mix_scan(const ExperimentConfig& cfg, Outputs& out) {
    std::vector<ContextPtr> contexts;
    for (auto n : cfg.n_list) contexts.push_back(make_context(cfg.model, n));
    const std::size_t per_n = cfg.seeds.size();
    const auto results = parallel_map(cfg.n_list.size() * per_n, cfg.threads, [&](std::size_t k) {
        const std::size_t ni = k / per_n;
        const auto n = cfg.n_list[ni];
        return coupling_time(contexts[ni], cfg.max_steps.value_or(default_max_coupling_steps(n)), cfg.seeds[k % per_n]);
    });

    std::vector<std::vector<std::string>> rows;
    std::vector<MixingRow> summary;
    for (std::size_t ni = 0; ni < cfg.n_list.size(); ++ni) {
        std::vector<CouplingResult> runs(results.begin() + static_cast<std::ptrdiff_t>(ni * per_n),
                                         results.begin() + static_cast<std::ptrdiff_t>((ni + 1) * per_n));
        for (const auto& r : runs) {
            rows.push_back({std::to_string(r.n), std::to_string(r.seed),
                            std::to_string(r.coalescence_step.value_or(r.max_steps)), r.timed_out() ? "1" : "0"});
        }
        summary.push_back(summarize_coupling(cfg.n_list[ni], runs));
    }
    out.write_csv("mix_scan.csv", {"n", "seed", "steps", "timeout"}, rows);

    json jrows = json::array();
    for (const auto& r : summary) {
        jrows.push_back({{"n", r.n},
                         {"median_steps", r.median_steps ? json(*r.median_steps) : json(nullptr)},
                         {"censored_count", r.censored_count},
                         {"runs", r.runs}});
    }
    json body{{"model", model_to_json(cfg.model)},
              {"phase", to_string(classify(cfg.model, fixed_point_options(cfg)).classification)},
              {"rows", jrows}};
    try {
        const auto fit = fit_mixing_scaling(summary);
        body["fit"] = {{"exponent", fit.exponent},
                       {"exponent_stderr", number_or_null(fit.exponent_stderr)},
                       {"prefactor", fit.prefactor},
                       {"residuals", fit.residuals},
                       {"points_used", fit.points_used}};
    } catch (const std::invalid_argument& ex) {
        body["fit"] = nullptr;
        body["fit_error"] = ex.what();
    }
    out.write_json("mix_fit.json", body);
}

void run_burn_in(const ExperimentConfig& cfg, Outputs& out) {
    const double p_star = resolve_p_star(cfg.model, cfg.p_star);
    const auto traces = parallel_map(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
        BurnInOptions o;
        o.steps = cfg.steps;
        o.thin = cfg.thin;
        o.epsilon = cfg.tolerances.epsilon;
        o.p_star = p_star;
        o.extra_patterns = cfg.extra_patterns;
        o.seed = cfg.seeds[i];
        return burn_in_trace(cfg.model, initial_state(cfg, cfg.seeds[i]), o);
    });
    json per_seed = json::array();
    for (std::size_t i = 0; i < traces.size(); ++i) {
        const auto& t = traces[i];
        std::vector<std::vector<std::string>> rows;
        for (const auto& r : t.rows) {
            rows.push_back({num(r.step), num(r.r_max), num(r.r_min), num(r.edge_density), t.inside(r) ? "1" : "0"});
        }
        out.write_csv("burn_in_" + std::to_string(cfg.seeds[i]) + ".csv",
                      {"step", "r_max", "r_min", "edge_density", "inside"}, rows);
        per_seed.push_back({{"seed", cfg.seeds[i]},
                            {"first_entry_step", t.first_entry_step ? json(*t.first_entry_step) : json(nullptr)},
                            {"stays_inside_after_entry", t.first_entry_step && t.stays_inside_from(*t.first_entry_step)},
                            {"final_r_max", number_or_null(t.rows.back().r_max)},
                            {"final_r_min", number_or_null(t.rows.back().r_min)},
                            {"final_edge_density", t.rows.back().edge_density}});
    }
    out.write_json("burn_in.json", {{"n", *cfg.n},
                                    {"model", model_to_json(cfg.model)},
                                    {"tolerances", tolerances_json(cfg.tolerances)},
                                    {"p_star", p_star},
                                    {"tracked_patterns", traces.front().tracked_patterns},
                                    {"steps", cfg.steps},
                                    {"thin", cfg.thin},
                                    {"start", cfg.start},
                                    {"results", per_seed}});
}

void run_independence(const ExperimentConfig& cfg, Outputs& out) {
    const std::size_t n = *cfg.n;
    const double p_star = resolve_p_star(cfg.model, cfg.p_star);
    std::vector<std::vector<EdgeId>> sets;
    for (const auto& t : cfg.edge_tuples) sets.push_back(tuple_edges(n, t));
    const auto reports = parallel_map(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
        IndependenceOptions o;
        o.samples = cfg.samples;
        o.gap_steps = cfg.gap_steps;
        o.burn_in_steps = cfg.burn_in_steps;
        o.p_star = p_star;
        o.seed = cfg.seeds[i];
        return independence_test(cfg.model, n, sets, o);
    });

    std::vector<std::vector<std::string>> rows;
    json per_seed = json::array();
    for (std::size_t i = 0; i < reports.size(); ++i) {
        json tuples = json::array();
        for (std::size_t t = 0; t < reports[i].size(); ++t) {
            const auto& r = reports[i][t];
            tuples.push_back({{"edges", edges_json(r.edges)},
                              {"joint", r.joint},
                              {"reference", r.reference},
                              {"max_abs_deviation", r.max_abs_deviation}});
            for (std::size_t a = 0; a < r.joint.size(); ++a) {
                rows.push_back({std::to_string(cfg.seeds[i]), std::to_string(t), std::to_string(a), num(r.joint[a]),
                                num(r.reference[a])});
            }
        }
        per_seed.push_back({{"seed", cfg.seeds[i]}, {"samples", cfg.samples}, {"tuples", tuples}});
    }
    out.write_csv("independence.csv", {"seed", "tuple", "assignment", "empirical", "reference"}, rows);

    json body{{"n", n},
              {"model", model_to_json(cfg.model)},
              {"tolerances", tolerances_json(cfg.tolerances)},
              {"p_star", p_star},
              {"gap_steps", cfg.gap_steps ? cfg.gap_steps : static_cast<std::uint64_t>(n) * n},
              {"burn_in_steps", cfg.burn_in_steps ? cfg.burn_in_steps : 10 * static_cast<std::uint64_t>(n) * n},
              {"results", per_seed}};
    if (n <= kMaxExactVertices) {
        const auto d = exact_distribution(cfg.model, n);
        json exact = json::array();
        for (const auto& s : sets) {
            const auto r = exact_independence(d, s, p_star);
            exact.push_back({{"edges", edges_json(s)},
                             {"joint", r.joint},
                             {"reference", r.reference},
                             {"max_abs_deviation", r.max_abs_deviation},
                             {"marginal_product_deviation", exact_marginal_product_deviation(d, s)}});
        }
        body["exact"] = exact;
    }
    out.write_json("independence.json", body);
}

void run_hysteresis(const ExperimentConfig& cfg, Outputs& out) {
    HysteresisOptions o;
    o.n = *cfg.n;
    o.steps = cfg.steps;
    o.seeds = cfg.seeds;
    o.check_interval = cfg.check_interval;
    const auto r = hysteresis_probe(cfg.model, o);
    std::vector<std::vector<std::string>> rows;
    for (std::size_t i = 0; i < cfg.seeds.size(); ++i) {
        rows.push_back({std::to_string(cfg.seeds[i]), "empty", num(r.final_from_empty[i])});
        rows.push_back({std::to_string(cfg.seeds[i]), "complete", num(r.final_from_complete[i])});
    }
    out.write_csv("hysteresis.csv", {"seed", "start", "final_density"}, rows);
    out.write_json("hysteresis.json",
                   {{"n", o.n},
                    {"steps", o.steps},
                    {"model", model_to_json(cfg.model)},
                    {"phase", to_string(r.phase)},
                    {"warning", r.warning ? json("model is not in the low temperature phase") : json(nullptr)},
                    {"final_from_empty", r.final_from_empty},
                    {"final_from_complete", r.final_from_complete},
                    {"mean_from_empty", r.mean_from_empty},
                    {"mean_from_complete", r.mean_from_complete},
                    {"mean_gap", r.mean_from_complete - r.mean_from_empty},
                    {"separation", number_or_null(r.separation)},
                    {"separatrix", r.separatrix ? json(*r.separatrix) : json(nullptr)},
                    {"crossings", r.crossings ? json(*r.crossings) : json(nullptr)}});
}

json pseudo_json(const PseudoRandomReport& r) {
    json checks = json::array();
    for (const auto& c : r.checks) {
        checks.push_back({{"name", c.name},
                          {"property", c.property},
                          {"formula", c.formula},
                          {"observed", number_or_null(c.observed)},
                          {"predicted", number_or_null(c.predicted)},
                          {"tolerance", c.tolerance},
                          {"pass", c.pass}});
    }
    json props = json::object();
    for (int k = 1; k <= 4; ++k) props[std::to_string(k)] = r.property_passes(k);
    return {{"checks", checks},
            {"property_passes", props},
            {"all_pass", r.all_pass()},
            {"subset_note", r.subset_note},
            {"spectrum",
             {{"lambda1", r.spectrum.lambda1},
              {"lambda2", r.spectrum.lambda2},
              {"largest", r.spectrum.largest},
              {"second_largest", r.spectrum.second_largest},
              {"smallest", r.spectrum.smallest},
              {"second_smallest", r.spectrum.second_smallest},
              {"iterations", r.spectrum.iterations},
              {"converged", r.spectrum.converged}}}};
}

void run_pseudo(const ExperimentConfig& cfg, Outputs& out) {
    const auto options = [&](std::uint64_t seed) {
        PseudoRandomOptions o;
        o.tolerance = cfg.tolerances.pseudo_tolerance;
        o.cycle_lengths = cfg.cycle_lengths;
        o.subset_samples = cfg.subset_samples;
        o.seed = seed;
        o.spectral.seed = seed;
        return o;
    };
    std::vector<std::vector<std::string>> rows;
    const auto add_rows = [&](const std::string& source, const PseudoRandomReport& r) {
        for (const auto& c : r.checks) {
            rows.push_back({source, std::to_string(c.property), c.name, num(c.observed), num(c.predicted),
                            num(c.tolerance), c.pass ? "1" : "0"});
        }
    };
    json results = json::array();
    if (cfg.graph_file) {
        std::ifstream in(*cfg.graph_file);
        if (!in) throw std::runtime_error("cannot open graph_file '" + *cfg.graph_file + "'");
        const GraphState g = read_edge_list(in);
        const double p = cfg.p ? *cfg.p : resolve_p_star(cfg.model, cfg.p_star);
        const auto r = pseudo_random_check(g, p, options(cfg.seeds.front()));
        add_rows("graph_file", r);
        json item = pseudo_json(r);
        item["source"] = "graph_file";
        item["n"] = g.n();
        item["p"] = p;
        results.push_back(item);
    } else {
        const std::size_t n = *cfg.n;
        const double p_star = resolve_p_star(cfg.model, cfg.p_star);
        const double p = cfg.p.value_or(p_star);
        const std::uint64_t burn = cfg.burn_in_steps ? cfg.burn_in_steps : 10 * static_cast<std::uint64_t>(n) * n;
        const auto ctx = make_context(cfg.model, n);
        struct Item {
            GraphState graph;
            PseudoRandomReport report;
        };
        const auto items = parallel_map(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
            Rng init(Rng::splitmix64(cfg.seeds[i] ^ 0x1d3a5eedULL));
            ChainState chain(ctx, sample_erdos_renyi(n, p_star, init), cfg.seeds[i], cfg.kernel);
            advance(chain, burn);
            auto rep = pseudo_random_check(chain.graph, p, options(cfg.seeds[i]));
            return Item{chain.graph, std::move(rep)};
        });
        for (std::size_t i = 0; i < items.size(); ++i) {
            const auto seed = std::to_string(cfg.seeds[i]);
            add_rows(seed, items[i].report);
            std::ostringstream g;
            g << "# config_sha256=" << cfg.config_hash << "\n# seed=" << seed << "\n";
            write_edge_list(g, items[i].graph);
            out.write("pseudo_" + seed + "_graph.txt", g.str());
            json item = pseudo_json(items[i].report);
            item["source"] = "seed";
            item["seed"] = cfg.seeds[i];
            item["n"] = n;
            item["p"] = p;
            item["burn_in_steps"] = burn;
            results.push_back(item);
        }
    }
    out.write_csv("pseudo_checks.csv", {"source", "property", "check", "observed", "predicted", "tolerance", "pass"},
                  rows);
    out.write_json("pseudo.json", {{"model", model_to_json(cfg.model)},
                                   {"tolerances", tolerances_json(cfg.tolerances)},
                                   {"results", results}});
}

void run_exact_compare(const ExperimentConfig& cfg, Outputs& out) {
    const std::size_t n = *cfg.n;
    const auto d = exact_distribution(cfg.model, n);
    {
        std::ostringstream os;
        os << out.csv_preamble();
        write_exact_csv(os, d);
        out.write("exact.csv", os.str());
    }
    const auto ctx = make_context(cfg.model, n);
    const auto visits = parallel_map(cfg.seeds.size(), cfg.threads, [&](std::size_t i) {
        ChainState chain(ctx, initial_state(cfg, cfg.seeds[i]), cfg.seeds[i], cfg.kernel);
        std::vector<std::uint64_t> counts(d.state_count(), 0);
        for (std::uint64_t done = 0; done + cfg.thin <= cfg.steps; done += cfg.thin) {
            advance(chain, cfg.thin);
            ++counts[chain.graph.to_mask()];
        }
        return counts;
    });
    std::vector<std::uint64_t> pooled(d.state_count(), 0);
    json per_seed = json::array();
    for (std::size_t i = 0; i < visits.size(); ++i) {
        std::uint64_t total = 0;
        for (std::size_t s = 0; s < pooled.size(); ++s) pooled[s] += visits[i][s], total += visits[i][s];
        per_seed.push_back({{"seed", cfg.seeds[i]}, {"samples", total}, {"tv_distance", tv_distance(d, visits[i])}});
    }
    std::uint64_t pooled_total = 0;
    for (auto c : pooled) pooled_total += c;
    std::vector<std::vector<std::string>> rows;
    for (std::size_t s = 0; s < pooled.size(); ++s) {
        rows.push_back({std::to_string(s), num(d.probabilities[s]),
                        num(pooled_total ? static_cast<double>(pooled[s]) / static_cast<double>(pooled_total) : 0.0)});
    }
    out.write_csv("exact_compare.csv", {"mask", "probability", "empirical"}, rows);
    out.write_json("exact_compare.json",
                   {{"n", n},
                    {"model", model_to_json(cfg.model)},
                    {"kernel", cfg.kernel == Kernel::Glauber ? "glauber" : "metropolis"},
                    {"steps", cfg.steps},
                    {"thin", cfg.thin},
                    {"log_z", d.log_z},
                    {"results", per_seed},
                    {"pooled_tv_distance", pooled_total ? json(tv_distance(d, pooled)) : json(nullptr)}});
}

}  // namespace

RunResult run_experiment(const ExperimentConfig& cfg) {
    Outputs out(cfg);
    const auto& e = cfg.experiment;
    if (e == "phase") run_phase(cfg, out);
    else if (e == "phase-sweep") run_phase_sweep(cfg, out);
    else if (e == "sample") run_sample(cfg, out);
    else if (e == "couple") run_couple(cfg, out);
    else if (e == "mix-scan") run_mix_scan(cfg, out);
    else if (e == "diag-burn-in") run_burn_in(cfg, out);
    else if (e == "diag-independence") run_independence(cfg, out);
    else if (e == "diag-hysteresis") run_hysteresis(cfg, out);
    else if (e == "diag-pseudo") run_pseudo(cfg, out);
    else if (e == "exact-compare") run_exact_compare(cfg, out);
    else throw ConfigError("config field 'experiment': unknown experiment");
    return out.finish();
}

}  // namespace ergm
