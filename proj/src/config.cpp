#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "ergm/experiment.hpp"

namespace ergm {

using nlohmann::json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
    throw ConfigError("config field '" + field + "': " + what);
}

void reject_unknown(const json& j, const std::string& where, const std::set<std::string>& allowed) {
    for (const auto& [key, _] : j.items()) {
        if (!allowed.count(key)) fail(where.empty() ? key : where + "." + key, "unknown key");
    }
}

std::uint64_t get_uint(const json& v, const std::string& field) {
    if (!v.is_number_integer() || (v.is_number_integer() && !v.is_number_unsigned() && v.get<std::int64_t>() < 0)) {
        fail(field, "expected a non-negative integer");
    }
    return v.get<std::uint64_t>();
}

double get_double(const json& v, const std::string& field) {
    if (!v.is_number()) fail(field, "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x)) fail(field, "must be finite");
    return x;
}

double get_probability(const json& v, const std::string& field) {
    const double x = get_double(v, field);
    if (x < 0.0 || x > 1.0) fail(field, "must lie in [0, 1]");
    return x;
}

std::vector<double> get_double_list(const json& v, const std::string& field) {
    if (v.is_object()) {
        reject_unknown(v, field, {"from", "to", "count"});
        if (!v.contains("from") || !v.contains("to") || !v.contains("count")) fail(field, "range needs from, to, count");
        const double a = get_double(v["from"], field + ".from");
        const double b = get_double(v["to"], field + ".to");
        const auto c = get_uint(v["count"], field + ".count");
        if (c < 1) fail(field + ".count", "must be at least 1");
        std::vector<double> out;
        for (std::uint64_t i = 0; i < c; ++i) {
            out.push_back(c == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(c - 1));
        }
        return out;
    }
    if (!v.is_array() || v.empty()) fail(field, "expected a non-empty array or {from, to, count}");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) out.push_back(get_double(v[i], field + "[" + std::to_string(i) + "]"));
    return out;
}

Kernel parse_kernel(const json& v) {
    if (v == "glauber") return Kernel::Glauber;
    if (v == "metropolis") return Kernel::Metropolis;
    fail("kernel", "expected \"glauber\" or \"metropolis\"");
}

}  // namespace

SubgraphPattern pattern_from_json(const json& j, const std::string& field) {
    try {
        if (j.is_string()) return SubgraphPattern::named(j.get<std::string>());
        if (!j.is_object()) fail(field, "expected a pattern name or {name, vertex_count, edges}");
        reject_unknown(j, field, {"name", "vertex_count", "edges"});
        if (!j.contains("vertex_count")) fail(field + ".vertex_count", "missing");
        if (!j.contains("edges") || !j["edges"].is_array()) fail(field + ".edges", "expected an array of [i, j] pairs");
        const std::string name = j.value("name", std::string("custom"));
        const auto vc = get_uint(j["vertex_count"], field + ".vertex_count");
        std::vector<std::pair<int, int>> edges;
        for (std::size_t k = 0; k < j["edges"].size(); ++k) {
            const auto& e = j["edges"][k];
            const std::string ef = field + ".edges[" + std::to_string(k) + "]";
            if (!e.is_array() || e.size() != 2) fail(ef, "expected [i, j]");
            edges.emplace_back(static_cast<int>(get_uint(e[0], ef)), static_cast<int>(get_uint(e[1], ef)));
        }
        return SubgraphPattern(name, vc, std::move(edges));
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& ex) {
        fail(field, ex.what());
    }
}

json pattern_to_json(const SubgraphPattern& p) {
    json edges = json::array();
    for (const auto& [a, b] : p.edges()) edges.push_back({a, b});
    return {{"name", p.name()}, {"vertex_count", p.vertex_count()}, {"edges", edges}};
}

json model_to_json(const ModelSpec& m) {
    json pats = json::array();
    for (const auto& p : m.patterns()) pats.push_back(pattern_to_json(p));
    return {{"patterns", pats}, {"betas", m.betas()}, {"allow_nonferromagnetic", m.allows_nonferromagnetic()}};
}

ExperimentConfig parse_config(const json& j, const std::optional<std::string>& experiment) {
    if (!j.is_object()) throw ConfigError("config: top level must be a JSON object");
    reject_unknown(j, "",
                   {"experiment", "n", "n_list", "patterns", "betas", "allow_nonferromagnetic", "kernel", "steps",
                    "max_steps", "thin", "samples", "gap_steps", "burn_in_steps", "check_interval", "seeds",
                    "out_dir", "threads", "tolerances", "start", "graph_file", "extra_patterns", "edge_tuples",
                    "p_star", "p", "cycle_lengths", "subset_samples", "sweep", "phase_curve_points"});

    ExperimentConfig c;
    if (j.contains("experiment")) {
        if (!j["experiment"].is_string()) fail("experiment", "expected a string");
        c.experiment = j["experiment"].get<std::string>();
        if (experiment && *experiment != c.experiment) {
            fail("experiment", "\"" + c.experiment + "\" does not match subcommand \"" + *experiment + "\"");
        }
    } else if (experiment) {
        c.experiment = *experiment;
    } else {
        fail("experiment", "missing");
    }
    const auto& names = experiment_names();
    if (std::find(names.begin(), names.end(), c.experiment) == names.end()) fail("experiment", "unknown experiment");

    // Model.
    if (!j.contains("patterns") || !j["patterns"].is_array()) fail("patterns", "expected an array");
    if (!j.contains("betas") || !j["betas"].is_array()) fail("betas", "expected an array");
    std::vector<SubgraphPattern> patterns;
    for (std::size_t i = 0; i < j["patterns"].size(); ++i) {
        patterns.push_back(pattern_from_json(j["patterns"][i], "patterns[" + std::to_string(i) + "]"));
    }
    std::vector<double> betas;
    for (std::size_t i = 0; i < j["betas"].size(); ++i) {
        betas.push_back(get_double(j["betas"][i], "betas[" + std::to_string(i) + "]"));
    }
    bool allow = false;
    if (j.contains("allow_nonferromagnetic")) {
        if (!j["allow_nonferromagnetic"].is_boolean()) fail("allow_nonferromagnetic", "expected a boolean");
        allow = j["allow_nonferromagnetic"].get<bool>();
    }
    try {
        c.model = ModelSpec(std::move(patterns), std::move(betas), allow);
    } catch (const std::exception& ex) {
        fail("patterns/betas", ex.what());
    }

    if (j.contains("n")) {
        c.n = get_uint(j["n"], "n");
        if (*c.n < 2) fail("n", "must be at least 2");
    }
    if (j.contains("n_list")) {
        if (!j["n_list"].is_array() || j["n_list"].empty()) fail("n_list", "expected a non-empty array");
        for (std::size_t i = 0; i < j["n_list"].size(); ++i) {
            const auto v = get_uint(j["n_list"][i], "n_list[" + std::to_string(i) + "]");
            if (v < 2) fail("n_list[" + std::to_string(i) + "]", "must be at least 2");
            c.n_list.push_back(v);
        }
    }
    if (j.contains("kernel")) c.kernel = parse_kernel(j["kernel"]);
    if (j.contains("steps")) c.steps = get_uint(j["steps"], "steps");
    if (j.contains("max_steps")) c.max_steps = get_uint(j["max_steps"], "max_steps");
    if (j.contains("thin")) {
        c.thin = get_uint(j["thin"], "thin");
        if (c.thin == 0) fail("thin", "must be positive");
    }
    if (j.contains("samples")) c.samples = get_uint(j["samples"], "samples");
    if (j.contains("gap_steps")) c.gap_steps = get_uint(j["gap_steps"], "gap_steps");
    if (j.contains("burn_in_steps")) c.burn_in_steps = get_uint(j["burn_in_steps"], "burn_in_steps");
    if (j.contains("check_interval")) c.check_interval = get_uint(j["check_interval"], "check_interval");

    if (j.contains("seeds")) {
        const auto& s = j["seeds"];
        c.seeds.clear();
        if (s.is_array()) {
            if (s.empty()) fail("seeds", "must not be empty");
            for (std::size_t i = 0; i < s.size(); ++i) c.seeds.push_back(get_uint(s[i], "seeds[" + std::to_string(i) + "]"));
        } else if (s.is_object()) {
            reject_unknown(s, "seeds", {"base", "count"});
            if (!s.contains("base") || !s.contains("count")) fail("seeds", "expected {base, count}");
            const auto base = get_uint(s["base"], "seeds.base");
            const auto count = get_uint(s["count"], "seeds.count");
            if (count == 0) fail("seeds.count", "must be positive");
            for (std::uint64_t i = 0; i < count; ++i) c.seeds.push_back(base + i);
        } else {
            fail("seeds", "expected a list or {base, count}");
        }
        std::sort(c.seeds.begin(), c.seeds.end());
        if (std::adjacent_find(c.seeds.begin(), c.seeds.end()) != c.seeds.end()) fail("seeds", "duplicate seed");
    }
    if (j.contains("out_dir")) {
        if (!j["out_dir"].is_string() || j["out_dir"].get<std::string>().empty()) fail("out_dir", "expected a path");
        c.out_dir = j["out_dir"].get<std::string>();
    }
    if (j.contains("threads")) {
        c.threads = static_cast<unsigned>(get_uint(j["threads"], "threads"));
        if (c.threads == 0) fail("threads", "must be positive");
    }
    if (j.contains("tolerances")) {
        const auto& t = j["tolerances"];
        if (!t.is_object()) fail("tolerances", "expected an object");
        reject_unknown(t, "tolerances", {"fixed_point_tol", "critical_margin", "grid_points", "epsilon", "pseudo_tolerance"});
        auto positive = [&](const char* key, double& dst) {
            if (!t.contains(key)) return;
            dst = get_double(t[key], std::string("tolerances.") + key);
            if (dst <= 0) fail(std::string("tolerances.") + key, "must be positive");
        };
        positive("fixed_point_tol", c.tolerances.fixed_point_tol);
        positive("critical_margin", c.tolerances.critical_margin);
        positive("epsilon", c.tolerances.epsilon);
        positive("pseudo_tolerance", c.tolerances.pseudo_tolerance);
        if (t.contains("grid_points")) {
            c.tolerances.grid_points = get_uint(t["grid_points"], "tolerances.grid_points");
            if (c.tolerances.grid_points < 2) fail("tolerances.grid_points", "must be at least 2");
        }
    }
    if (j.contains("start")) {
        const auto& s = j["start"];
        if (s != "empty" && s != "complete" && s != "erdos_renyi") {
            fail("start", "expected \"empty\", \"complete\" or \"erdos_renyi\"");
        }
        c.start = s.get<std::string>();
    }
    if (j.contains("graph_file")) {
        if (!j["graph_file"].is_string()) fail("graph_file", "expected a path");
        c.graph_file = j["graph_file"].get<std::string>();
    }
    if (j.contains("extra_patterns")) {
        if (!j["extra_patterns"].is_array()) fail("extra_patterns", "expected an array");
        for (std::size_t i = 0; i < j["extra_patterns"].size(); ++i) {
            const std::string f = "extra_patterns[" + std::to_string(i) + "]";
            auto p = pattern_from_json(j["extra_patterns"][i], f);
            if (p.edge_count() < 2) fail(f, "r statistics need a pattern with at least two edges");
            c.extra_patterns.push_back(std::move(p));
        }
    }
    if (j.contains("edge_tuples")) {
        const auto& t = j["edge_tuples"];
        if (!t.is_array()) fail("edge_tuples", "expected an array of edge lists");
        for (std::size_t i = 0; i < t.size(); ++i) {
            const std::string f = "edge_tuples[" + std::to_string(i) + "]";
            if (!t[i].is_array() || t[i].empty() || t[i].size() > 6) fail(f, "expected 1 to 6 edges");
            std::vector<std::pair<std::size_t, std::size_t>> tuple;
            for (std::size_t k = 0; k < t[i].size(); ++k) {
                const auto& e = t[i][k];
                const std::string ef = f + "[" + std::to_string(k) + "]";
                if (!e.is_array() || e.size() != 2) fail(ef, "expected [i, j]");
                tuple.emplace_back(get_uint(e[0], ef), get_uint(e[1], ef));
            }
            c.edge_tuples.push_back(std::move(tuple));
        }
    }
    if (j.contains("p_star")) c.p_star = get_probability(j["p_star"], "p_star");
    if (j.contains("p")) c.p = get_probability(j["p"], "p");
    if (j.contains("cycle_lengths")) {
        if (!j["cycle_lengths"].is_array()) fail("cycle_lengths", "expected an array");
        c.cycle_lengths.clear();
        for (std::size_t i = 0; i < j["cycle_lengths"].size(); ++i) {
            const std::string f = "cycle_lengths[" + std::to_string(i) + "]";
            const auto l = get_uint(j["cycle_lengths"][i], f);
            if (l < 3 || l > kMaxPatternVertices) fail(f, "must lie in [3, 6]");
            c.cycle_lengths.push_back(l);
        }
    }
    if (j.contains("subset_samples")) c.subset_samples = get_uint(j["subset_samples"], "subset_samples");
    if (j.contains("sweep")) {
        const auto& s = j["sweep"];
        if (!s.is_object()) fail("sweep", "expected an object");
        reject_unknown(s, "sweep", {"index_a", "values_a", "index_b", "values_b"});
        BetaSweep sw;
        if (!s.contains("index_a") || !s.contains("values_a")) fail("sweep", "needs index_a and values_a");
        sw.index_a = get_uint(s["index_a"], "sweep.index_a");
        if (sw.index_a >= c.model.size()) fail("sweep.index_a", "out of range for the model");
        sw.values_a = get_double_list(s["values_a"], "sweep.values_a");
        if (s.contains("index_b") != s.contains("values_b")) fail("sweep", "index_b and values_b go together");
        if (s.contains("index_b")) {
            sw.index_b = get_uint(s["index_b"], "sweep.index_b");
            if (*sw.index_b >= c.model.size() || *sw.index_b == sw.index_a) fail("sweep.index_b", "invalid index");
            sw.values_b = get_double_list(s["values_b"], "sweep.values_b");
        }
        c.sweep = std::move(sw);
    }
    if (j.contains("phase_curve_points")) c.phase_curve_points = get_uint(j["phase_curve_points"], "phase_curve_points");

    // Per-experiment requirements.
    const auto& e = c.experiment;
    const bool needs_n = e == "sample" || e == "couple" || e == "diag-burn-in" || e == "diag-independence" ||
                         e == "diag-hysteresis" || e == "exact-compare" || (e == "diag-pseudo" && !c.graph_file);
    if (needs_n && !c.n) fail("n", "required for experiment " + e);
    if (e == "mix-scan" && c.n_list.size() < 1) fail("n_list", "required for experiment mix-scan");
    if (e == "phase-sweep" && !c.sweep) fail("sweep", "required for experiment phase-sweep");
    if ((e == "sample" || e == "diag-burn-in" || e == "diag-hysteresis" || e == "exact-compare") && c.steps == 0) {
        fail("steps", "required (positive) for experiment " + e);
    }
    if (e == "exact-compare" && *c.n > kMaxExactVertices) fail("n", "exact comparison needs n <= 6");
    if (e == "diag-independence" && c.edge_tuples.empty()) fail("edge_tuples", "required for diag-independence");
    if (c.n) {
        for (std::size_t i = 0; i < c.edge_tuples.size(); ++i) {
            for (const auto& [a, b] : c.edge_tuples[i]) {
                if (a < 1 || b < 1 || a > *c.n || b > *c.n || a == b) {
                    fail("edge_tuples[" + std::to_string(i) + "]", "edge outside the vertex range");
                }
            }
        }
    }

    c.canonical = j;
    c.canonical.erase("out_dir");
    c.canonical.erase("threads");
    c.canonical["experiment"] = c.experiment;
    c.canonical["seeds"] = c.seeds;
    c.config_hash = sha256_hex(c.canonical.dump());
    return c;
}

ExperimentConfig load_config(const std::string& path, const std::optional<std::string>& experiment) {
    std::ifstream in(path);
    if (!in) throw ConfigError("config: cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::exception& ex) {
        throw ConfigError("config: parse error in '" + path + "': " + ex.what());
    }
    return parse_config(j, experiment);
}

}  // namespace ergm
