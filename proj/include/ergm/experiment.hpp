#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "ergm/dynamics.hpp"
#include "ergm/model.hpp"
#include "ergm/pattern.hpp"

namespace ergm {

/// Invalid configuration; the message names the offending field.
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

SubgraphPattern pattern_from_json(const nlohmann::json& j, const std::string& field = "pattern");
nlohmann::json pattern_to_json(const SubgraphPattern& p);
nlohmann::json model_to_json(const ModelSpec& m);

struct BetaSweep {
    std::size_t index_a = 0;
    std::vector<double> values_a;
    std::optional<std::size_t> index_b;
    std::vector<double> values_b;
};

struct Tolerances {
    double fixed_point_tol = 1e-12;
    double critical_margin = 1e-3;
    std::size_t grid_points = 10000;
    double epsilon = 0.05;          // burn-in band half-width
    double pseudo_tolerance = 0.10;
};

/// A validated experiment description. Built only through parse_config.
struct ExperimentConfig {
    std::string experiment;
    ModelSpec model = ModelSpec::edges_only(0.0);
    std::optional<std::size_t> n;
    std::vector<std::size_t> n_list;
    Kernel kernel = Kernel::Glauber;
    std::uint64_t steps = 0;
    std::optional<std::uint64_t> max_steps;
    std::uint64_t thin = 1;
    std::uint64_t samples = 1000;
    std::uint64_t gap_steps = 0;
    std::uint64_t burn_in_steps = 0;
    std::uint64_t check_interval = 0;
    std::vector<std::uint64_t> seeds{1};
    std::string out_dir = "out";
    unsigned threads = 1;
    Tolerances tolerances;
    std::string start = "empty";   // empty | complete | erdos_renyi
    std::optional<std::string> graph_file;
    std::vector<SubgraphPattern> extra_patterns;
    std::vector<std::vector<std::pair<std::size_t, std::size_t>>> edge_tuples;
    std::optional<double> p_star;
    std::optional<double> p;
    std::vector<std::size_t> cycle_lengths{4};
    std::size_t subset_samples = 100;
    std::optional<BetaSweep> sweep;
    std::size_t phase_curve_points = 0;

    /// Canonical JSON of the settings that determine results (everything
    /// except out_dir and threads).
    nlohmann::json canonical;
    /// SHA-256 of canonical.dump().
    std::string config_hash;
};

inline const std::vector<std::string>& experiment_names() {
    static const std::vector<std::string> names{"phase",          "phase-sweep",       "sample",
                                                "couple",         "mix-scan",          "diag-burn-in",
                                                "diag-independence", "diag-hysteresis", "diag-pseudo",
                                                "exact-compare"};
    return names;
}

/// Validates a JSON config. Unknown keys are rejected. `experiment` may be
/// supplied by the caller (CLI subcommand) and must then agree with the
/// file's "experiment" key if present.
ExperimentConfig parse_config(const nlohmann::json& j, const std::optional<std::string>& experiment = std::nullopt);
ExperimentConfig load_config(const std::string& path, const std::optional<std::string>& experiment = std::nullopt);

struct RunResult {
    std::vector<std::string> files;  // relative to out_dir, manifest last
};

/// Runs the experiment and writes its outputs (each via a temporary file and
/// rename) plus manifest.json under cfg.out_dir. Outputs depend only on the
/// canonical config.
RunResult run_experiment(const ExperimentConfig& cfg);

struct MixingRow {
    std::size_t n = 0;
    std::optional<double> median_steps;  // empty when the median is censored
    std::size_t censored_count = 0;
    std::size_t runs = 0;
};

struct MixingScalingFit {
    std::vector<MixingRow> rows;
    double exponent = 0.0;        // b in log(median / ln n) = b log n + a
    double exponent_stderr = 0.0;
    double prefactor = 0.0;       // exp(a)
    std::vector<double> residuals;
    std::size_t points_used = 0;
};

/// Median coupling time per n; timeouts count as +infinity.
MixingRow summarize_coupling(std::size_t n, const std::vector<CouplingResult>& runs);

/// Least squares on the uncensored rows. Throws std::invalid_argument with
/// fewer than three usable n values.
MixingScalingFit fit_mixing_scaling(const std::vector<MixingRow>& rows);

std::string sha256_hex(const std::string& data);

}  // namespace ergm
