#pragma once

#include <iosfwd>
#include <string>

#include "fransim/baselines.hpp"

namespace fransim {

struct MetricsRow {
    std::string scheme;
    std::string sweep_var = "none";
    double sweep_value = 0.0;
    int realizations = 0;
    double mean_sum_rate_bps = 0.0;
    double std_sum_rate_bps = 0.0;
    double mean_served_users = 0.0;
    double mean_cached_files = 0.0;
    double mean_switch_passes = 0.0;
    double mean_power_iterations = 0.0;
};

struct ExperimentOptions {
    std::vector<std::string> schemes = {"clnc-cf"};
    std::string caching = "fixed";     // fixed | all | none | half | marl | qlearn
    int realizations = 200;
    std::string sweep = "none";        // none | U | F | gamma | mu | C_fh
    std::vector<double> sweep_values;
    std::string regen_users = "auto";  // auto | yes | no
    bool dump_graphs = false;
    std::string dump_path;
    int threads = 0;                   // 0 = hardware concurrency

    void validate() const;  // throws ConfigError
};

// T tuples of (channel realization, side information) over a fixed topology.
HistoryProfile generate_history(const Topology& topo, const ScenarioConfig& cfg, Rng& rng,
                                int count);

// Full Monte-Carlo protocol: per sweep point and scheme, average the
// validated per-realization sum-rate over `realizations` paired draws.
// Deterministic for a fixed (config, options, seed).
std::vector<MetricsRow> run_experiment(const ScenarioConfig& cfg, const ExperimentOptions& opts);

// Config files hold scenario keys plus experiment keys (schemes, caching,
// realizations, sweep, sweep_values, regen_users, threads).
struct Experiment {
    ScenarioConfig config;
    ExperimentOptions options;
};
Experiment parse_experiment_text(const std::string& text);
Experiment load_experiment_file(const std::string& path);

void emit_csv(const std::vector<MetricsRow>& rows, std::ostream& out);
std::string csv_string(const std::vector<MetricsRow>& rows);
void emit_trace_csv(const std::vector<TraceRow>& rows, std::ostream& out);
std::string format_sig6(double v);  // 6 significant digits, locale-independent

}  // namespace fransim
