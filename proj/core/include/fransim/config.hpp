#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>

namespace fransim {

// Raised for malformed or out-of-range configuration; `key` names the
// offending entry so the CLI can report it and exit with code 2.
struct ConfigError : std::runtime_error {
    std::string key;
    ConfigError(std::string k, const std::string& msg)
        : std::runtime_error(msg), key(std::move(k)) {}
};

// Scenario parameters. Defaults reproduce the reference simulation setting;
// smaller desk-scale values are supplied through config files.
struct ScenarioConfig {
    int num_users = 40;             // U
    int num_faps = 3;               // K
    int num_ced2d = 6;              // N
    int num_files = 30;             // F
    double cell_radius_m = 1500.0;
    double d2d_range_m = 500.0;     // R
    double cache_fraction = 0.5;    // mu, per-cache capacity fraction
    double zipf_exponent = 0.5;     // gamma
    double fronthaul_bps = 30e6;    // C_fh
    int fetch_limit = 5;            // l_k, missing files per F-AP
    double rate_threshold = 0.5;    // R_th, bit/s/Hz
    double max_power_dbm_hz = -42.60;    // P_max as PSD
    double ced2d_power_dbm_hz = -42.60;  // Q as PSD (fixed)
    double noise_dbm_hz = -174.0;
    double bandwidth_hz = 10e6;
    int has_set_size = -1;          // <0 selects floor(F/2)
    double reward_weight = 1.0;     // omega
    double cache_cost = 0.8;        // caching cost per file (P2's second mu)
    int learn_iters = 1000;         // T: history length and training steps
    double sigma_scale = 1e5;       // b in sigma_t = t/b
    double epsilon_greedy = 0.1;    // Q-learning baseline exploration
    bool request_prob_cap = false;  // alternative request sampler, off by default
    std::uint64_t seed = 1;

    static double dbm_hz_to_watts(double dbm_hz, double bandwidth_hz) {
        return std::pow(10.0, (dbm_hz - 30.0) / 10.0) * bandwidth_hz;
    }

    double max_power_w() const { return dbm_hz_to_watts(max_power_dbm_hz, bandwidth_hz); }
    double ced2d_power_w() const { return dbm_hz_to_watts(ced2d_power_dbm_hz, bandwidth_hz); }
    double noise_power_w() const { return dbm_hz_to_watts(noise_dbm_hz, bandwidth_hz); }
    // Fronthaul capacity in spectral-efficiency units, comparable to link rates.
    double fronthaul_se() const { return fronthaul_bps / bandwidth_hz; }
    int effective_has_size() const { return has_set_size < 0 ? num_files / 2 : has_set_size; }
    int cache_capacity() const { return static_cast<int>(std::floor(cache_fraction * num_files)); }

    void validate() const;  // throws ConfigError
};

// Plain-text key=value parser ('#' starts a comment). Unknown keys and
// malformed values raise ConfigError.
ScenarioConfig parse_config_text(const std::string& text);
ScenarioConfig load_config_file(const std::string& path);
bool set_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value);

}  // namespace fransim
