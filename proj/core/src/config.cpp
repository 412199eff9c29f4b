#include "fransim/config.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

namespace fransim {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return {};
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

double parse_double(const std::string& key, const std::string& v) {
    try {
        std::size_t pos = 0;
        const double x = std::stod(v, &pos);
        if (pos != v.size()) throw std::invalid_argument(v);
        return x;
    } catch (const std::exception&) {
        throw ConfigError(key, "expected a number for '" + key + "', got '" + v + "'");
    }
}

long long parse_int(const std::string& key, const std::string& v) {
    // Accept scientific notation for counts (e.g. learn_iters=1e4).
    const double x = parse_double(key, v);
    const long long i = static_cast<long long>(x);
    if (static_cast<double>(i) != x)
        throw ConfigError(key, "expected an integer for '" + key + "', got '" + v + "'");
    return i;
}

bool parse_bool(const std::string& key, const std::string& v) {
    if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
    if (v == "false" || v == "0" || v == "no" || v == "off") return false;
    throw ConfigError(key, "expected a boolean for '" + key + "', got '" + v + "'");
}

}  // namespace

void ScenarioConfig::validate() const {
    auto need = [](bool ok, const char* key, const char* msg) {
        if (!ok) throw ConfigError(key, std::string(key) + ": " + msg);
    };
    need(num_users >= 1, "users", "must be >= 1");
    need(num_faps >= 1, "faps", "must be >= 1");
    need(num_ced2d >= 0, "ced2d_users", "must be >= 0");
    need(num_files >= 1, "files", "must be >= 1");
    need(cell_radius_m > 0, "cell_radius_m", "must be > 0");
    need(d2d_range_m >= 0, "d2d_range_m", "must be >= 0");
    need(cache_fraction >= 0 && cache_fraction <= 1, "cache_fraction", "must be in [0,1]");
    need(fronthaul_bps >= 0, "fronthaul_bps", "must be >= 0");
    need(fetch_limit >= 0, "fetch_limit", "must be >= 0");
    need(rate_threshold >= 0, "rate_threshold", "must be >= 0");
    need(bandwidth_hz > 0, "bandwidth_hz", "must be > 0");
    need(effective_has_size() < num_files, "has_set_size", "must be < files");
    need(learn_iters >= 1, "learn_iters", "must be >= 1");
    need(sigma_scale > 0, "sigma_scale", "must be > 0");
    need(epsilon_greedy >= 0 && epsilon_greedy <= 1, "epsilon_greedy", "must be in [0,1]");
}

bool set_config_key(ScenarioConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "users") cfg.num_users = static_cast<int>(parse_int(key, value));
    else if (key == "faps") cfg.num_faps = static_cast<int>(parse_int(key, value));
    else if (key == "ced2d_users") cfg.num_ced2d = static_cast<int>(parse_int(key, value));
    else if (key == "files") cfg.num_files = static_cast<int>(parse_int(key, value));
    else if (key == "cell_radius_m") cfg.cell_radius_m = parse_double(key, value);
    else if (key == "d2d_range_m") cfg.d2d_range_m = parse_double(key, value);
    else if (key == "cache_fraction") cfg.cache_fraction = parse_double(key, value);
    else if (key == "zipf_exponent") cfg.zipf_exponent = parse_double(key, value);
    else if (key == "fronthaul_bps") cfg.fronthaul_bps = parse_double(key, value);
    else if (key == "fetch_limit") cfg.fetch_limit = static_cast<int>(parse_int(key, value));
    else if (key == "rate_threshold") cfg.rate_threshold = parse_double(key, value);
    else if (key == "max_power_dbm_hz") cfg.max_power_dbm_hz = parse_double(key, value);
    else if (key == "ced2d_power_dbm_hz") cfg.ced2d_power_dbm_hz = parse_double(key, value);
    else if (key == "noise_dbm_hz") cfg.noise_dbm_hz = parse_double(key, value);
    else if (key == "bandwidth_hz") cfg.bandwidth_hz = parse_double(key, value);
    else if (key == "has_set_size") cfg.has_set_size = static_cast<int>(parse_int(key, value));
    else if (key == "reward_weight") cfg.reward_weight = parse_double(key, value);
    else if (key == "cache_cost") cfg.cache_cost = parse_double(key, value);
    else if (key == "learn_iters") cfg.learn_iters = static_cast<int>(parse_int(key, value));
    else if (key == "sigma_scale") cfg.sigma_scale = parse_double(key, value);
    else if (key == "epsilon_greedy") cfg.epsilon_greedy = parse_double(key, value);
    else if (key == "request_prob_cap") cfg.request_prob_cap = parse_bool(key, value);
    else if (key == "seed") cfg.seed = static_cast<std::uint64_t>(parse_int(key, value));
    else return false;
    return true;
}

ScenarioConfig parse_config_text(const std::string& text) {
    ScenarioConfig cfg;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "line " + std::to_string(lineno) + ": expected key=value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (!set_config_key(cfg, key, value))
            throw ConfigError(key, "unknown configuration key '" + key + "'");
    }
    cfg.validate();
    return cfg;
}

ScenarioConfig load_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str());
}

}  // namespace fransim
