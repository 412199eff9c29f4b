#include "fransim/harness.hpp"

#include <algorithm>
#include <array>
#include <atomic>
#include <charconv>
#include <cmath>
#include <fstream>
#include <functional>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace fransim {

namespace {

// Substream tags for per-realization draws; sweep-value independent so
// sweep points and schemes see paired environments.
enum Stream : std::uint64_t {
    kUsers = 1,
    kSide = 2,
    kChannel = 3,
    kCache = 4,
    kPartitionBase = 16,
    kTopology = 101,
    kHistory = 102,
    kTrain = 103,
};

struct SchemeSpec {
    enum class Delivery { clnc, ra, classical, uncoded } delivery;
    std::string id;
    bool rl_cache = false;  // clnc-cf-rl: force the learned cache
};

SchemeSpec parse_scheme(const std::string& s) {
    if (s == "clnc-cf") return {SchemeSpec::Delivery::clnc, s, false};
    if (s == "clnc-cf-rl") return {SchemeSpec::Delivery::clnc, s, true};
    if (s == "ra-idnc") return {SchemeSpec::Delivery::ra, s, false};
    if (s == "classical-idnc") return {SchemeSpec::Delivery::classical, s, false};
    if (s == "optimal-uncoded") return {SchemeSpec::Delivery::uncoded, s, false};
    throw ConfigError("schemes", "unknown scheme '" + s + "'");
}

void apply_sweep(ScenarioConfig& cfg, const std::string& var, double value) {
    if (var == "none") return;
    if (var == "U") cfg.num_users = static_cast<int>(value);
    else if (var == "F") cfg.num_files = static_cast<int>(value);
    else if (var == "gamma") cfg.zipf_exponent = value;
    else if (var == "mu") cfg.cache_fraction = value;
    else if (var == "C_fh") cfg.fronthaul_bps = value;
    else throw ConfigError("sweep", "unknown sweep variable '" + var + "'");
}

struct RealizationMetrics {
    double sum_rate_bps = 0.0;
    int served = 0;
    int cached = 0;
    int switch_passes = 0;
    int power_iterations = 0;
};

void parallel_for(int count, int threads, const std::function<void(int)>& fn) {
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min(threads, count));
    if (threads == 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    std::vector<std::thread> pool;
    std::exception_ptr error;
    std::mutex error_mu;
    for (int w = 0; w < threads; ++w)
        pool.emplace_back([&] {
            for (;;) {
                const int i = next.fetch_add(1);
                if (i >= count) return;
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard<std::mutex> lock(error_mu);
                    if (!error) error = std::current_exception();
                    return;
                }
            }
        });
    for (auto& t : pool) t.join();
    if (error) std::rethrow_exception(error);
}

}  // namespace

void ExperimentOptions::validate() const {
    if (schemes.empty()) throw ConfigError("schemes", "at least one scheme required");
    for (const auto& s : schemes) parse_scheme(s);
    if (caching != "fixed" && caching != "all" && caching != "none" && caching != "half" &&
        caching != "marl" && caching != "qlearn")
        throw ConfigError("caching", "unknown caching policy '" + caching + "'");
    if (realizations < 1) throw ConfigError("realizations", "must be >= 1");
    if (sweep != "none" && sweep_values.empty())
        throw ConfigError("sweep_values", "sweep requested but no sweep_values given");
    if (regen_users != "auto" && regen_users != "yes" && regen_users != "no")
        throw ConfigError("regen_users", "must be auto, yes or no");
}

HistoryProfile generate_history(const Topology& topo, const ScenarioConfig& cfg, Rng& rng,
                                int count) {
    if (count < 1) throw ConfigError("learn_iters", "history length must be >= 1");
    HistoryProfile h;
    h.channels.reserve(count);
    h.sides.reserve(count);
    for (int t = 0; t < count; ++t) {
        h.channels.push_back(draw_channel(topo, cfg, rng));
        h.sides.push_back(draw_side_info(cfg, rng));
    }
    return h;
}

std::vector<MetricsRow> run_experiment(const ScenarioConfig& base, const ExperimentOptions& opts) {
    base.validate();
    opts.validate();

    std::vector<SchemeSpec> schemes;
    for (const auto& s : opts.schemes) schemes.push_back(parse_scheme(s));

    const bool uses_learned_cache =
        opts.caching == "marl" || opts.caching == "qlearn" ||
        std::any_of(schemes.begin(), schemes.end(), [](const auto& s) { return s.rl_cache; });
    const bool regen_users =
        opts.regen_users == "yes" || (opts.regen_users == "auto" && !uses_learned_cache);

    std::vector<double> sweep_points =
        opts.sweep == "none" ? std::vector<double>{0.0} : opts.sweep_values;

    std::vector<MetricsRow> rows;
    for (std::size_t sp = 0; sp < sweep_points.size(); ++sp) {
        ScenarioConfig cfg = base;
        apply_sweep(cfg, opts.sweep, sweep_points[sp]);
        cfg.validate();

        Rng topo_rng = Rng::derive(cfg.seed, kTopology);
        const Topology topo_base = Topology::generate(cfg, topo_rng);

        // Learned caches are trained once per sweep point over a history
        // environment with fixed positions.
        CacheMatrix marl_cache, qlearn_cache;
        if (uses_learned_cache) {
            Rng hist_rng = Rng::derive(cfg.seed, kHistory, sp);
            const HistoryProfile hist =
                generate_history(topo_base, cfg, hist_rng, cfg.learn_iters);
            const bool need_marl =
                opts.caching == "marl" ||
                std::any_of(schemes.begin(), schemes.end(),
                            [](const auto& s) { return s.rl_cache; });
            if (need_marl) {
                Rng train_rng = Rng::derive(cfg.seed, kTrain, sp, 1);
                marl_cache = train(topo_base, hist, cfg, train_rng).cache;
            }
            if (opts.caching == "qlearn") {
                Rng train_rng = Rng::derive(cfg.seed, kTrain, sp, 2);
                qlearn_cache = q_learning_cache(topo_base, hist, cfg, train_rng).cache;
            }
        }

        // cache source per scheme: 0 = per-realization policy, 1 = marl, 2 = qlearn
        auto scheme_cache_source = [&](const SchemeSpec& s) {
            if (s.rl_cache) return 1;
            if (opts.caching == "marl") return 1;
            if (opts.caching == "qlearn") return 2;
            return 0;
        };
        const bool need_policy_cache =
            std::any_of(schemes.begin(), schemes.end(),
                        [&](const auto& s) { return scheme_cache_source(s) == 0; });

        const int R = opts.realizations;
        std::vector<std::vector<RealizationMetrics>> metrics(
            schemes.size(), std::vector<RealizationMetrics>(R));
        std::string dump;
        std::mutex dump_mu;

        parallel_for(R, opts.threads, [&](int r) {
            const Topology topo =
                regen_users
                    ? [&] {
                          Rng users_rng = Rng::derive(cfg.seed, kUsers, r);
                          return topo_base.with_users(
                              sample_users(cfg.num_users, cfg.cell_radius_m, users_rng));
                      }()
                    : topo_base;

            Rng side_rng = Rng::derive(cfg.seed, kSide, r);
            const SideInfo side = draw_side_info(cfg, side_rng);
            Rng chan_rng = Rng::derive(cfg.seed, kChannel, r);
            const ChannelRealization h = draw_channel(topo, cfg, chan_rng);

            CacheMatrix policy_cache;
            if (need_policy_cache) {
                Rng cache_rng = Rng::derive(cfg.seed, kCache, r);
                CachingKind kind = CachingKind::fixed;
                if (opts.caching == "all") kind = CachingKind::all;
                else if (opts.caching == "none") kind = CachingKind::none;
                else if (opts.caching == "half") kind = CachingKind::half;
                policy_cache = caching_policy(kind, cfg, cache_rng);
            }
            auto cache_of = [&](const SchemeSpec& s) -> const CacheMatrix& {
                const int src = scheme_cache_source(s);
                return src == 1 ? marl_cache : src == 2 ? qlearn_cache : policy_cache;
            };

            // Nash-stable partition per distinct cache source; delivery
            // baselines reuse the partition of their cache source.
            const PowerProfile pmax = PowerProfile::all_max(cfg);
            const LinkCapacities caps = compute_capacities(h, pmax);
            struct PartitionEntry {
                Partition partition;
                SwitchStats stats;
                bool ready = false;
            };
            std::array<PartitionEntry, 3> partitions;
            auto partition_of = [&](const SchemeSpec& s) -> PartitionEntry& {
                const int src = scheme_cache_source(s);
                auto& e = partitions[src];
                if (!e.ready) {
                    const CoalitionContext ctx{topo, cache_of(s), side, caps, cfg};
                    Rng part_rng = Rng::derive(cfg.seed, kPartitionBase + src, r);
                    e.partition = init_partition(ctx, part_rng);
                    e.stats = switch_phase(e.partition, ctx);
                    if (!e.stats.converged)
                        throw std::runtime_error("switch_phase did not converge");
                    e.ready = true;
                }
                return e;
            };

            for (std::size_t si = 0; si < schemes.size(); ++si) {
                const SchemeSpec& s = schemes[si];
                const CacheMatrix& cache = cache_of(s);
                RealizationMetrics m;
                m.cached = cache.total_cached();

                Schedule schedule;
                LinkCapacities sched_caps = caps;
                const Partition* partition = nullptr;
                if (s.delivery == SchemeSpec::Delivery::uncoded) {
                    DeliveryResult d = optimal_uncoded(topo, cache, side, h, cfg);
                    m.sum_rate_bps = d.sum_rate_bps;
                    schedule = std::move(d.schedule);
                } else {
                    PartitionEntry& pe = partition_of(s);
                    partition = &pe.partition;
                    m.switch_passes = pe.stats.passes;
                    if (s.delivery == SchemeSpec::Delivery::clnc) {
                        ClncResult c = alternate_clnc(pe.partition, cache, side, h, cfg);
                        m.sum_rate_bps = c.sum_rate_bps;
                        m.power_iterations = c.power_iterations;
                        schedule = std::move(c.schedule);
                        sched_caps = compute_capacities(h, c.powers);
                    } else if (s.delivery == SchemeSpec::Delivery::ra) {
                        DeliveryResult d = ra_idnc(topo, pe.partition, cache, side, h, cfg);
                        m.sum_rate_bps = d.sum_rate_bps;
                        schedule = std::move(d.schedule);
                    } else {
                        DeliveryResult d = classical_idnc(topo, pe.partition, cache, side, h, cfg);
                        m.sum_rate_bps = d.sum_rate_bps;
                        schedule = std::move(d.schedule);
                    }
                }

                const auto violations =
                    validate_schedule(schedule, side, cache, sched_caps, cfg, partition, &topo);
                if (!violations.empty())
                    throw std::runtime_error("schedule validation failed (" + s.id +
                                             "): " + violations.front());
                m.served = schedule.served();
                metrics[si][r] = m;

                if (opts.dump_graphs && r == 0 && sp == 0 && partition) {
                    const ConflictGraph g = build_graph(*partition, cache, side, caps, cfg);
                    std::lock_guard<std::mutex> lock(dump_mu);
                    dump += "// scheme " + s.id + "\n" + to_dot(g);
                }
            }
        });

        if (opts.dump_graphs && sp == 0 && !opts.dump_path.empty()) {
            std::ofstream f(opts.dump_path);
            if (!f) throw std::runtime_error("cannot write graph dump to " + opts.dump_path);
            f << dump;
        }

        for (std::size_t si = 0; si < schemes.size(); ++si) {
            MetricsRow row;
            row.scheme = schemes[si].id;
            row.sweep_var = opts.sweep;
            row.sweep_value = sweep_points[sp];
            row.realizations = R;
            double sum = 0.0, served = 0.0, cached = 0.0, passes = 0.0, piters = 0.0;
            for (const auto& m : metrics[si]) {
                sum += m.sum_rate_bps;
                served += m.served;
                cached += m.cached;
                passes += m.switch_passes;
                piters += m.power_iterations;
            }
            row.mean_sum_rate_bps = sum / R;
            double var = 0.0;
            for (const auto& m : metrics[si]) {
                const double d = m.sum_rate_bps - row.mean_sum_rate_bps;
                var += d * d;
            }
            row.std_sum_rate_bps = R > 1 ? std::sqrt(var / (R - 1)) : 0.0;
            row.mean_served_users = served / R;
            row.mean_cached_files = cached / R;
            row.mean_switch_passes = passes / R;
            row.mean_power_iterations = piters / R;
            rows.push_back(std::move(row));
        }
    }
    return rows;
}

Experiment parse_experiment_text(const std::string& text) {
    Experiment e;
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        const auto b = line.find_first_not_of(" \t\r\n");
        if (b == std::string::npos) continue;
        const auto end = line.find_last_not_of(" \t\r\n");
        line = line.substr(b, end - b + 1);
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError(line, "line " + std::to_string(lineno) + ": expected key=value");
        auto strip = [](std::string s) {
            const auto x = s.find_first_not_of(" \t");
            const auto y = s.find_last_not_of(" \t");
            return x == std::string::npos ? std::string{} : s.substr(x, y - x + 1);
        };
        const std::string key = strip(line.substr(0, eq));
        const std::string value = strip(line.substr(eq + 1));
        if (set_config_key(e.config, key, value)) continue;

        auto split_list = [](const std::string& v) {
            std::vector<std::string> out;
            std::istringstream ss(v);
            std::string item;
            while (std::getline(ss, item, ',')) {
                const auto x = item.find_first_not_of(" \t");
                const auto y = item.find_last_not_of(" \t");
                if (x != std::string::npos) out.push_back(item.substr(x, y - x + 1));
            }
            return out;
        };
        auto as_number = [&](const std::string& v) {
            try {
                std::size_t pos = 0;
                const double x = std::stod(v, &pos);
                if (pos != v.size()) throw std::invalid_argument(v);
                return x;
            } catch (const std::exception&) {
                throw ConfigError(key, "expected a number for '" + key + "', got '" + v + "'");
            }
        };
        if (key == "schemes") e.options.schemes = split_list(value);
        else if (key == "caching") e.options.caching = value;
        else if (key == "realizations") e.options.realizations = static_cast<int>(as_number(value));
        else if (key == "sweep") e.options.sweep = value;
        else if (key == "sweep_values") {
            e.options.sweep_values.clear();
            for (const auto& v : split_list(value)) e.options.sweep_values.push_back(as_number(v));
        } else if (key == "regen_users") e.options.regen_users = value;
        else if (key == "threads") e.options.threads = static_cast<int>(as_number(value));
        else throw ConfigError(key, "unknown configuration key '" + key + "'");
    }
    e.config.validate();
    e.options.validate();
    return e;
}

Experiment load_experiment_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path, "cannot open config file '" + path + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_experiment_text(ss.str());
}

std::string format_sig6(double v) {
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v, std::chars_format::general, 6);
    return std::string(buf, res.ptr);
}

namespace {
std::string csv_field(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}
}  // namespace

void emit_csv(const std::vector<MetricsRow>& rows, std::ostream& out) {
    out << "scheme,sweep_var,sweep_value,realizations,mean_sum_rate_bps,std_sum_rate_bps,"
           "mean_served_users,mean_cached_files,mean_switch_passes,mean_power_iterations\n";
    for (const auto& r : rows) {
        out << csv_field(r.scheme) << ',' << csv_field(r.sweep_var) << ','
            << format_sig6(r.sweep_value) << ',' << r.realizations << ','
            << format_sig6(r.mean_sum_rate_bps) << ',' << format_sig6(r.std_sum_rate_bps) << ','
            << format_sig6(r.mean_served_users) << ',' << format_sig6(r.mean_cached_files) << ','
            << format_sig6(r.mean_switch_passes) << ','
            << format_sig6(r.mean_power_iterations) << '\n';
    }
}

std::string csv_string(const std::vector<MetricsRow>& rows) {
    std::ostringstream ss;
    emit_csv(rows, ss);
    return ss.str();
}

void emit_trace_csv(const std::vector<TraceRow>& rows, std::ostream& out) {
    out << "iteration,reward,cache_count,simplex_residual,mean_entropy\n";
    for (const auto& r : rows)
        out << r.iteration << ',' << format_sig6(r.reward) << ',' << r.cache_count << ','
            << format_sig6(r.simplex_residual) << ',' << format_sig6(r.mean_entropy) << '\n';
}

}  // namespace fransim
