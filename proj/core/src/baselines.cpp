#include "fransim/baselines.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <numeric>

namespace fransim {

namespace {

Schedule empty_schedule(const ScenarioConfig& cfg) {
    Schedule s;
    s.per_tx.resize(cfg.num_faps + cfg.num_ced2d);
    for (int k = 0; k < cfg.num_faps; ++k) s.per_tx[k].tx = TransmitterId::fap(k);
    for (int n = 0; n < cfg.num_ced2d; ++n)
        s.per_tx[cfg.num_faps + n].tx = TransmitterId::ced2d(n);
    return s;
}

DeliveryResult finish(Schedule s, const SideInfo& side, const ScenarioConfig& cfg) {
    DeliveryResult r;
    r.schedule = std::move(s);
    r.sum_rate_se = sum_rate_se(r.schedule, side, cfg.fronthaul_se());
    r.sum_rate_bps = r.sum_rate_se * cfg.bandwidth_hz;
    return r;
}

void fill_tx_entry(TransmitterSchedule& t, const std::vector<int>& users, double rate,
                   const CacheMatrix& cache, const SideInfo& side) {
    t.targeted = users;
    std::sort(t.targeted.begin(), t.targeted.end());
    t.rate = rate;
    for (int u : t.targeted) {
        const FileId f = side.wants[u];
        if (std::find(t.combo.begin(), t.combo.end(), f) == t.combo.end()) t.combo.push_back(f);
    }
    std::sort(t.combo.begin(), t.combo.end());
    if (t.tx.is_fap())
        for (FileId f : t.combo)
            if (!cache.tx_has(t.tx, f)) t.fetched.push_back(f);
}

// Candidate users of one transmitter, recovered from its conflict graph so
// eligibility (threshold, cache, fetch budget) matches the main scheme.
struct TxCandidates {
    std::vector<int> users;               // distinct, ascending
    std::vector<double> cap;              // capacity per candidate
    std::vector<std::uint64_t> adj;       // decodability, rate-free
};

TxCandidates tx_candidates(const std::vector<int>& members, TransmitterId tx,
                           const CacheMatrix& cache, const SideInfo& side,
                           const LinkCapacities& caps, const ScenarioConfig& cfg) {
    TxCandidates c;
    const ConflictGraph g = build_tx_graph(members, tx, cache, side, caps, cfg);
    for (const auto& v : g.vertices)
        if (c.users.empty() || c.users.back() != v.user) c.users.push_back(v.user);
    if (c.users.size() > 64) c.users.resize(64);  // defensive; not reached at sane scales
    c.cap.resize(c.users.size());
    c.adj.assign(c.users.size(), 0);
    for (std::size_t a = 0; a < c.users.size(); ++a) {
        c.cap[a] = tx_capacity(caps, tx, c.users[a]);
        const FileId fa = side.wants[c.users[a]];
        for (std::size_t b = 0; b < c.users.size(); ++b) {
            if (a == b) continue;
            const FileId fb = side.wants[c.users[b]];
            const bool ok = fa == fb || (side.has[c.users[b]].contains(fa) &&
                                         side.has[c.users[a]].contains(fb));
            if (ok) c.adj[a] |= 1ULL << b;
        }
    }
    return c;
}

// Exhaustive maximum-cardinality clique; ties resolve to the higher minimum
// capacity, then to the lexicographically smallest user set.
struct CardCliqueSearch {
    const TxCandidates& c;
    std::vector<int> best;
    double best_min_cap = 0.0;
    std::vector<int> cur;

    double min_cap(const std::vector<int>& ids) const {
        double m = std::numeric_limits<double>::infinity();
        for (int i : ids) m = std::min(m, c.cap[i]);
        return m;
    }

    void consider() {
        if (cur.empty()) return;
        const double mc = min_cap(cur);
        if (cur.size() > best.size() || (cur.size() == best.size() && mc > best_min_cap)) {
            best = cur;
            best_min_cap = mc;
        }
    }

    void expand(std::uint64_t cand) {
        consider();
        while (cand) {
            if (cur.size() + static_cast<std::size_t>(std::popcount(cand)) < best.size()) return;
            const int v = std::countr_zero(cand);
            cand &= cand - 1;
            cur.push_back(v);
            expand(cand & c.adj[v]);
            cur.pop_back();
        }
    }
};

std::vector<int> best_cardinality_clique(const TxCandidates& c) {
    CardCliqueSearch s{c};
    const std::uint64_t all = c.users.empty() ? 0 : (c.users.size() >= 64 ? ~0ULL
                                                     : (1ULL << c.users.size()) - 1);
    s.expand(all);
    return s.best;  // indices into c.users
}

}  // namespace

DeliveryResult optimal_uncoded(const Topology& topo, const CacheMatrix& cache,
                               const SideInfo& side, const ChannelRealization& h,
                               const ScenarioConfig& cfg) {
    const PowerProfile pmax = PowerProfile::all_max(cfg);
    const LinkCapacities caps = compute_capacities(h, pmax);
    const int K = cfg.num_faps, N = cfg.num_ced2d, U = cfg.num_users;
    const int T = K + N;
    const double kInf = -1.0;

    // value[t][u] < 0 marks an infeasible pair.
    std::vector<std::vector<double>> value(T, std::vector<double>(U, kInf));
    for (int t = 0; t < T; ++t) {
        const TransmitterId tx = t < K ? TransmitterId::fap(t) : TransmitterId::ced2d(t - K);
        for (int u = 0; u < U; ++u) {
            const double cap = tx_capacity(caps, tx, u);
            if (cap < cfg.rate_threshold) continue;
            const FileId f = side.wants[u];
            const bool cached = cache.tx_has(tx, f);
            if (tx.is_fap()) {
                if (cached)
                    value[t][u] = cap;
                else if (cfg.fetch_limit >= 1)
                    value[t][u] = std::min(cfg.fronthaul_se(), cap);
            } else if (cached && topo.covers(tx.index, u)) {
                value[t][u] = cap;
            }
        }
    }

    // Exact assignment: users in order, DP over the transmitter subset.
    const int masks = 1 << T;
    std::vector<std::vector<double>> dp(U + 1, std::vector<double>(masks, 0.0));
    std::vector<std::vector<int>> choice(U + 1, std::vector<int>(masks, -1));
    for (int u = U - 1; u >= 0; --u) {
        for (int mask = 0; mask < masks; ++mask) {
            double bst = dp[u + 1][mask];
            int ch = -1;
            for (int t = 0; t < T; ++t) {
                if (mask & (1 << t)) continue;
                if (value[t][u] < 0) continue;
                const double cand = value[t][u] + dp[u + 1][mask | (1 << t)];
                if (cand > bst) {
                    bst = cand;
                    ch = t;
                }
            }
            dp[u][mask] = bst;
            choice[u][mask] = ch;
        }
    }

    Schedule s = empty_schedule(cfg);
    int mask = 0;
    for (int u = 0; u < U; ++u) {
        const int t = choice[u][mask];
        if (t < 0) continue;
        mask |= 1 << t;
        auto& entry = s.per_tx[t];
        const TransmitterId tx = entry.tx;
        entry.targeted = {u};
        entry.combo = {side.wants[u]};
        entry.rate = tx_capacity(caps, tx, u);
        if (tx.is_fap() && !cache.tx_has(tx, side.wants[u]))
            entry.fetched = {side.wants[u]};
    }
    return finish(std::move(s), side, cfg);
}

DeliveryResult classical_idnc(const Topology&, const Partition& partition,
                              const CacheMatrix& cache, const SideInfo& side,
                              const ChannelRealization& h, const ScenarioConfig& cfg) {
    const PowerProfile pmax = PowerProfile::all_max(cfg);
    const LinkCapacities caps = compute_capacities(h, pmax);
    Schedule s = empty_schedule(cfg);
    for (int t = 0; t < cfg.num_faps + cfg.num_ced2d; ++t) {
        const TransmitterId tx = s.per_tx[t].tx;
        const auto& members = partition.members(tx);
        if (members.empty()) continue;
        const TxCandidates c = tx_candidates(members, tx, cache, side, caps, cfg);
        const auto clique = best_cardinality_clique(c);
        if (clique.empty()) continue;
        std::vector<int> users;
        double rate = std::numeric_limits<double>::infinity();
        for (int i : clique) {
            users.push_back(c.users[i]);
            rate = std::min(rate, c.cap[i]);
        }
        fill_tx_entry(s.per_tx[t], users, rate, cache, side);
    }
    return finish(std::move(s), side, cfg);
}

DeliveryResult ra_idnc(const Topology&, const Partition& partition,
                       const CacheMatrix& cache, const SideInfo& side,
                       const ChannelRealization& h, const ScenarioConfig& cfg) {
    const PowerProfile pmax = PowerProfile::all_max(cfg);
    const LinkCapacities caps = compute_capacities(h, pmax);
    const int T = cfg.num_faps + cfg.num_ced2d;

    std::vector<TxCandidates> cands(T);
    std::vector<double> rates;
    {
        Schedule proto = empty_schedule(cfg);
        for (int t = 0; t < T; ++t) {
            const TransmitterId tx = proto.per_tx[t].tx;
            cands[t] = tx_candidates(partition.members(tx), tx, cache, side, caps, cfg);
            for (double cap : cands[t].cap) rates.push_back(cap);
        }
    }
    std::sort(rates.begin(), rates.end());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

    double best_obj = 0.0;
    double best_rate = 0.0;
    std::vector<std::vector<int>> best_users;
    for (double r : rates) {
        // Restrict each transmitter to users sustaining rate r; the common
        // rate scores (total targeted) * r.
        std::vector<std::vector<int>> users_per_tx(T);
        int total = 0;
        for (int t = 0; t < T; ++t) {
            TxCandidates sub;
            std::vector<int> map;
            for (std::size_t i = 0; i < cands[t].users.size(); ++i)
                if (cands[t].cap[i] >= r) map.push_back(static_cast<int>(i));
            for (std::size_t a = 0; a < map.size(); ++a) {
                sub.users.push_back(cands[t].users[map[a]]);
                sub.cap.push_back(cands[t].cap[map[a]]);
                std::uint64_t row = 0;
                for (std::size_t b = 0; b < map.size(); ++b)
                    if (cands[t].adj[map[a]] & (1ULL << map[b])) row |= 1ULL << b;
                sub.adj.push_back(row);
            }
            const auto clique = best_cardinality_clique(sub);
            for (int i : clique) users_per_tx[t].push_back(sub.users[i]);
            total += static_cast<int>(clique.size());
        }
        const double obj = static_cast<double>(total) * r;
        if (obj > best_obj) {
            best_obj = obj;
            best_rate = r;
            best_users = std::move(users_per_tx);
        }
    }

    Schedule s = empty_schedule(cfg);
    if (best_obj > 0.0)
        for (int t = 0; t < T; ++t)
            if (!best_users[t].empty())
                fill_tx_entry(s.per_tx[t], best_users[t], best_rate, cache, side);
    return finish(std::move(s), side, cfg);
}

CacheMatrix caching_policy(CachingKind kind, const ScenarioConfig& cfg, Rng& rng) {
    CacheMatrix m(cfg.num_files, cfg.num_faps, cfg.num_ced2d);
    switch (kind) {
        case CachingKind::all:
            std::fill(m.fap_entries.begin(), m.fap_entries.end(), 1);
            std::fill(m.ced2d_entries.begin(), m.ced2d_entries.end(), 1);
            break;
        case CachingKind::none:
            break;
        case CachingKind::half:
            for (auto& e : m.fap_entries) e = rng.uniform() < 0.5 ? 1 : 0;
            for (auto& e : m.ced2d_entries) e = rng.uniform() < 0.5 ? 1 : 0;
            break;
        case CachingKind::fixed: {
            // floor(mu F) distinct files per cache; the full permutation is
            // drawn so the draw count does not depend on mu (sweep pairing).
            const int take = cfg.cache_capacity();
            auto fill_one = [&](auto set_entry) {
                std::vector<FileId> perm(cfg.num_files);
                std::iota(perm.begin(), perm.end(), FileId{1});
                for (int i = 0; i < cfg.num_files - 1; ++i) {
                    const auto j = i + static_cast<int>(rng.uniform_int(cfg.num_files - i));
                    std::swap(perm[i], perm[j]);
                }
                for (int i = 0; i < take; ++i) set_entry(perm[i]);
            };
            for (int k = 0; k < cfg.num_faps; ++k)
                fill_one([&](FileId f) { m.set_fap(k, f, true); });
            for (int n = 0; n < cfg.num_ced2d; ++n)
                fill_one([&](FileId f) { m.set_ced2d(n, f, true); });
            break;
        }
    }
    return m;
}

TrainResult q_learning_cache(const Topology& topo, const HistoryProfile& history,
                             const ScenarioConfig& cfg, Rng& rng) {
    const int D = num_virtual_agents(cfg.num_files, cfg.num_faps, cfg.num_ced2d);
    TrainResult out{CacheMatrix(cfg.num_files, cfg.num_faps, cfg.num_ced2d), {}, LearnerState(D)};
    std::vector<std::array<double, 2>> q(D, {0.0, 0.0});  // index 0 = cache
    out.traces.reserve(cfg.learn_iters);

    for (long t = 1; t <= cfg.learn_iters; ++t) {
        const LearnSchedules sch = learn_schedules(t, cfg.sigma_scale);
        std::vector<std::uint8_t> actions(D);
        for (int i = 0; i < D; ++i) {
            if (rng.uniform() < cfg.epsilon_greedy)
                actions[i] = static_cast<std::uint8_t>(rng.uniform_int(2));
            else
                actions[i] = q[i][0] > q[i][1] ? 1 : 0;  // tie: do not cache
        }
        const CacheMatrix cache =
            apply_actions(actions, cfg.num_files, cfg.num_faps, cfg.num_ced2d);
        const int idx = static_cast<int>((t - 1) % history.size());
        const RealizationEval eval =
            run_delivery(topo, cache, history.sides[idx], history.channels[idx], cfg, rng);
        const double r = marl_reward(eval.clnc.sum_rate_se, cache.total_cached(),
                                     cfg.reward_weight, cfg.cache_cost);
        for (int i = 0; i < D; ++i) {
            const int j = actions[i] ? 0 : 1;
            q[i][j] += sch.alpha * (r - q[i][j]);
        }
        out.traces.push_back({t, r, cache.total_cached(), 0.0, 0.0});
    }

    std::vector<std::uint8_t> decision(D, 0);
    std::vector<double> score(D, 0.0);
    for (int i = 0; i < D; ++i) {
        decision[i] = q[i][0] > q[i][1] ? 1 : 0;
        score[i] = q[i][0] - q[i][1];
    }
    const CacheMatrix raw = apply_actions(decision, cfg.num_files, cfg.num_faps, cfg.num_ced2d);
    out.cache = enforce_cache_capacity(raw, score, cfg.cache_capacity());
    for (int i = 0; i < D; ++i) out.state.x[i] = q[i];
    return out;
}

}  // namespace fransim
