#include "oracles.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "fransim/coalition.hpp"

namespace fransim::oracle {

namespace {

// Value of one targeted set, or -1 if infeasible. Written directly from the
// constraint definitions, not via the conflict graph.
double targeted_set_value(const std::vector<int>& members, std::uint32_t mask, TransmitterId tx,
                          const CacheMatrix& cache, const SideInfo& side,
                          const LinkCapacities& caps, const ScenarioConfig& cfg) {
    std::vector<int> sel;
    for (std::size_t i = 0; i < members.size(); ++i)
        if (mask & (1u << i)) sel.push_back(members[i]);
    if (sel.empty()) return 0.0;

    std::vector<FileId> combo;
    for (int u : sel) {
        const FileId f = side.wants[u];
        if (std::find(combo.begin(), combo.end(), f) == combo.end()) combo.push_back(f);
    }
    // instant decodability: every user must know all combo files except its own
    for (int u : sel)
        for (FileId f : combo)
            if (f != side.wants[u] && !side.has[u].contains(f)) return -1.0;
    // cache / fetch feasibility
    int missing = 0;
    for (FileId f : combo)
        if (!cache.tx_has(tx, f)) ++missing;
    if (!tx.is_fap() && missing > 0) return -1.0;
    if (tx.is_fap() && missing > cfg.fetch_limit) return -1.0;

    double rate = std::numeric_limits<double>::infinity();
    for (int u : sel) rate = std::min(rate, tx_capacity(caps, tx, u));
    if (rate < cfg.rate_threshold) return -1.0;

    double value = 0.0;
    for (int u : sel) {
        const bool fetched = !cache.tx_has(tx, side.wants[u]);
        value += fetched ? std::min(cfg.fronthaul_se(), rate) : rate;
    }
    return value;
}

}  // namespace

double schedule_space_optimum(const Partition& partition, const CacheMatrix& cache,
                              const SideInfo& side, const LinkCapacities& caps,
                              const ScenarioConfig& cfg) {
    double total = 0.0;
    auto best_for = [&](const std::vector<int>& members, TransmitterId tx) {
        double best = 0.0;
        const std::uint32_t count = 1u << members.size();
        for (std::uint32_t mask = 1; mask < count; ++mask)
            best = std::max(best, targeted_set_value(members, mask, tx, cache, side, caps, cfg));
        return best;
    };
    for (int k = 0; k < cfg.num_faps; ++k)
        total += best_for(partition.fap_members[k], TransmitterId::fap(k));
    for (int n = 0; n < cfg.num_ced2d; ++n)
        total += best_for(partition.d2d_members[n], TransmitterId::ced2d(n));
    return total;
}

double brute_force_assignment(const std::vector<std::vector<double>>& value, int num_users) {
    const int T = static_cast<int>(value.size());
    double best = 0.0;
    // recursive assignment over transmitters
    auto rec = [&](auto&& self, int t, std::uint32_t used, double acc) -> void {
        if (t == T) {
            best = std::max(best, acc);
            return;
        }
        self(self, t + 1, used, acc);  // transmitter idle
        for (int u = 0; u < num_users; ++u) {
            if (used & (1u << u)) continue;
            if (value[t][u] < 0) continue;
            self(self, t + 1, used | (1u << u), acc + value[t][u]);
        }
    };
    rec(rec, 0, 0, 0.0);
    return best;
}

int max_cardinality_exhaustive(const std::vector<std::vector<bool>>& adj) {
    const int n = static_cast<int>(adj.size());
    int best = 0;
    for (std::uint32_t mask = 1; mask < (1u << n); ++mask) {
        bool clique = true;
        for (int i = 0; i < n && clique; ++i) {
            if (!(mask & (1u << i))) continue;
            for (int j = i + 1; j < n && clique; ++j)
                if ((mask & (1u << j)) && !adj[i][j]) clique = false;
        }
        if (clique) best = std::max(best, std::popcount(mask));
    }
    return best;
}

double chi_square(const std::vector<long>& observed, const std::vector<double>& pmf) {
    long total = 0;
    for (long o : observed) total += o;
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        const double expected = pmf[i] * static_cast<double>(total);
        const double d = static_cast<double>(observed[i]) - expected;
        stat += d * d / expected;
    }
    return stat;
}

Topology full_coverage_topology(int num_users, int num_faps, int num_ced2d) {
    Topology t;
    t.cell_radius_m = 1500.0;
    t.d2d_range_m = 500.0;
    t.fap_positions.assign(num_faps, Point{0.0, 0.0});
    t.ced2d_positions.assign(num_ced2d, Point{0.0, 0.0});
    t.user_positions.assign(num_users, Point{0.0, 0.0});
    t.coverage = compute_coverage(t.ced2d_positions, t.user_positions, t.d2d_range_m);
    return t;
}

SmallInstance random_small_instance(Rng& rng, int num_users, int num_faps, int num_ced2d,
                                    int num_files, double rate_threshold) {
    SmallInstance in;
    in.cfg.num_users = num_users;
    in.cfg.num_faps = num_faps;
    in.cfg.num_ced2d = num_ced2d;
    in.cfg.num_files = num_files;
    in.cfg.rate_threshold = rate_threshold;
    in.cfg.fetch_limit = 1 + static_cast<int>(rng.uniform_int(3));
    in.cfg.fronthaul_bps = (1.0 + 3.0 * rng.uniform()) * in.cfg.bandwidth_hz;
    in.cfg.has_set_size = num_files / 2;

    in.topo = full_coverage_topology(num_users, num_faps, num_ced2d);

    in.side.has = init_has_sets(num_files, num_users, num_files / 2, rng);
    in.side.wants = sample_requests(0.5, num_files, num_users, in.side.has, rng);

    in.cache = CacheMatrix(num_files, num_faps, num_ced2d);
    for (auto& e : in.cache.fap_entries) e = rng.uniform() < 0.5 ? 1 : 0;
    for (auto& e : in.cache.ced2d_entries) e = rng.uniform() < 0.6 ? 1 : 0;

    in.caps.fap.assign(num_faps, std::vector<double>(num_users));
    in.caps.d2d.assign(num_ced2d, std::vector<double>(num_users));
    for (auto& row : in.caps.fap)
        for (auto& c : row) c = 0.25 + 4.0 * rng.uniform();
    for (auto& row : in.caps.d2d)
        for (auto& c : row) c = 0.25 + 4.0 * rng.uniform();

    const CoalitionContext ctx{in.topo, in.cache, in.side, in.caps, in.cfg};
    in.partition = init_partition(ctx, rng);
    return in;
}

}  // namespace fransim::oracle
