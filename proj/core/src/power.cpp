#include "fransim/power.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace fransim {

namespace {

// SINR of (k, u) under noise-normalized gains, interference restricted to
// F-APs that transmit this interval.
double gamma_of(int k, int u, const PowerProfile& p, const ChannelRealization& h,
                const std::vector<std::uint8_t>& active) {
    const double noise = h.noise_power_w;
    double interference = 0.0;
    for (std::size_t m = 0; m < h.fap_gain.size(); ++m)
        if (static_cast<int>(m) != k && active[m])
            interference += p.fap_power_w[m] * (h.fap_gain[m][u] / noise);
    return p.fap_power_w[k] * (h.fap_gain[k][u] / noise) / (1.0 + interference);
}

// argmin of R_{k,u} over the targeted set == argmin of the SINR.
int bottleneck_user(int k, const TransmitterSchedule& t, const PowerProfile& p,
                    const ChannelRealization& h, const std::vector<std::uint8_t>& active) {
    int best = t.targeted.front();
    double best_gamma = gamma_of(k, best, p, h, active);
    for (int u : t.targeted) {
        const double g = gamma_of(k, u, p, h, active);
        if (g < best_gamma) {
            best_gamma = g;
            best = u;
        }
    }
    return best;
}

std::vector<std::uint8_t> active_faps(const Schedule& s, int num_faps) {
    std::vector<std::uint8_t> active(num_faps, 0);
    for (int k = 0; k < num_faps; ++k) active[k] = !s.per_tx[k].targeted.empty();
    return active;
}

}  // namespace

PowerProfile power_update_step(const PowerProfile& powers, const Schedule& schedule,
                               const ChannelRealization& h, const ScenarioConfig& cfg) {
    const int K = cfg.num_faps;
    const double pmax = cfg.max_power_w();
    const double noise = h.noise_power_w;
    const auto active = active_faps(schedule, K);

    // Bottleneck user and its SINR per active F-AP, at current powers.
    std::vector<int> vhat(K, -1);
    std::vector<double> ghat(K, 0.0);
    for (int k = 0; k < K; ++k) {
        if (!active[k]) continue;
        vhat[k] = bottleneck_user(k, schedule.per_tx[k], powers, h, active);
        ghat[k] = gamma_of(k, vhat[k], powers, h, active);
    }

    PowerProfile next = powers;
    for (int k = 0; k < K; ++k) {
        if (!active[k]) {
            next.fap_power_w[k] = 0.0;
            continue;
        }
        const double tau_k = static_cast<double>(schedule.per_tx[k].targeted.size());
        const double numerator = tau_k * ghat[k] / (1.0 + ghat[k]);
        double denominator = 0.0;
        for (int l = 0; l < K; ++l) {
            if (l == k || !active[l] || powers.fap_power_w[l] <= 0.0) continue;
            const double tau_l = static_cast<double>(schedule.per_tx[l].targeted.size());
            const double g = ghat[l];
            const double cross = (h.fap_gain[k][vhat[l]] / noise) /
                                 (powers.fap_power_w[l] * (h.fap_gain[l][vhat[l]] / noise));
            denominator += tau_l * (g * g / (1.0 + g)) * cross;
        }
        next.fap_power_w[k] =
            denominator == 0.0 ? pmax : std::clamp(numerator / denominator, 0.0, pmax);
    }
    return next;
}

double p4_objective(const Schedule& schedule, const SideInfo& side, const ChannelRealization& h,
                    const PowerProfile& powers, const ScenarioConfig& cfg) {
    const int K = cfg.num_faps;
    const auto active = active_faps(schedule, K);
    const double cfh = cfg.fronthaul_se();
    double total = 0.0;
    for (int k = 0; k < K; ++k) {
        const auto& t = schedule.per_tx[k];
        if (t.targeted.empty()) continue;
        double rate = std::numeric_limits<double>::infinity();
        for (int u : t.targeted)
            rate = std::min(rate, std::log2(1.0 + gamma_of(k, u, powers, h, active)));
        for (int u : t.targeted) {
            const bool fetched = std::find(t.fetched.begin(), t.fetched.end(),
                                           side.wants[u]) != t.fetched.end();
            total += fetched ? std::min(cfh, rate) : rate;
        }
    }
    return total;
}

PowerResult optimize_power(const Schedule& schedule, const SideInfo& side,
                           const ChannelRealization& h, const ScenarioConfig& cfg, double tol,
                           int max_iter) {
    PowerResult res;
    const int K = cfg.num_faps;
    const double pmax = cfg.max_power_w();
    const auto active = active_faps(schedule, K);

    PowerProfile p = PowerProfile::all_max(cfg);
    for (int k = 0; k < K; ++k)
        if (!active[k]) p.fap_power_w[k] = 0.0;

    bool any_active = std::any_of(active.begin(), active.end(), [](auto a) { return a != 0; });
    if (!any_active) {
        res.powers = p;
        res.converged = true;
        return res;
    }

    PowerProfile best = p;
    double best_obj = p4_objective(schedule, side, h, p, cfg);

    for (int it = 1; it <= max_iter; ++it) {
        const PowerProfile next = power_update_step(p, schedule, h, cfg);
        double residual = 0.0;
        for (int k = 0; k < K; ++k)
            residual = std::max(residual, std::abs(next.fap_power_w[k] - p.fap_power_w[k]) / pmax);
        p = next;
        res.iterations = it;
        res.residual = residual;
        const double obj = p4_objective(schedule, side, h, p, cfg);
        if (obj > best_obj) {
            best_obj = obj;
            best = p;
        }
        if (residual < tol) {
            res.converged = true;
            res.powers = p;
            return res;
        }
    }
    res.converged = false;
    res.powers = best;  // best-objective iterate seen
    return res;
}

Schedule solve_schedule(const Partition& partition, const CacheMatrix& cache,
                        const SideInfo& side, const LinkCapacities& caps,
                        const ScenarioConfig& cfg) {
    Schedule s;
    s.per_tx.resize(cfg.num_faps + cfg.num_ced2d);
    for (int k = 0; k < cfg.num_faps; ++k) s.per_tx[k].tx = TransmitterId::fap(k);
    for (int n = 0; n < cfg.num_ced2d; ++n)
        s.per_tx[cfg.num_faps + n].tx = TransmitterId::ced2d(n);

    auto fill = [&](TransmitterId tx, const std::vector<int>& members) {
        if (members.empty()) return;
        const ConflictGraph g = build_tx_graph(members, tx, cache, side, caps, cfg);
        const auto clique = max_weight_tx_clique(g);
        const Schedule part = schedule_from_clique(g, clique, cache, cfg);
        s.per_tx[tx.global(cfg.num_faps)] = part.per_tx[tx.global(cfg.num_faps)];
    };
    for (int k = 0; k < cfg.num_faps; ++k)
        fill(TransmitterId::fap(k), partition.fap_members[k]);
    for (int n = 0; n < cfg.num_ced2d; ++n)
        fill(TransmitterId::ced2d(n), partition.d2d_members[n]);
    return s;
}

ClncResult alternate_clnc(const Partition& partition, const CacheMatrix& cache,
                          const SideInfo& side, const ChannelRealization& h,
                          const ScenarioConfig& cfg, int max_outer, double rel_tol) {
    ClncResult best;
    best.sum_rate_se = -1.0;
    PowerProfile powers = PowerProfile::all_max(cfg);
    double prev = -1.0;
    int outer = 0;
    int power_iters = 0;
    bool power_ok = true;

    for (outer = 1; outer <= max_outer; ++outer) {
        const LinkCapacities caps = compute_capacities(h, powers);
        Schedule schedule = solve_schedule(partition, cache, side, caps, cfg);
        const double se = sum_rate_se(schedule, side, cfg.fronthaul_se());
        if (se > best.sum_rate_se) {
            best.schedule = schedule;
            best.powers = powers;
            best.sum_rate_se = se;
        }
        if (prev >= 0.0 && std::abs(se - prev) <= rel_tol * std::max(prev, 1e-300)) break;
        prev = se;
        const PowerResult pr = optimize_power(schedule, side, h, cfg);
        power_iters += pr.iterations;
        power_ok = power_ok && pr.converged;
        powers = pr.powers;
    }
    best.outer_iterations = std::min(outer, max_outer);
    best.power_iterations = power_iters;
    best.power_converged = power_ok;
    best.sum_rate_bps = best.sum_rate_se * cfg.bandwidth_hz;
    return best;
}

}  // namespace fransim
