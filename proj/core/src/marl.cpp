#include "fransim/marl.hpp"

#include <algorithm>
#include <cmath>

namespace fransim {

LearnSchedules learn_schedules(long t, double b) {
    LearnSchedules s;
    s.sigma = static_cast<double>(t) / b;
    s.alpha = 1.0 / std::pow(1.0 + static_cast<double>(t), 0.6);
    s.lambda = 1.0 / std::pow(1.0 + static_cast<double>(t), 0.7);
    return s;
}

double LearnerState::simplex_residual() const {
    double r = 0.0;
    for (const auto& p : rho) r = std::max(r, std::abs(p[0] + p[1] - 1.0));
    return r;
}

double LearnerState::mean_entropy() const {
    if (rho.empty()) return 0.0;
    double h = 0.0;
    for (const auto& p : rho)
        for (double q : p)
            if (q > 0.0) h -= q * std::log(q);
    return h / static_cast<double>(rho.size());
}

std::vector<std::uint8_t> sample_actions(const LearnerState& st, Rng& rng) {
    std::vector<std::uint8_t> a(st.num_agents());
    for (int i = 0; i < st.num_agents(); ++i) a[i] = rng.uniform() < st.rho[i][0] ? 1 : 0;
    return a;
}

double marl_reward(double sum_rate_se, int total_cached, double omega, double cache_cost) {
    return omega * sum_rate_se - cache_cost * static_cast<double>(total_cached);
}

void update_utility(std::array<double, 2>& x, int action_taken, double r, double alpha) {
    x[action_taken] += alpha * (r - x[action_taken]);
}

std::array<double, 2> boltzmann(const std::array<double, 2>& x, double sigma) {
    const double m = std::max(x[0], x[1]);
    const double e0 = std::exp(sigma * (x[0] - m));
    const double e1 = std::exp(sigma * (x[1] - m));
    return {e0 / (e0 + e1), e1 / (e0 + e1)};
}

void update_probability(std::array<double, 2>& rho, const std::array<double, 2>& beta,
                        double lambda) {
    rho[0] += lambda * (beta[0] - rho[0]);
    rho[1] += lambda * (beta[1] - rho[1]);
}

CacheMatrix enforce_cache_capacity(const CacheMatrix& m, const std::vector<double>& cache_score,
                                   int cap) {
    CacheMatrix out = m;
    const int F = m.num_files;
    auto cap_tx = [&](TransmitterId tx, int agent_base) {
        std::vector<FileId> cached;
        for (FileId f = 1; f <= static_cast<FileId>(F); ++f)
            if (out.tx_has(tx, f)) cached.push_back(f);
        if (static_cast<int>(cached.size()) <= cap) return;
        std::stable_sort(cached.begin(), cached.end(), [&](FileId a, FileId b) {
            const double sa = cache_score[agent_base + static_cast<int>(a) - 1];
            const double sb = cache_score[agent_base + static_cast<int>(b) - 1];
            if (sa != sb) return sa > sb;
            return a < b;
        });
        for (std::size_t i = cap; i < cached.size(); ++i) {
            if (tx.is_fap())
                out.set_fap(tx.index, cached[i], false);
            else
                out.set_ced2d(tx.index, cached[i], false);
        }
    };
    for (int k = 0; k < m.num_faps; ++k) cap_tx(TransmitterId::fap(k), k * F);
    for (int n = 0; n < m.num_ced2d; ++n)
        cap_tx(TransmitterId::ced2d(n), m.num_faps * F + n * F);
    return out;
}

TrainResult train(const Topology& topo, const HistoryProfile& history,
                  const ScenarioConfig& cfg, Rng& rng) {
    const int D = num_virtual_agents(cfg.num_files, cfg.num_faps, cfg.num_ced2d);
    TrainResult out{CacheMatrix(cfg.num_files, cfg.num_faps, cfg.num_ced2d), {}, LearnerState(D)};
    LearnerState& st = out.state;
    out.traces.reserve(cfg.learn_iters);

    for (long t = 1; t <= cfg.learn_iters; ++t) {
        const LearnSchedules sch = learn_schedules(t, cfg.sigma_scale);
        const auto actions = sample_actions(st, rng);
        const CacheMatrix cache =
            apply_actions(actions, cfg.num_files, cfg.num_faps, cfg.num_ced2d);

        const int idx = static_cast<int>((t - 1) % history.size());
        const RealizationEval eval =
            run_delivery(topo, cache, history.sides[idx], history.channels[idx], cfg, rng);
        const double r = marl_reward(eval.clnc.sum_rate_se, cache.total_cached(),
                                     cfg.reward_weight, cfg.cache_cost);

        for (int i = 0; i < D; ++i) {
            const auto beta = boltzmann(st.x[i], sch.sigma);  // pre-update utilities
            update_utility(st.x[i], actions[i] ? 0 : 1, r, sch.alpha);
            update_probability(st.rho[i], beta, sch.lambda);
        }
        out.traces.push_back(
            {t, r, cache.total_cached(), st.simplex_residual(), st.mean_entropy()});
    }

    // Deterministic decision: argmax probability, ties resolve to no-cache.
    std::vector<std::uint8_t> decision(D, 0);
    std::vector<double> score(D, 0.0);
    for (int i = 0; i < D; ++i) {
        decision[i] = st.rho[i][0] > st.rho[i][1] ? 1 : 0;
        score[i] = st.rho[i][0];
    }
    const CacheMatrix raw = apply_actions(decision, cfg.num_files, cfg.num_faps, cfg.num_ced2d);
    out.cache = enforce_cache_capacity(raw, score, cfg.cache_capacity());
    return out;
}

}  // namespace fransim
