#pragma once

#include <array>

#include "fransim/pipeline.hpp"

namespace fransim {

// Learning-rate and exploration schedules at iteration t (t >= 1):
// sigma_t = t / b, alpha_t = 1/(1+t)^0.6, lambda_t = 1/(1+t)^0.7.
struct LearnSchedules {
    double sigma = 0.0;
    double alpha = 1.0;
    double lambda = 1.0;
};
LearnSchedules learn_schedules(long t, double b);

// Per-agent two-action learner. Index 0 is "cache" (a_{i,1}), index 1 is
// "do not cache" (a_{i,2}).
struct LearnerState {
    std::vector<std::array<double, 2>> x;    // estimated utilities, start 0
    std::vector<std::array<double, 2>> rho;  // action probabilities, start (0.5, 0.5)

    explicit LearnerState(int num_agents)
        : x(num_agents, {0.0, 0.0}), rho(num_agents, {0.5, 0.5}) {}
    int num_agents() const { return static_cast<int>(x.size()); }
    double simplex_residual() const;
    double mean_entropy() const;
};

// One Bernoulli draw per agent against rho[i][0]; 1 = cache.
std::vector<std::uint8_t> sample_actions(const LearnerState& st, Rng& rng);

// Shared feedback signal: omega * sum_rate - cache_cost * files cached
// (F-AP and CE-D2D placements both count, as in the placement objective).
double marl_reward(double sum_rate_se, int total_cached, double omega, double cache_cost);

// x'[j] = x[j] + alpha (r - x[j]) for the taken action only.
void update_utility(std::array<double, 2>& x, int action_taken, double r, double alpha);

// Softmax over sigma-scaled utilities, computed with max subtraction.
std::array<double, 2> boltzmann(const std::array<double, 2>& x, double sigma);

// rho'_j = rho_j + lambda (beta_j - rho_j); preserves the simplex.
void update_probability(std::array<double, 2>& rho, const std::array<double, 2>& beta,
                        double lambda);

// Fixed-topology environment: T tuples of (channel, side information).
struct HistoryProfile {
    std::vector<ChannelRealization> channels;
    std::vector<SideInfo> sides;
    int size() const { return static_cast<int>(channels.size()); }
};

struct TraceRow {
    long iteration = 0;
    double reward = 0.0;
    int cache_count = 0;
    double simplex_residual = 0.0;
    double mean_entropy = 0.0;
};

struct TrainResult {
    CacheMatrix cache;
    std::vector<TraceRow> traces;
    LearnerState state{0};
};

// Keep the `cap` highest-scoring placements of each transmitter cache.
CacheMatrix enforce_cache_capacity(const CacheMatrix& m, const std::vector<double>& cache_score,
                                   int cap);

// Virtual-agent training loop: sample a cache matrix, run the delivery
// pipeline on the t-th history tuple, feed the shared reward back, update
// utilities and probabilities. The final matrix takes each agent's argmax
// (ties resolve to no-cache) and is then capacity-capped.
TrainResult train(const Topology& topo, const HistoryProfile& history,
                  const ScenarioConfig& cfg, Rng& rng);

}  // namespace fransim
