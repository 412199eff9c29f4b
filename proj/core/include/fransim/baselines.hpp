#pragma once

#include "fransim/marl.hpp"
#include "fransim/pipeline.hpp"

namespace fransim {

struct DeliveryResult {
    Schedule schedule;
    double sum_rate_se = 0.0;
    double sum_rate_bps = 0.0;
};

// Strongest uncoded baseline: one user per transmitter (no XOR), exact
// linear assignment on the capacity matrix at P_max, honoring coverage,
// cache/fetch feasibility and the rate threshold.
DeliveryResult optimal_uncoded(const Topology& topo, const CacheMatrix& cache,
                               const SideInfo& side, const ChannelRealization& h,
                               const ScenarioConfig& cfg);

// Network-layer-only coding: per transmitter the exact maximum-cardinality
// decodable user set, transmitted at the minimum capacity of the set.
DeliveryResult classical_idnc(const Topology& topo, const Partition& partition,
                              const CacheMatrix& cache, const SideInfo& side,
                              const ChannelRealization& h, const ScenarioConfig& cfg);

// Rate-aware coding with one common rate shared by every transmitter: the
// rate maximizing (total targeted users) * rate wins.
DeliveryResult ra_idnc(const Topology& topo, const Partition& partition,
                       const CacheMatrix& cache, const SideInfo& side,
                       const ChannelRealization& h, const ScenarioConfig& cfg);

enum class CachingKind { all, none, half, fixed };

// all -> every entry set; none -> empty; half -> iid Bernoulli(0.5);
// fixed -> floor(mu F) files per transmitter, drawn without replacement.
CacheMatrix caching_policy(CachingKind kind, const ScenarioConfig& cfg, Rng& rng);

// Tabular two-action Q-learning over the same virtual agents, epsilon-greedy
// exploration, shared reward; the comparison scheme for the softmax learner.
TrainResult q_learning_cache(const Topology& topo, const HistoryProfile& history,
                             const ScenarioConfig& cfg, Rng& rng);

}  // namespace fransim
