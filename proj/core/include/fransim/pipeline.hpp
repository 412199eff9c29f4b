#pragma once

#include "fransim/power.hpp"

namespace fransim {

// One full delivery evaluation: random initial clustering, switch process
// until Nash-stable, then the scheduling/power alternation.
struct RealizationEval {
    Partition partition;
    SwitchStats switch_stats;
    ClncResult clnc;
};

RealizationEval run_delivery(const Topology& topo, const CacheMatrix& cache,
                             const SideInfo& side, const ChannelRealization& h,
                             const ScenarioConfig& cfg, Rng& partition_rng);

}  // namespace fransim
