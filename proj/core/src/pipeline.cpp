#include "fransim/pipeline.hpp"

namespace fransim {

RealizationEval run_delivery(const Topology& topo, const CacheMatrix& cache,
                             const SideInfo& side, const ChannelRealization& h,
                             const ScenarioConfig& cfg, Rng& partition_rng) {
    RealizationEval out;
    const PowerProfile pmax = PowerProfile::all_max(cfg);
    const LinkCapacities caps = compute_capacities(h, pmax);
    const CoalitionContext ctx{topo, cache, side, caps, cfg};
    out.partition = init_partition(ctx, partition_rng);
    out.switch_stats = switch_phase(out.partition, ctx);
    out.clnc = alternate_clnc(out.partition, cache, side, h, cfg);
    return out;
}

}  // namespace fransim
