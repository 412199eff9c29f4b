#pragma once

#include "fransim/coalition.hpp"
#include "fransim/idnc.hpp"

namespace fransim {

struct PowerResult {
    PowerProfile powers;
    int iterations = 0;
    double residual = 0.0;
    bool converged = false;
};

// One simultaneous (Jacobi) update of all F-AP powers for a fixed schedule.
// F-APs with no targeted users are held at zero and excluded from the
// interference sums. Gains are noise-normalized so the update's SINR form
// matches the physical-layer definition exactly.
PowerProfile power_update_step(const PowerProfile& powers, const Schedule& schedule,
                               const ChannelRealization& h, const ScenarioConfig& cfg);

// Iterate from all-P_max until max |P' - P| / P_max < tol. On convergence
// the final iterate is returned; otherwise the best-objective iterate seen.
PowerResult optimize_power(const Schedule& schedule, const SideInfo& side,
                           const ChannelRealization& h, const ScenarioConfig& cfg,
                           double tol = 1e-6, int max_iter = 500);

// Objective of the power subproblem: F-AP terms of the scheduled sum-rate
// with rates recomputed at the given powers (targeted sets fixed).
double p4_objective(const Schedule& schedule, const SideInfo& side, const ChannelRealization& h,
                    const PowerProfile& powers, const ScenarioConfig& cfg);

// Per-transmitter scheduling step at fixed capacities.
Schedule solve_schedule(const Partition& partition, const CacheMatrix& cache,
                        const SideInfo& side, const LinkCapacities& caps,
                        const ScenarioConfig& cfg);

struct ClncResult {
    Schedule schedule;
    PowerProfile powers;
    double sum_rate_se = 0.0;
    double sum_rate_bps = 0.0;
    int outer_iterations = 0;
    int power_iterations = 0;
    bool power_converged = true;
};

// Alternation between scheduling (at current powers) and power optimization
// (for the current schedule). Each candidate pair is self-consistent: the
// schedule is evaluated at the powers it was built under. The best pair over
// all outer iterations is returned, so the result is never worse than the
// all-P_max schedule of the first iteration.
ClncResult alternate_clnc(const Partition& partition, const CacheMatrix& cache,
                          const SideInfo& side, const ChannelRealization& h,
                          const ScenarioConfig& cfg, int max_outer = 20,
                          double rel_tol = 1e-6);

}  // namespace fransim
