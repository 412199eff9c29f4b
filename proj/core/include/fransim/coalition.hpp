#pragma once

#include "fransim/idnc.hpp"

namespace fransim {

// Everything the switch process evaluates against. Capacities are taken at
// P_max for all F-APs; power optimization happens after the partition is
// stable.
struct CoalitionContext {
    const Topology& topo;
    const CacheMatrix& cache;
    const SideInfo& side;
    const LinkCapacities& caps;
    const ScenarioConfig& cfg;
};

// Result of running the scheduling step on a single coalition.
struct CoalitionEval {
    std::vector<int> targeted;  // sorted
    double rate = 0.0;
    double util_sum = 0.0;      // |targeted| * rate (member utilities are R_t)
    double weight = 0.0;        // clique weight (fronthaul-clipped terms)

    bool targets(int user) const {
        return std::binary_search(targeted.begin(), targeted.end(), user);
    }
};

CoalitionEval evaluate_coalition(const std::vector<int>& members, TransmitterId tx,
                                 const CoalitionContext& ctx);

// Membership feasibility: F-AP coalitions keep at most l_k distinct missing
// files; CE-D2D coalitions serve cached files only and require coverage.
bool coalition_feasible(const std::vector<int>& members, TransmitterId tx,
                        const CoalitionContext& ctx);
bool join_feasible(int user, TransmitterId tx, const Partition& p, const CoalitionContext& ctx);

// Random feasible assignment; users that fit nowhere stay unassigned.
Partition init_partition(const CoalitionContext& ctx, Rng& rng);

// Scheduled rate of the user's transmitter if the user is targeted, else 0.
double user_utility(int user, const Partition& p, const CoalitionContext& ctx);

// Preference order: the move must (i) deliver the user's request and
// strictly raise its own rate, (ii) strictly raise the summed rate of the
// two affected coalitions, (iii) keep the destination's fetch budget
// intact. Clause (ii) counts the vacated coalition as well, which makes
// every accepted switch a strict ascent of the system sum-rate.
bool prefers(int user, TransmitterId candidate, const Partition& p, const CoalitionContext& ctx);

struct SwitchStats {
    int passes = 0;
    int switches = 0;
    bool converged = false;
};

// Hook for tests: observes every accepted switch.
struct SwitchObserver {
    virtual ~SwitchObserver() = default;
    virtual void on_switch(int user, TransmitterId from_or_unassigned, bool was_assigned,
                           TransmitterId to, double dest_sum_before, double dest_sum_after) = 0;
};

// Round-robin switch process (F-AP pass then CE-D2D pass per round) until a
// full round makes no move. The result is Nash-stable.
SwitchStats switch_phase(Partition& p, const CoalitionContext& ctx, int max_passes = 1000,
                         SwitchObserver* observer = nullptr);

bool is_nash_stable(const Partition& p, const CoalitionContext& ctx);

}  // namespace fransim
