#include "fransim/coalition.hpp"

#include <algorithm>

namespace fransim {

namespace {

std::vector<int> with_user(const std::vector<int>& members, int user) {
    std::vector<int> m = members;
    m.insert(std::upper_bound(m.begin(), m.end(), user), user);
    return m;
}

// Per-coalition evaluations cached by global coalition index.
struct EvalCache {
    explicit EvalCache(const CoalitionContext& ctx) : ctx_(ctx) {}

    const CoalitionEval& get(const Partition& p, TransmitterId tx) {
        const int g = tx.global(ctx_.cfg.num_faps);
        if (static_cast<int>(valid_.size()) <= g) {
            valid_.resize(g + 1, false);
            evals_.resize(g + 1);
        }
        if (!valid_[g]) {
            evals_[g] = evaluate_coalition(p.members(tx), tx, ctx_);
            valid_[g] = true;
        }
        return evals_[g];
    }

    void invalidate(TransmitterId tx) {
        const int g = tx.global(ctx_.cfg.num_faps);
        if (g < static_cast<int>(valid_.size())) valid_[g] = false;
    }

  private:
    const CoalitionContext& ctx_;
    std::vector<bool> valid_;
    std::vector<CoalitionEval> evals_;
};

double utility_in(const CoalitionEval& eval, int user) {
    return eval.targets(user) ? eval.rate : 0.0;
}

std::vector<int> without_user(const std::vector<int>& members, int user) {
    std::vector<int> m;
    m.reserve(members.size());
    for (int v : members)
        if (v != user) m.push_back(v);
    return m;
}

// prefers() with the current-coalition evaluations supplied by the caller.
bool prefers_cached(int user, TransmitterId cand, const Partition& p,
                    const CoalitionContext& ctx, EvalCache& cache,
                    CoalitionEval* new_eval_out = nullptr) {
    const auto owner = p.owner(user);
    if (owner && *owner == cand) return false;
    if (!join_feasible(user, cand, p, ctx)) return false;  // clauses (i) file / (iii)

    const auto new_members = with_user(p.members(cand), user);
    const CoalitionEval eval_new = evaluate_coalition(new_members, cand, ctx);

    const double util_old = owner ? utility_in(cache.get(p, *owner), user) : 0.0;
    if (!(utility_in(eval_new, user) > util_old)) return false;  // clause (i)

    // Clause (ii): the summed rate of the two affected coalitions must
    // strictly increase. Counting the vacated coalition keeps the switch
    // process a strict ascent of the system sum-rate, so it terminates.
    double affected_before = cache.get(p, cand).util_sum;
    double affected_after = eval_new.util_sum;
    if (owner) {
        affected_before += cache.get(p, *owner).util_sum;
        affected_after +=
            evaluate_coalition(without_user(p.members(*owner), user), *owner, ctx).util_sum;
    }
    if (!(affected_after > affected_before)) return false;

    if (new_eval_out) *new_eval_out = eval_new;
    return true;
}

}  // namespace

CoalitionEval evaluate_coalition(const std::vector<int>& members, TransmitterId tx,
                                 const CoalitionContext& ctx) {
    CoalitionEval e;
    if (members.empty()) return e;
    const ConflictGraph g = build_tx_graph(members, tx, ctx.cache, ctx.side, ctx.caps, ctx.cfg);
    const auto clique = max_weight_tx_clique(g);
    for (int v : clique) {
        e.targeted.push_back(g.vertices[v].user);
        e.rate = g.vertices[v].rate;
    }
    std::sort(e.targeted.begin(), e.targeted.end());
    e.weight = clique_weight(g, clique);
    e.util_sum = static_cast<double>(e.targeted.size()) * e.rate;
    return e;
}

bool coalition_feasible(const std::vector<int>& members, TransmitterId tx,
                        const CoalitionContext& ctx) {
    const int missing = missing_count(members, tx, ctx.cache, ctx.side);
    if (tx.is_fap()) return missing <= ctx.cfg.fetch_limit;
    if (missing > 0) return false;  // CE-D2D users cannot fetch
    for (int u : members)
        if (!ctx.topo.covers(tx.index, u)) return false;
    return true;
}

bool join_feasible(int user, TransmitterId tx, const Partition& p, const CoalitionContext& ctx) {
    if (!tx.is_fap() && !ctx.topo.covers(tx.index, user)) return false;
    return coalition_feasible(with_user(p.members(tx), user), tx, ctx);
}

Partition init_partition(const CoalitionContext& ctx, Rng& rng) {
    Partition p(ctx.cfg.num_faps, ctx.cfg.num_ced2d, ctx.cfg.num_users);
    for (int u = 0; u < ctx.cfg.num_users; ++u) {
        std::vector<TransmitterId> feasible;
        for (int k = 0; k < ctx.cfg.num_faps; ++k)
            if (join_feasible(u, TransmitterId::fap(k), p, ctx))
                feasible.push_back(TransmitterId::fap(k));
        for (int n = 0; n < ctx.cfg.num_ced2d; ++n)
            if (join_feasible(u, TransmitterId::ced2d(n), p, ctx))
                feasible.push_back(TransmitterId::ced2d(n));
        if (!feasible.empty()) p.assign(u, feasible[rng.uniform_int(feasible.size())]);
    }
    return p;
}

double user_utility(int user, const Partition& p, const CoalitionContext& ctx) {
    const auto owner = p.owner(user);
    if (!owner) return 0.0;
    return utility_in(evaluate_coalition(p.members(*owner), *owner, ctx), user);
}

bool prefers(int user, TransmitterId candidate, const Partition& p,
             const CoalitionContext& ctx) {
    EvalCache cache(ctx);
    return prefers_cached(user, candidate, p, ctx, cache);
}

SwitchStats switch_phase(Partition& p, const CoalitionContext& ctx, int max_passes,
                         SwitchObserver* observer) {
    SwitchStats stats;
    EvalCache cache(ctx);

    auto try_move = [&](int user, TransmitterId cand) {
        CoalitionEval eval_new;
        const double dest_before = cache.get(p, cand).util_sum;
        if (!prefers_cached(user, cand, p, ctx, cache, &eval_new)) return false;
        const auto old_owner = p.owner(user);
        p.assign(user, cand);
        if (old_owner) cache.invalidate(*old_owner);
        cache.invalidate(cand);
        if (observer)
            observer->on_switch(user, old_owner.value_or(TransmitterId{}),
                                old_owner.has_value(), cand, dest_before, eval_new.util_sum);
        ++stats.switches;
        return true;
    };

    for (int pass = 0; pass < max_passes; ++pass) {
        ++stats.passes;
        bool changed = false;
        for (int u = 0; u < p.num_users(); ++u)
            for (int k = 0; k < ctx.cfg.num_faps; ++k)
                changed |= try_move(u, TransmitterId::fap(k));
        for (int u = 0; u < p.num_users(); ++u)
            for (int n = 0; n < ctx.cfg.num_ced2d; ++n)
                changed |= try_move(u, TransmitterId::ced2d(n));
        if (!changed) {
            stats.converged = true;
            break;
        }
    }
    return stats;
}

bool is_nash_stable(const Partition& p, const CoalitionContext& ctx) {
    EvalCache cache(ctx);
    for (int u = 0; u < p.num_users(); ++u) {
        for (int k = 0; k < ctx.cfg.num_faps; ++k)
            if (prefers_cached(u, TransmitterId::fap(k), p, ctx, cache)) return false;
        for (int n = 0; n < ctx.cfg.num_ced2d; ++n)
            if (prefers_cached(u, TransmitterId::ced2d(n), p, ctx, cache)) return false;
    }
    return true;
}

}  // namespace fransim
