#pragma once

#include <optional>
#include <vector>

#include "fransim/ids.hpp"

namespace fransim {

// Disjoint user coalitions, one per F-AP and one per CE-D2D user.
// Users that fit nowhere stay unassigned.
struct Partition {
    std::vector<std::vector<int>> fap_members;   // K sorted user lists
    std::vector<std::vector<int>> d2d_members;   // N sorted user lists

    Partition() = default;
    Partition(int num_faps, int num_ced2d, int num_users)
        : fap_members(num_faps), d2d_members(num_ced2d), owner_(num_users, kUnassigned) {}

    std::optional<TransmitterId> owner(int user) const {
        const int o = owner_[user];
        if (o == kUnassigned) return std::nullopt;
        const int k = static_cast<int>(fap_members.size());
        return o < k ? TransmitterId::fap(o) : TransmitterId::ced2d(o - k);
    }

    const std::vector<int>& members(TransmitterId tx) const {
        return tx.is_fap() ? fap_members[tx.index] : d2d_members[tx.index];
    }

    void assign(int user, TransmitterId tx);
    void unassign(int user);
    std::vector<int> unassigned() const;
    int num_users() const { return static_cast<int>(owner_.size()); }
    bool disjoint() const;  // every user in at most one coalition

  private:
    static constexpr int kUnassigned = -1;
    std::vector<int> owner_;  // global coalition index or -1
};

}  // namespace fransim
