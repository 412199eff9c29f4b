#include "fransim/partition.hpp"

#include <algorithm>

namespace fransim {

void Partition::assign(int user, TransmitterId tx) {
    unassign(user);
    auto& list = tx.is_fap() ? fap_members[tx.index] : d2d_members[tx.index];
    list.insert(std::upper_bound(list.begin(), list.end(), user), user);
    owner_[user] = tx.global(static_cast<int>(fap_members.size()));
}

void Partition::unassign(int user) {
    if (owner_[user] == kUnassigned) return;
    const int k = static_cast<int>(fap_members.size());
    auto& list = owner_[user] < k ? fap_members[owner_[user]] : d2d_members[owner_[user] - k];
    list.erase(std::remove(list.begin(), list.end(), user), list.end());
    owner_[user] = kUnassigned;
}

std::vector<int> Partition::unassigned() const {
    std::vector<int> out;
    for (int u = 0; u < num_users(); ++u)
        if (owner_[u] == kUnassigned) out.push_back(u);
    return out;
}

bool Partition::disjoint() const {
    std::vector<int> seen(num_users(), 0);
    for (const auto& list : fap_members)
        for (int u : list)
            if (seen[u]++) return false;
    for (const auto& list : d2d_members)
        for (int u : list)
            if (seen[u]++) return false;
    // owner index must agree with list membership
    for (int u = 0; u < num_users(); ++u) {
        const bool listed = seen[u] != 0;
        if (listed != (owner_[u] != kUnassigned)) return false;
    }
    return true;
}

}  // namespace fransim
