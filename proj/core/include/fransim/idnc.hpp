#pragma once

#include <optional>
#include <string>
#include <vector>

#include "fransim/channel.hpp"
#include "fransim/content.hpp"
#include "fransim/partition.hpp"

namespace fransim {

// One candidate (transmitter, user, file, rate) association.
struct Vertex {
    TransmitterId tx;
    int user = 0;
    FileId file = 0;
    double rate = 0.0;    // represented spectral efficiency
    bool fetch = false;   // file missing at an F-AP cache, fetched over fronthaul
    double weight = 0.0;
};

// Union of the per-transmitter conflict graphs; vertices of different
// transmitters are always adjacent (coalitions are disjoint).
struct ConflictGraph {
    std::vector<Vertex> vertices;
    std::vector<std::uint8_t> adj;  // flat |V|^2, symmetric, irreflexive

    int size() const { return static_cast<int>(vertices.size()); }
    bool adjacent(int i, int j) const { return adj[static_cast<std::size_t>(i) * size() + j] != 0; }
};

struct TransmitterSchedule {
    TransmitterId tx;
    std::vector<FileId> combo;    // files XORed together, sorted
    std::vector<int> targeted;    // sorted user ids
    double rate = 0.0;            // scheduled spectral efficiency
    std::vector<FileId> fetched;  // combo \ cache, F-APs only, sorted
};

struct Schedule {
    std::vector<TransmitterSchedule> per_tx;  // K + N entries in global order

    int served() const;
    const TransmitterSchedule* find(TransmitterId tx, int num_faps) const {
        const int g = tx.global(num_faps);
        return g < static_cast<int>(per_tx.size()) ? &per_tx[g] : nullptr;
    }
};

double tx_capacity(const LinkCapacities& caps, TransmitterId tx, int user);

// Vertex weight: the represented rate, fronthaul-clipped when the file has
// to be fetched.
double weight_of(double rate, bool cached, double fronthaul_se);

// Same transmitter: rates equal, users differ, and the two (user, file)
// pairs satisfy instant decodability (same file, or each file held by the
// other user). Different transmitters: always adjacent.
bool vertices_adjacent(const Vertex& a, const Vertex& b, const SideInfo& side);

// One vertex per (user, candidate rate) with the candidate set drawn from
// coalition members' capacities at or below the user's own capacity.
ConflictGraph build_graph(const Partition& partition, const CacheMatrix& cache,
                          const SideInfo& side, const LinkCapacities& caps,
                          const ScenarioConfig& cfg);
ConflictGraph build_tx_graph(const std::vector<int>& members, TransmitterId tx,
                             const CacheMatrix& cache, const SideInfo& side,
                             const LinkCapacities& caps, const ScenarioConfig& cfg);

double clique_weight(const ConflictGraph& g, const std::vector<int>& clique);

// Max-weight vertex first, then restrict to its neighbourhood; ties go to
// the lowest vertex id.
std::vector<int> greedy_mwc(const ConflictGraph& g);

// Exact maximum-weight clique on up to 64 vertices via branch and bound
// over a bitset adjacency; first optimum in ascending DFS order wins ties.
std::vector<int> max_weight_clique_small(const std::vector<std::uint64_t>& adj,
                                         const std::vector<double>& weight);

// Exact maximum-weight clique of a single-transmitter graph. Cliques of one
// transmitter are single-rate, so the search decomposes by rate level; rate
// levels beyond 64 vertices fall back to the greedy heuristic.
std::vector<int> max_weight_tx_clique(const ConflictGraph& g);

// Exhaustive maximum-weight clique; test/oracle path, guarded to 25 vertices.
std::vector<int> brute_force_mwc(const ConflictGraph& g);

Schedule schedule_from_clique(const ConflictGraph& g, const std::vector<int>& clique,
                              const CacheMatrix& cache, const ScenarioConfig& cfg);

// If exactly one file of the combination is unknown to the user it decodes.
std::optional<FileId> xor_decode(const std::vector<FileId>& combo, const FileSet& has);

// Objective value of a schedule: every targeted user contributes the
// scheduled rate, fronthaul-clipped for users whose file was fetched.
// Equals the clique weight; the _bps form scales by bandwidth.
double sum_rate_se(const Schedule& s, const SideInfo& side, double fronthaul_se);
double sum_rate_bps(const Schedule& s, const SideInfo& side, const ScenarioConfig& cfg);

// Standalone constraint checker (C2-C5 plus decodability and rate bounds).
// Returns human-readable violations; empty means valid.
std::vector<std::string> validate_schedule(const Schedule& s, const SideInfo& side,
                                           const CacheMatrix& cache, const LinkCapacities& caps,
                                           const ScenarioConfig& cfg,
                                           const Partition* partition = nullptr,
                                           const Topology* topo = nullptr);

std::string to_dot(const ConflictGraph& g);

}  // namespace fransim
