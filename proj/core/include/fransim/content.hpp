#pragma once

#include <vector>

#include "fransim/config.hpp"
#include "fransim/ids.hpp"
#include "fransim/rng.hpp"

namespace fransim {

// Set of file ids over a library 1..F with O(1) membership.
class FileSet {
  public:
    FileSet() = default;
    explicit FileSet(int num_files) : member_(num_files + 1, 0) {}

    bool contains(FileId f) const { return f < member_.size() && member_[f] != 0; }
    void insert(FileId f) {
        if (!member_[f]) {
            member_[f] = 1;
            ++count_;
        }
    }
    int size() const { return count_; }
    int library_size() const { return static_cast<int>(member_.size()) - 1; }
    std::vector<FileId> items() const {
        std::vector<FileId> v;
        for (FileId f = 1; f < member_.size(); ++f)
            if (member_[f]) v.push_back(f);
        return v;
    }

  private:
    std::vector<std::uint8_t> member_;
    int count_ = 0;
};

// Per-user side information: Has sets and the single requested file.
struct SideInfo {
    std::vector<FileSet> has;    // H_u
    std::vector<FileId> wants;   // W_u, one request per interval

    int num_users() const { return static_cast<int>(has.size()); }
};

// Binary placement y_{f,k} / v_{f,n}.
struct CacheMatrix {
    int num_files = 0;
    int num_faps = 0;
    int num_ced2d = 0;
    std::vector<std::uint8_t> fap_entries;    // (k * F + f-1)
    std::vector<std::uint8_t> ced2d_entries;  // (n * F + f-1)

    CacheMatrix() = default;
    CacheMatrix(int files, int faps, int ced2d)
        : num_files(files), num_faps(faps), num_ced2d(ced2d),
          fap_entries(static_cast<std::size_t>(files) * faps, 0),
          ced2d_entries(static_cast<std::size_t>(files) * ced2d, 0) {}

    bool fap_has(int k, FileId f) const { return fap_entries[k * num_files + (f - 1)] != 0; }
    bool ced2d_has(int n, FileId f) const { return ced2d_entries[n * num_files + (f - 1)] != 0; }
    void set_fap(int k, FileId f, bool v) { fap_entries[k * num_files + (f - 1)] = v ? 1 : 0; }
    void set_ced2d(int n, FileId f, bool v) { ced2d_entries[n * num_files + (f - 1)] = v ? 1 : 0; }
    bool tx_has(TransmitterId tx, FileId f) const {
        return tx.is_fap() ? fap_has(tx.index, f) : ced2d_has(tx.index, f);
    }
    int total_cached() const;
    int tx_count(TransmitterId tx) const;
};

// Zipf pmf over 1..F: p(f) proportional to f^-gamma.
std::vector<double> zipf_pmf(double gamma, int num_files);

// Each user receives `has_set_size` distinct files uniformly at random.
std::vector<FileSet> init_has_sets(int num_files, int num_users, int has_set_size, Rng& rng);

// One request per user, Zipf-distributed over the files the user lacks.
std::vector<FileId> sample_requests(double gamma, int num_files, int num_users,
                                    const std::vector<FileSet>& has, Rng& rng);

// Alternative sampler (off by default): with per-user probability drawn
// uniformly from [0, 0.25] the request is uniform instead of Zipf.
std::vector<FileId> sample_requests_capped(double gamma, int num_files, int num_users,
                                           const std::vector<FileSet>& has, Rng& rng);

SideInfo draw_side_info(const ScenarioConfig& cfg, Rng& rng);

// Fetch rate over the capacity-limited fronthaul: min(C_fh, link rate).
inline double fetch_rate(double fronthaul, double link_rate) {
    return fronthaul < link_rate ? fronthaul : link_rate;
}

// Distinct requested files of `members` missing from the transmitter cache.
// A file fetched once serves all its requesters, so duplicates count once.
std::vector<FileId> missing_files(const std::vector<int>& members, TransmitterId tx,
                                  const CacheMatrix& cache, const SideInfo& side);
int missing_count(const std::vector<int>& members, TransmitterId tx, const CacheMatrix& cache,
                  const SideInfo& side);

// Virtual-agent action vector (1 = cache) to cache matrix. Agent i covers
// F-AP k, file f for i = k*F + (f-1); CE-D2D agents follow at offset K*F.
int num_virtual_agents(int num_files, int num_faps, int num_ced2d);
CacheMatrix apply_actions(const std::vector<std::uint8_t>& actions, int num_files, int num_faps,
                          int num_ced2d);
std::vector<std::uint8_t> actions_from_cache(const CacheMatrix& cache);

}  // namespace fransim
