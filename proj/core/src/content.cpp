#include "fransim/content.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace fransim {

int CacheMatrix::total_cached() const {
    const auto add = [](int acc, std::uint8_t v) { return acc + (v ? 1 : 0); };
    return std::accumulate(fap_entries.begin(), fap_entries.end(), 0, add) +
           std::accumulate(ced2d_entries.begin(), ced2d_entries.end(), 0, add);
}

int CacheMatrix::tx_count(TransmitterId tx) const {
    int c = 0;
    for (FileId f = 1; f <= static_cast<FileId>(num_files); ++f)
        if (tx_has(tx, f)) ++c;
    return c;
}

std::vector<double> zipf_pmf(double gamma, int num_files) {
    std::vector<double> p(num_files);
    double norm = 0.0;
    for (int f = 1; f <= num_files; ++f) {
        p[f - 1] = std::pow(static_cast<double>(f), -gamma);
        norm += p[f - 1];
    }
    for (auto& x : p) x /= norm;
    return p;
}

std::vector<FileSet> init_has_sets(int num_files, int num_users, int has_set_size, Rng& rng) {
    std::vector<FileSet> has(num_users, FileSet(num_files));
    std::vector<FileId> pool(num_files);
    for (int u = 0; u < num_users; ++u) {
        std::iota(pool.begin(), pool.end(), FileId{1});
        for (int i = 0; i < has_set_size; ++i) {  // partial Fisher-Yates
            const auto j = i + static_cast<int>(rng.uniform_int(num_files - i));
            std::swap(pool[i], pool[j]);
            has[u].insert(pool[i]);
        }
    }
    return has;
}

namespace {
FileId draw_weighted_complement(const std::vector<double>& weight, const FileSet& exclude,
                                Rng& rng) {
    double total = 0.0;
    for (std::size_t i = 0; i < weight.size(); ++i)
        if (!exclude.contains(static_cast<FileId>(i + 1))) total += weight[i];
    const double target = rng.uniform() * total;
    double acc = 0.0;
    FileId last = 0;
    for (std::size_t i = 0; i < weight.size(); ++i) {
        const FileId f = static_cast<FileId>(i + 1);
        if (exclude.contains(f)) continue;
        acc += weight[i];
        last = f;
        if (target < acc) return f;
    }
    return last;  // fp edge: target == total
}
}  // namespace

std::vector<FileId> sample_requests(double gamma, int num_files, int num_users,
                                    const std::vector<FileSet>& has, Rng& rng) {
    std::vector<double> w(num_files);
    for (int f = 1; f <= num_files; ++f) w[f - 1] = std::pow(static_cast<double>(f), -gamma);
    std::vector<FileId> wants(num_users);
    for (int u = 0; u < num_users; ++u) wants[u] = draw_weighted_complement(w, has[u], rng);
    return wants;
}

std::vector<FileId> sample_requests_capped(double gamma, int num_files, int num_users,
                                           const std::vector<FileSet>& has, Rng& rng) {
    std::vector<double> zipf(num_files), unif(num_files, 1.0);
    for (int f = 1; f <= num_files; ++f) zipf[f - 1] = std::pow(static_cast<double>(f), -gamma);
    std::vector<FileId> wants(num_users);
    for (int u = 0; u < num_users; ++u) {
        const double p_u = 0.25 * rng.uniform();
        const bool uniform_request = rng.uniform() < p_u;
        wants[u] = draw_weighted_complement(uniform_request ? unif : zipf, has[u], rng);
    }
    return wants;
}

SideInfo draw_side_info(const ScenarioConfig& cfg, Rng& rng) {
    SideInfo s;
    s.has = init_has_sets(cfg.num_files, cfg.num_users, cfg.effective_has_size(), rng);
    s.wants = cfg.request_prob_cap
                  ? sample_requests_capped(cfg.zipf_exponent, cfg.num_files, cfg.num_users,
                                           s.has, rng)
                  : sample_requests(cfg.zipf_exponent, cfg.num_files, cfg.num_users, s.has, rng);
    return s;
}

std::vector<FileId> missing_files(const std::vector<int>& members, TransmitterId tx,
                                  const CacheMatrix& cache, const SideInfo& side) {
    std::vector<FileId> out;
    for (int u : members) {
        const FileId f = side.wants[u];
        if (!cache.tx_has(tx, f) && std::find(out.begin(), out.end(), f) == out.end())
            out.push_back(f);
    }
    std::sort(out.begin(), out.end());
    return out;
}

int missing_count(const std::vector<int>& members, TransmitterId tx, const CacheMatrix& cache,
                  const SideInfo& side) {
    return static_cast<int>(missing_files(members, tx, cache, side).size());
}

int num_virtual_agents(int num_files, int num_faps, int num_ced2d) {
    return num_files * num_faps + num_files * num_ced2d;
}

CacheMatrix apply_actions(const std::vector<std::uint8_t>& actions, int num_files, int num_faps,
                          int num_ced2d) {
    const int expected = num_virtual_agents(num_files, num_faps, num_ced2d);
    if (static_cast<int>(actions.size()) != expected)
        throw std::invalid_argument("action vector length " + std::to_string(actions.size()) +
                                    " does not match agent count " + std::to_string(expected));
    CacheMatrix c(num_files, num_faps, num_ced2d);
    std::copy(actions.begin(), actions.begin() + num_files * num_faps, c.fap_entries.begin());
    std::copy(actions.begin() + num_files * num_faps, actions.end(), c.ced2d_entries.begin());
    return c;
}

std::vector<std::uint8_t> actions_from_cache(const CacheMatrix& cache) {
    std::vector<std::uint8_t> a;
    a.reserve(cache.fap_entries.size() + cache.ced2d_entries.size());
    a.insert(a.end(), cache.fap_entries.begin(), cache.fap_entries.end());
    a.insert(a.end(), cache.ced2d_entries.begin(), cache.ced2d_entries.end());
    return a;
}

}  // namespace fransim
