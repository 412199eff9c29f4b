#include "fransim/idnc.hpp"

#include <algorithm>
#include <bit>
#include <cassert>
#include <set>
#include <sstream>
#include <stdexcept>

namespace fransim {

int Schedule::served() const {
    int n = 0;
    for (const auto& t : per_tx) n += static_cast<int>(t.targeted.size());
    return n;
}

double tx_capacity(const LinkCapacities& caps, TransmitterId tx, int user) {
    return tx.is_fap() ? caps.fap[tx.index][user] : caps.d2d[tx.index][user];
}

double weight_of(double rate, bool cached, double fronthaul_se) {
    return cached ? rate : std::min(fronthaul_se, rate);
}

bool vertices_adjacent(const Vertex& a, const Vertex& b, const SideInfo& side) {
    if (a.tx != b.tx) return true;
    if (a.user == b.user) return false;
    if (a.rate != b.rate) return false;
    if (a.file == b.file) return true;
    return side.has[b.user].contains(a.file) && side.has[a.user].contains(b.file);
}

namespace {

void append_tx_vertices(std::vector<Vertex>& out, const std::vector<int>& members,
                        TransmitterId tx, const CacheMatrix& cache, const SideInfo& side,
                        const LinkCapacities& caps, const ScenarioConfig& cfg) {
    if (members.empty()) return;

    // Candidate rates: the coalition members' capacities.
    std::vector<double> rates;
    rates.reserve(members.size());
    for (int u : members) rates.push_back(tx_capacity(caps, tx, u));
    std::sort(rates.begin(), rates.end());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

    // Fetchable files: the first l_k distinct missing files (in file order).
    // Coalitions built by the formation phase already satisfy the budget, so
    // this prunes nothing there; it keeps infeasible inputs schedulable.
    FileSet fetchable(cache.num_files);
    if (tx.is_fap()) {
        const auto missing = missing_files(members, tx, cache, side);
        for (std::size_t i = 0; i < missing.size() && i < static_cast<std::size_t>(cfg.fetch_limit);
             ++i)
            fetchable.insert(missing[i]);
    }

    std::vector<int> sorted_members = members;
    std::sort(sorted_members.begin(), sorted_members.end());
    for (int u : sorted_members) {
        const FileId f = side.wants[u];
        const bool cached = cache.tx_has(tx, f);
        if (!cached && !fetchable.contains(f)) continue;  // undeliverable here
        const double own = tx_capacity(caps, tx, u);
        for (double r : rates) {
            if (r > own || r < cfg.rate_threshold) continue;
            Vertex v;
            v.tx = tx;
            v.user = u;
            v.file = f;
            v.rate = r;
            v.fetch = !cached;
            v.weight = weight_of(r, cached, cfg.fronthaul_se());
            out.push_back(v);
        }
    }
}

void fill_adjacency(ConflictGraph& g, const SideInfo& side) {
    const int n = g.size();
    g.adj.assign(static_cast<std::size_t>(n) * n, 0);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (vertices_adjacent(g.vertices[i], g.vertices[j], side)) {
                g.adj[static_cast<std::size_t>(i) * n + j] = 1;
                g.adj[static_cast<std::size_t>(j) * n + i] = 1;
            }
}

}  // namespace

ConflictGraph build_tx_graph(const std::vector<int>& members, TransmitterId tx,
                             const CacheMatrix& cache, const SideInfo& side,
                             const LinkCapacities& caps, const ScenarioConfig& cfg) {
    ConflictGraph g;
    append_tx_vertices(g.vertices, members, tx, cache, side, caps, cfg);
    fill_adjacency(g, side);
    return g;
}

ConflictGraph build_graph(const Partition& partition, const CacheMatrix& cache,
                          const SideInfo& side, const LinkCapacities& caps,
                          const ScenarioConfig& cfg) {
    ConflictGraph g;
    for (int k = 0; k < static_cast<int>(partition.fap_members.size()); ++k)
        append_tx_vertices(g.vertices, partition.fap_members[k], TransmitterId::fap(k), cache,
                           side, caps, cfg);
    for (int n = 0; n < static_cast<int>(partition.d2d_members.size()); ++n)
        append_tx_vertices(g.vertices, partition.d2d_members[n], TransmitterId::ced2d(n), cache,
                           side, caps, cfg);
    fill_adjacency(g, side);
    return g;
}

double clique_weight(const ConflictGraph& g, const std::vector<int>& clique) {
    double w = 0.0;
    for (int v : clique) w += g.vertices[v].weight;
    return w;
}

std::vector<int> greedy_mwc(const ConflictGraph& g) {
    std::vector<int> clique;
    std::vector<int> candidates(g.size());
    for (int i = 0; i < g.size(); ++i) candidates[i] = i;
    while (!candidates.empty()) {
        int best = candidates[0];
        for (int v : candidates)
            if (g.vertices[v].weight > g.vertices[best].weight) best = v;
        clique.push_back(best);
        std::vector<int> next;
        for (int v : candidates)
            if (v != best && g.adjacent(v, best)) next.push_back(v);
        candidates = std::move(next);
    }
    std::sort(clique.begin(), clique.end());
    return clique;
}

namespace {

struct BnbState {
    const std::vector<std::uint64_t>& adj;
    const std::vector<double>& w;
    std::vector<int> best;
    double best_w = 0.0;
    std::vector<int> cur;
    double cur_w = 0.0;

    void expand(std::uint64_t cand) {
        if (cur_w > best_w) {
            best = cur;
            best_w = cur_w;
        }
        if (!cand) return;
        double bound = cur_w;
        for (std::uint64_t rest = cand; rest;) {
            const int v = std::countr_zero(rest);
            rest &= rest - 1;
            bound += w[v];
        }
        while (cand) {
            if (bound <= best_w) return;
            const int v = std::countr_zero(cand);
            cand &= cand - 1;
            cur.push_back(v);
            cur_w += w[v];
            expand(cand & adj[v]);
            cur.pop_back();
            cur_w -= w[v];
            bound -= w[v];
        }
    }
};

}  // namespace

std::vector<int> max_weight_clique_small(const std::vector<std::uint64_t>& adj,
                                         const std::vector<double>& weight) {
    assert(adj.size() <= 64);
    const std::uint64_t all = adj.size() == 64 ? ~0ULL : ((1ULL << adj.size()) - 1);
    BnbState st{adj, weight};
    st.expand(all);
    return st.best;
}

std::vector<int> max_weight_tx_clique(const ConflictGraph& g) {
    std::vector<double> rates;
    for (const auto& v : g.vertices) rates.push_back(v.rate);
    std::sort(rates.begin(), rates.end());
    rates.erase(std::unique(rates.begin(), rates.end()), rates.end());

    std::vector<int> best;
    double best_w = 0.0;
    for (double r : rates) {
        std::vector<int> map;
        for (int i = 0; i < g.size(); ++i)
            if (g.vertices[i].rate == r) map.push_back(i);

        std::vector<int> level;
        if (map.size() <= 64) {
            std::vector<std::uint64_t> adj(map.size(), 0);
            std::vector<double> w(map.size());
            for (std::size_t a = 0; a < map.size(); ++a) {
                w[a] = g.vertices[map[a]].weight;
                for (std::size_t b = 0; b < map.size(); ++b)
                    if (a != b && g.adjacent(map[a], map[b])) adj[a] |= 1ULL << b;
            }
            level = max_weight_clique_small(adj, w);
        } else {
            ConflictGraph sub;  // oversized rate level: greedy fallback
            for (int i : map) sub.vertices.push_back(g.vertices[i]);
            const int m = sub.size();
            sub.adj.assign(static_cast<std::size_t>(m) * m, 0);
            for (int a = 0; a < m; ++a)
                for (int b = 0; b < m; ++b)
                    if (a != b && g.adjacent(map[a], map[b]))
                        sub.adj[static_cast<std::size_t>(a) * m + b] = 1;
            level = greedy_mwc(sub);
        }
        for (int& v : level) v = map[v];
        const double w = clique_weight(g, level);
        if (w > best_w) {
            best_w = w;
            std::sort(level.begin(), level.end());
            best = std::move(level);
        }
    }
    return best;
}

namespace {
void extend_bf(const ConflictGraph& g, std::vector<int>& current, int from, double w,
               std::vector<int>& best, double& best_w) {
    if (w > best_w || (w == best_w && current < best)) {
        best = current;
        best_w = w;
    }
    for (int v = from; v < g.size(); ++v) {
        bool ok = true;
        for (int c : current)
            if (!g.adjacent(c, v)) {
                ok = false;
                break;
            }
        if (!ok) continue;
        current.push_back(v);
        extend_bf(g, current, v + 1, w + g.vertices[v].weight, best, best_w);
        current.pop_back();
    }
}
}  // namespace

std::vector<int> brute_force_mwc(const ConflictGraph& g) {
    if (g.size() > 25)
        throw std::invalid_argument("brute_force_mwc: vertex count " +
                                    std::to_string(g.size()) + " exceeds guard (25)");
    std::vector<int> best, current;
    double best_w = 0.0;
    extend_bf(g, current, 0, 0.0, best, best_w);
    return best;
}

Schedule schedule_from_clique(const ConflictGraph& g, const std::vector<int>& clique,
                              const CacheMatrix& cache, const ScenarioConfig& cfg) {
    Schedule s;
    s.per_tx.resize(cfg.num_faps + cfg.num_ced2d);
    for (int k = 0; k < cfg.num_faps; ++k) s.per_tx[k].tx = TransmitterId::fap(k);
    for (int n = 0; n < cfg.num_ced2d; ++n)
        s.per_tx[cfg.num_faps + n].tx = TransmitterId::ced2d(n);

    for (int vi : clique) {
        const Vertex& v = g.vertices[vi];
        auto& t = s.per_tx[v.tx.global(cfg.num_faps)];
        t.targeted.push_back(v.user);
        if (std::find(t.combo.begin(), t.combo.end(), v.file) == t.combo.end())
            t.combo.push_back(v.file);
        t.rate = v.rate;  // clique vertices of one transmitter share the rate
    }
    for (auto& t : s.per_tx) {
        std::sort(t.targeted.begin(), t.targeted.end());
        std::sort(t.combo.begin(), t.combo.end());
        if (t.tx.is_fap()) {
            for (FileId f : t.combo)
                if (!cache.tx_has(t.tx, f)) t.fetched.push_back(f);
            assert(static_cast<int>(t.fetched.size()) <= cfg.fetch_limit &&
                   "fetch budget violated by graph construction");
        }
    }
    return s;
}

std::optional<FileId> xor_decode(const std::vector<FileId>& combo, const FileSet& has) {
    FileId unknown = 0;
    int unknown_count = 0;
    for (FileId f : combo)
        if (!has.contains(f)) {
            unknown = f;
            if (++unknown_count > 1) return std::nullopt;
        }
    if (unknown_count != 1) return std::nullopt;
    return unknown;
}

double sum_rate_se(const Schedule& s, const SideInfo& side, double fronthaul_se) {
    double total = 0.0;
    for (const auto& t : s.per_tx) {
        for (int u : t.targeted) {
            const FileId f = side.wants[u];
            const bool fetched =
                std::find(t.fetched.begin(), t.fetched.end(), f) != t.fetched.end();
            total += fetched ? std::min(fronthaul_se, t.rate) : t.rate;
        }
    }
    return total;
}

double sum_rate_bps(const Schedule& s, const SideInfo& side, const ScenarioConfig& cfg) {
    return sum_rate_se(s, side, cfg.fronthaul_se()) * cfg.bandwidth_hz;
}

std::vector<std::string> validate_schedule(const Schedule& s, const SideInfo& side,
                                           const CacheMatrix& cache, const LinkCapacities& caps,
                                           const ScenarioConfig& cfg, const Partition* partition,
                                           const Topology* topo) {
    std::vector<std::string> bad;
    auto fail = [&](const std::string& m) { bad.push_back(m); };

    std::set<int> seen;
    for (const auto& t : s.per_tx) {
        const std::string tag = (t.tx.is_fap() ? "fap" : "ced2d") + std::to_string(t.tx.index);
        for (int u : t.targeted) {
            if (!seen.insert(u).second) fail("user targeted twice: " + std::to_string(u));
        }
        if (t.targeted.empty()) {
            if (!t.combo.empty()) fail(tag + ": combo without targeted users");
            continue;
        }
        if (t.rate < cfg.rate_threshold) fail(tag + ": rate below threshold");
        for (int u : t.targeted) {
            if (t.rate > tx_capacity(caps, t.tx, u) + 1e-12)
                fail(tag + ": rate above capacity of user " + std::to_string(u));
            const auto dec = xor_decode(t.combo, side.has[u]);
            if (!dec || *dec != side.wants[u])
                fail(tag + ": user " + std::to_string(u) + " cannot decode its request");
            if (partition) {
                const auto& mem = partition->members(t.tx);
                if (std::find(mem.begin(), mem.end(), u) == mem.end())
                    fail(tag + ": user " + std::to_string(u) + " outside coalition");
            }
            if (!t.tx.is_fap() && topo && !topo->covers(t.tx.index, u))
                fail(tag + ": user " + std::to_string(u) + " outside coverage");
        }
        int fetch_count = 0;
        for (FileId f : t.combo) {
            const bool cached = cache.tx_has(t.tx, f);
            if (!cached) {
                if (!t.tx.is_fap()) fail(tag + ": uncached file on a D2D link");
                ++fetch_count;
                if (std::find(t.fetched.begin(), t.fetched.end(), f) == t.fetched.end())
                    fail(tag + ": uncached file not accounted as fetched");
            }
        }
        if (t.tx.is_fap() && fetch_count > cfg.fetch_limit) fail(tag + ": fetch budget exceeded");
    }
    return bad;
}

std::string to_dot(const ConflictGraph& g) {
    std::ostringstream os;
    os << "graph conflict {\n";
    for (int i = 0; i < g.size(); ++i) {
        const auto& v = g.vertices[i];
        os << "  v" << i << " [label=\"" << (v.tx.is_fap() ? "k" : "n") << v.tx.index << " u"
           << v.user << " f" << v.file << " r=" << v.rate << " w=" << v.weight
           << (v.fetch ? " fetch" : "") << "\"];\n";
    }
    for (int i = 0; i < g.size(); ++i)
        for (int j = i + 1; j < g.size(); ++j)
            if (g.adjacent(i, j)) os << "  v" << i << " -- v" << j << ";\n";
    os << "}\n";
    return os.str();
}

}  // namespace fransim
