#pragma once

#include <atomic>
#include <cmath>
#include <vector>

#include "fransim/config.hpp"
#include "fransim/rng.hpp"

namespace fransim {

struct Point {
    double x = 0.0;
    double y = 0.0;
};

inline double distance(Point a, Point b) {
    return std::hypot(a.x - b.x, a.y - b.y);
}

enum class LinkKind { cellular, d2d };

// 128.1 + 37.6 log10(d_km) for cellular, 148 + 40 log10(d_km) for D2D.
// Distances below 1 m are clamped (counted, see path_loss_clamp_count).
double path_loss_db(LinkKind kind, double distance_m);
std::uint64_t path_loss_clamp_count();
double db_to_linear(double db);

// Network geometry: F-AP / CE-D2D / user positions inside a hexagonal cell
// plus the derived per-CE-D2D coverage sets A_n.
struct Topology {
    double cell_radius_m = 0.0;
    double d2d_range_m = 0.0;
    std::vector<Point> fap_positions;
    std::vector<Point> ced2d_positions;
    std::vector<Point> user_positions;
    std::vector<std::vector<int>> coverage;  // per CE-D2D user: sorted user ids with d <= R

    // F-APs on a fixed layout (center + ring at 2/3 radius), CE-D2D users and
    // users uniform over the hexagon.
    static Topology generate(const ScenarioConfig& cfg, Rng& rng);

    // Same infrastructure, fresh user drop; coverage recomputed.
    Topology with_users(std::vector<Point> users) const;

    int num_users() const { return static_cast<int>(user_positions.size()); }
    int num_faps() const { return static_cast<int>(fap_positions.size()); }
    int num_ced2d() const { return static_cast<int>(ced2d_positions.size()); }
    bool covers(int ced2d, int user) const;
};

bool point_in_hexagon(Point p, double circumradius);
Point sample_point_in_hexagon(double circumradius, Rng& rng);
std::vector<Point> sample_users(int count, double circumradius, Rng& rng);
std::vector<std::vector<int>> compute_coverage(const std::vector<Point>& ced2d,
                                               const std::vector<Point>& users, double range_m);

}  // namespace fransim
