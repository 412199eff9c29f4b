#include "fransim/topology.hpp"

namespace fransim {

namespace {
std::atomic<std::uint64_t> g_clamp_count{0};
constexpr double kMinDistanceM = 1.0;
constexpr double kPi = 3.14159265358979323846;
}  // namespace

std::uint64_t path_loss_clamp_count() { return g_clamp_count.load(); }

double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

double path_loss_db(LinkKind kind, double distance_m) {
    if (distance_m < kMinDistanceM) {
        distance_m = kMinDistanceM;
        g_clamp_count.fetch_add(1, std::memory_order_relaxed);
    }
    const double d_km = distance_m / 1000.0;
    if (kind == LinkKind::cellular) return 128.1 + 37.6 * std::log10(d_km);
    return 148.0 + 40.0 * std::log10(d_km);
}

bool point_in_hexagon(Point p, double circumradius) {
    // Flat-top hexagon centered at the origin, vertices at angles 0,60,...,300.
    const double a = circumradius * std::sqrt(3.0) / 2.0;  // apothem
    const double s3 = std::sqrt(3.0) / 2.0;
    const double eps = 1e-9 * circumradius;
    return std::abs(s3 * p.x + 0.5 * p.y) <= a + eps && std::abs(p.y) <= a + eps &&
           std::abs(-s3 * p.x + 0.5 * p.y) <= a + eps;
}

Point sample_point_in_hexagon(double circumradius, Rng& rng) {
    // Rejection from the bounding circle.
    for (;;) {
        const double r = circumradius * std::sqrt(rng.uniform());
        const double theta = 2.0 * kPi * rng.uniform();
        const Point p{r * std::cos(theta), r * std::sin(theta)};
        if (point_in_hexagon(p, circumradius)) return p;
    }
}

std::vector<Point> sample_users(int count, double circumradius, Rng& rng) {
    std::vector<Point> pts;
    pts.reserve(count);
    for (int i = 0; i < count; ++i) pts.push_back(sample_point_in_hexagon(circumradius, rng));
    return pts;
}

std::vector<std::vector<int>> compute_coverage(const std::vector<Point>& ced2d,
                                               const std::vector<Point>& users, double range_m) {
    std::vector<std::vector<int>> cov(ced2d.size());
    for (std::size_t n = 0; n < ced2d.size(); ++n) {
        for (std::size_t u = 0; u < users.size(); ++u) {
            if (distance(ced2d[n], users[u]) <= range_m) cov[n].push_back(static_cast<int>(u));
        }
    }
    return cov;
}

Topology Topology::generate(const ScenarioConfig& cfg, Rng& rng) {
    Topology t;
    t.cell_radius_m = cfg.cell_radius_m;
    t.d2d_range_m = cfg.d2d_range_m;

    // F-AP 0 at the cell center, the rest on a ring at 2/3 radius.
    t.fap_positions.push_back({0.0, 0.0});
    const int ring = cfg.num_faps - 1;
    for (int j = 0; j < ring; ++j) {
        const double ang = 2.0 * kPi * j / ring;
        const double r = cfg.cell_radius_m * 2.0 / 3.0;
        t.fap_positions.push_back({r * std::cos(ang), r * std::sin(ang)});
    }

    for (int n = 0; n < cfg.num_ced2d; ++n)
        t.ced2d_positions.push_back(sample_point_in_hexagon(cfg.cell_radius_m, rng));

    t.user_positions = sample_users(cfg.num_users, cfg.cell_radius_m, rng);
    t.coverage = compute_coverage(t.ced2d_positions, t.user_positions, t.d2d_range_m);
    return t;
}

Topology Topology::with_users(std::vector<Point> users) const {
    Topology t = *this;
    t.user_positions = std::move(users);
    t.coverage = compute_coverage(t.ced2d_positions, t.user_positions, t.d2d_range_m);
    return t;
}

bool Topology::covers(int ced2d, int user) const {
    const auto& c = coverage[ced2d];
    return std::find(c.begin(), c.end(), user) != c.end();
}

}  // namespace fransim
