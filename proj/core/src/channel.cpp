#include "fransim/channel.hpp"

namespace fransim {

namespace {
constexpr double kShadowingStdDb = 4.0;

double link_gain(LinkKind kind, double dist_m, Rng& rng, const ChannelOptions& opts) {
    double gain = db_to_linear(-path_loss_db(kind, dist_m));
    if (opts.shadowing) gain *= db_to_linear(kShadowingStdDb * rng.normal());
    if (opts.fading) gain *= rng.exponential();  // |g|^2, E = 1
    return gain;
}
}  // namespace

ChannelRealization draw_channel(const Topology& topo, const ScenarioConfig& cfg, Rng& rng,
                                ChannelOptions opts) {
    ChannelRealization h;
    h.noise_power_w = cfg.noise_power_w();
    h.bandwidth_hz = cfg.bandwidth_hz;
    h.fap_gain.assign(topo.num_faps(), std::vector<double>(topo.num_users()));
    h.d2d_gain.assign(topo.num_ced2d(), std::vector<double>(topo.num_users()));
    for (int k = 0; k < topo.num_faps(); ++k)
        for (int u = 0; u < topo.num_users(); ++u)
            h.fap_gain[k][u] = link_gain(
                LinkKind::cellular, distance(topo.fap_positions[k], topo.user_positions[u]), rng,
                opts);
    for (int n = 0; n < topo.num_ced2d(); ++n)
        for (int u = 0; u < topo.num_users(); ++u)
            h.d2d_gain[n][u] = link_gain(
                LinkKind::d2d, distance(topo.ced2d_positions[n], topo.user_positions[u]), rng,
                opts);
    return h;
}

double sinr_fap(int k, int u, const PowerProfile& powers, const ChannelRealization& h) {
    double interference = 0.0;
    for (std::size_t l = 0; l < h.fap_gain.size(); ++l)
        if (static_cast<int>(l) != k) interference += powers.fap_power_w[l] * h.fap_gain[l][u];
    return powers.fap_power_w[k] * h.fap_gain[k][u] / (interference + h.noise_power_w);
}

double sinr_ced2d(int n, int u, const PowerProfile& powers, const ChannelRealization& h) {
    double interference = 0.0;
    for (std::size_t m = 0; m < h.d2d_gain.size(); ++m)
        if (static_cast<int>(m) != n) interference += powers.ced2d_power_w * h.d2d_gain[m][u];
    return powers.ced2d_power_w * h.d2d_gain[n][u] / (interference + h.noise_power_w);
}

LinkCapacities compute_capacities(const ChannelRealization& h, const PowerProfile& powers) {
    LinkCapacities c;
    const int num_users = h.fap_gain.empty() ? 0 : static_cast<int>(h.fap_gain[0].size());
    c.fap.assign(h.fap_gain.size(), std::vector<double>(num_users));
    c.d2d.assign(h.d2d_gain.size(), std::vector<double>(num_users));
    for (std::size_t k = 0; k < h.fap_gain.size(); ++k)
        for (int u = 0; u < num_users; ++u)
            c.fap[k][u] = capacity(sinr_fap(static_cast<int>(k), u, powers, h));
    for (std::size_t n = 0; n < h.d2d_gain.size(); ++n)
        for (int u = 0; u < num_users; ++u)
            c.d2d[n][u] = capacity(sinr_ced2d(static_cast<int>(n), u, powers, h));
    return c;
}

}  // namespace fransim
