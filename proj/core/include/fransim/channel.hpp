#pragma once

#include <vector>

#include "fransim/config.hpp"
#include "fransim/rng.hpp"
#include "fransim/topology.hpp"

namespace fransim {

// Transmit powers for one interval. F-AP powers vary in [0, P_max]; the
// CE-D2D power Q is a single fixed value shared by all CE-D2D users.
struct PowerProfile {
    std::vector<double> fap_power_w;
    double ced2d_power_w = 0.0;

    static PowerProfile all_max(const ScenarioConfig& cfg) {
        PowerProfile p;
        p.fap_power_w.assign(cfg.num_faps, cfg.max_power_w());
        p.ced2d_power_w = cfg.ced2d_power_w();
        return p;
    }
};

// Per-link power gains |h|^2 for one transmission interval (quasi-static).
struct ChannelRealization {
    std::vector<std::vector<double>> fap_gain;   // K x U
    std::vector<std::vector<double>> d2d_gain;   // N x U
    double noise_power_w = 0.0;                  // N0 * B
    double bandwidth_hz = 0.0;
};

struct ChannelOptions {
    bool shadowing = true;  // log-normal, 4 dB std dev
    bool fading = true;     // Rayleigh, unit-mean power
};

// gain = pathloss^-1 * 10^(X/10) * |g|^2, independent across links.
ChannelRealization draw_channel(const Topology& topo, const ScenarioConfig& cfg, Rng& rng,
                                ChannelOptions opts = {});

// Cellular and D2D bands are overlay (out-of-band): no cross interference.
double sinr_fap(int k, int u, const PowerProfile& powers, const ChannelRealization& h);
double sinr_ced2d(int n, int u, const PowerProfile& powers, const ChannelRealization& h);

inline double capacity(double sinr) { return std::log2(1.0 + sinr); }

// Per-link spectral efficiencies at a fixed power profile.
struct LinkCapacities {
    std::vector<std::vector<double>> fap;   // K x U
    std::vector<std::vector<double>> d2d;   // N x U
};

LinkCapacities compute_capacities(const ChannelRealization& h, const PowerProfile& powers);

}  // namespace fransim
