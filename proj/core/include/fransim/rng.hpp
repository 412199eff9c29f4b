#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fransim {

// Seeded random stream. All draws are implemented on top of raw 64-bit
// outputs so that results are identical across standard libraries; the
// std::<distribution> classes are deliberately not used.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    // Independent substream addressed by up to three indices, e.g.
    // (master_seed, realization_index, component).
    static Rng derive(std::uint64_t master, std::uint64_t a, std::uint64_t b = 0,
                      std::uint64_t c = 0) {
        std::uint64_t s = mix(master);
        s = mix(s ^ (0x9e3779b97f4a7c15ULL + a));
        s = mix(s ^ (0xbf58476d1ce4e5b9ULL + b));
        s = mix(s ^ (0x94d049bb133111ebULL + c));
        return Rng(s);
    }

    std::uint64_t bits() { return engine_(); }

    // Uniform in [0, 1), 53-bit resolution.
    double uniform() { return static_cast<double>(bits() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Uniform integer in [0, n), rejection sampled (unbiased).
    std::uint64_t uniform_int(std::uint64_t n) {
        if (n <= 1) return 0;
        const std::uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        std::uint64_t x;
        do {
            x = bits();
        } while (x >= limit);
        return x % n;
    }

    // Standard normal via Box-Muller (cosine branch only; stateless).
    double normal() {
        double u1;
        do {
            u1 = uniform();
        } while (u1 <= 0.0);
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
    }

    // Exponential with unit mean; used for Rayleigh power gains |g|^2.
    double exponential() {
        double u;
        do {
            u = uniform();
        } while (u <= 0.0);
        return -std::log(u);
    }

  private:
    static constexpr double kPi = 3.14159265358979323846;

    static std::uint64_t mix(std::uint64_t z) {  // splitmix64 finalizer
        z += 0x9e3779b97f4a7c15ULL;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    std::mt19937_64 engine_;
};

}  // namespace fransim
