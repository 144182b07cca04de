#pragma once

#include <cstdint>
#include <cmath>

namespace oscint {

// Counter-based RNG: every output is a pure function of (key, counter), so
// streams keyed by (seed, slice, sample) give scheduler-independent results.
// Core transform is splitmix64.
class CounterRng {
public:
    explicit CounterRng(std::uint64_t seed,
                        std::uint64_t stream0 = 0,
                        std::uint64_t stream1 = 0)
        : key_(mix(mix(mix(0x8c95'71a9'd4e1'0b37ULL ^ seed) ^ stream0) ^ stream1)) {}

    std::uint64_t next_u64() {
        std::uint64_t z = key_ + (++ctr_) * 0x9E3779B97F4A7C15ULL;
        return mix(z);
    }

    // uniform in [0,1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * next_double(); }

    // standard normal, Box-Muller
    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 == 0.0) u1 = next_double();
        double u2 = next_double();
        double r = std::sqrt(-2.0 * std::log(u1));
        double a = 6.283185307179586476925286766559 * u2;
        spare_ = r * std::sin(a);
        have_spare_ = true;
        return r * std::cos(a);
    }

    // Exp(1)
    double exponential() {
        double u = 0.0;
        while (u == 0.0) u = next_double();
        return -std::log(u);
    }

private:
    static std::uint64_t mix(std::uint64_t z) {
        z ^= z >> 30; z *= 0xBF58476D1CE4E5B9ULL;
        z ^= z >> 27; z *= 0x94D049BB133111EBULL;
        z ^= z >> 31;
        return z;
    }

    std::uint64_t key_;
    std::uint64_t ctr_ = 0;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

} // namespace oscint
