#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace dvs {

// Seeded generator used everywhere randomness is needed. The raw engine is
// std::mt19937_64 (fully specified by the standard); the real-valued draws
// below are hand-mapped so that sequences are identical on every platform,
// which std::uniform_real_distribution / std::normal_distribution do not
// guarantee.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : gen_(seed) {}

    std::uint64_t next_u64() { return gen_(); }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    // Box-Muller; one draw per call, the sine branch is discarded.
    double normal(double mean, double sigma) {
        double u1 = 1.0 - uniform();  // (0, 1], keeps log finite
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        return mean + sigma * r * std::cos(2.0 * 3.141592653589793238462643383279502884 * u2);
    }

    // uniform integer in [0, n)
    std::uint64_t below(std::uint64_t n) { return gen_() % n; }

private:
    std::mt19937_64 gen_;
};

}  // namespace dvs
