#ifndef MVOPTBL_RNG_HPP
#define MVOPTBL_RNG_HPP

#include <cstdint>

namespace mvoptbl {

/// 64-bit linear congruential generator (Knuth's MMIX constants:
/// multiplier 6364136223846793005, increment 1442695040888963407), so runs
/// are bit-reproducible across platforms.
class Lcg {
public:
    explicit Lcg(std::uint64_t seed = 1) : state_(seed) {}

    std::uint64_t next() {
        state_ = state_ * 6364136223846793005ULL + 1442695040888963407ULL;
        return state_;
    }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

private:
    std::uint64_t state_;
};

}  // namespace mvoptbl

#endif
