#pragma once

#include <cstdint>

namespace mstsp {

/// Small deterministic 64-bit generator (splitmix64). Used instead of the
/// standard distributions so that identical seeds give identical draws on
/// every platform and standard library.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform integer in [0, n).
    std::uint64_t bounded(std::uint64_t n) { return next() % n; }

    /// Uniform double in [0, 1).
    double uniform() {
        return static_cast<double>(next() >> 11) * 0x1.0p-53;
    }

  private:
    std::uint64_t state_;
};

/// Mixes a base seed with stream indices so parallel workers own
/// independent, schedule-invariant random streams.
inline std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a,
                                 std::uint64_t b = 0) {
    Rng r(base ^ (a * 0x9e3779b97f4a7c15ULL) ^ (b * 0xd1b54a32d192ed03ULL));
    r.next();
    return r.next();
}

}  // namespace mstsp
