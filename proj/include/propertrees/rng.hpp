#pragma once

#include <cstdint>

namespace propertrees {

// Explicit seed for every randomized operation. Identical seed and
// parameters give bit-identical outputs.
struct Seed {
    std::uint64_t value = 0;
};

namespace detail {

inline std::uint64_t mix64(std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace detail

// Counter-based splitmix64 stream. Cheap to split into independent
// substreams, so parallel trials stay reproducible.
class Rng {
public:
    explicit Rng(Seed seed) : state_(seed.value) {}

    std::uint64_t next_u64() {
        state_ += 0x9e3779b97f4a7c15ULL;
        std::uint64_t z = state_;
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    // uniform in [0, 1)
    double next_double() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    // uniform in [0, bound); bound > 0
    std::uint64_t below(std::uint64_t bound) {
        // rejection-free multiply-shift; bias < 2^-64 per draw
        unsigned __int128 prod = static_cast<unsigned __int128>(next_u64()) * bound;
        return static_cast<std::uint64_t>(prod >> 64);
    }

    int below_int(int bound) { return static_cast<int>(below(static_cast<std::uint64_t>(bound))); }

    // Independent substream for e.g. trial number `stream`.
    static Seed derive(Seed master, std::uint64_t stream) {
        return Seed{detail::mix64(master.value ^ detail::mix64(stream))};
    }

private:
    std::uint64_t state_;
};

} // namespace propertrees
