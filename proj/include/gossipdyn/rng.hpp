#pragma once

#include <cstdint>
#include <limits>

namespace gossipdyn::rng {

inline constexpr std::uint64_t kGolden = 0x9e3779b97f4a7c15ull;

// splitmix64 finalizer: a 64-bit bijection with full avalanche.
constexpr std::uint64_t mix64(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
    return z ^ (z >> 31);
}

constexpr std::uint64_t combine(std::uint64_t h, std::uint64_t v) {
    return mix64((h + kGolden) ^ (v * 0xff51afd7ed558ccdull));
}

// Purpose tags keep the uniform streams derived from one seed disjoint.
enum Stream : std::uint64_t {
    kStep = 1,      // per-edge dynamics updates (also the CFTP window)
    kInit = 2,      // stationary initialization draws
    kProtocol = 3,  // push/pull neighbor choices
    kSource = 4,    // source vertex draw of a trial
    kSparse = 5,    // geometric-skip sampler for i.i.d. snapshots
    kRefresh = 6,   // Doeblin refresh coupling
    kTrial = 7,     // per-trial seed derivation in sweeps
};

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t tag) {
    return combine(seed, tag);
}

constexpr std::uint64_t derive(std::uint64_t seed, std::uint64_t a, std::uint64_t b) {
    return combine(combine(seed, a), b);
}

// Top 53 bits -> [0, 1).
constexpr double unit(std::uint64_t bits) {
    return static_cast<double>(bits >> 11) * 0x1.0p-53;
}

// One uniform per (seed, tag, edge, time) cell. Pure, so any window of a
// trajectory can be replayed without storing it; negative times are the
// coupling-from-the-past window.
constexpr double cell_unit(std::uint64_t seed, std::uint64_t tag, std::uint64_t edge,
                           std::int64_t time) {
    return unit(combine(combine(combine(seed, tag), edge), static_cast<std::uint64_t>(time)));
}

// Sequential stream for sampling that consumes a variable number of uniforms.
class SplitMix64 {
public:
    explicit constexpr SplitMix64(std::uint64_t seed) : state_(seed) {}

    constexpr std::uint64_t next() {
        state_ += kGolden;
        return mix64(state_);
    }

    constexpr double next_unit() { return unit(next()); }

    // Unbiased integer in [0, n); Lemire multiply-reject.
    std::uint64_t below(std::uint64_t n) {
        unsigned __int128 m = static_cast<unsigned __int128>(next()) * n;
        auto lo = static_cast<std::uint64_t>(m);
        if (lo < n) {
            const std::uint64_t threshold = -n % n;
            while (lo < threshold) {
                m = static_cast<unsigned __int128>(next()) * n;
                lo = static_cast<std::uint64_t>(m);
            }
        }
        return static_cast<std::uint64_t>(m >> 64);
    }

private:
    std::uint64_t state_;
};

}  // namespace gossipdyn::rng
