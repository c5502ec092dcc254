#pragma once

#include <bit>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "gossipdyn/dynamic_graph.hpp"
#include "gossipdyn/rng.hpp"

namespace gossipdyn {

enum class Protocol { Push, Pull, PushPull, Flood };

inline const char* protocol_name(Protocol p) {
    switch (p) {
        case Protocol::Push: return "push";
        case Protocol::Pull: return "pull";
        case Protocol::PushPull: return "pushpull";
        case Protocol::Flood: return "flood";
    }
    return "?";
}

inline Protocol parse_protocol(const std::string& s) {
    if (s == "push") return Protocol::Push;
    if (s == "pull") return Protocol::Pull;
    if (s == "pushpull" || s == "push-pull") return Protocol::PushPull;
    if (s == "flood") return Protocol::Flood;
    throw std::invalid_argument("unknown protocol: " + s);
}

// Bitset over [n] with a cached cardinality.
class InformedSet {
public:
    explicit InformedSet(std::uint32_t n) : n_(n), words_((n + 63) / 64, 0) {}

    static InformedSet single(std::uint32_t n, std::uint32_t v) {
        InformedSet s(n);
        s.add(v);
        return s;
    }

    std::uint32_t n() const { return n_; }
    std::uint32_t count() const { return count_; }
    bool all() const { return count_ == n_; }

    bool contains(std::uint32_t v) const {
        if (v >= n_) throw std::out_of_range("vertex out of range");
        return (words_[v >> 6] >> (v & 63)) & 1;
    }

    void add(std::uint32_t v) {
        if (v >= n_) throw std::out_of_range("vertex out of range");
        const std::uint64_t mask = std::uint64_t{1} << (v & 63);
        if (!(words_[v >> 6] & mask)) {
            words_[v >> 6] |= mask;
            ++count_;
        }
    }

    template <class F>
    void for_each(F&& fn) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            std::uint64_t bits = words_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                fn(static_cast<std::uint32_t>((w << 6) + b));
            }
        }
    }

    // this a subset of other
    bool subset_of(const InformedSet& other) const {
        for (std::size_t w = 0; w < words_.size(); ++w) {
            if (words_[w] & ~other.words_[w]) return false;
        }
        return true;
    }

    friend bool operator==(const InformedSet& a, const InformedSet& b) {
        return a.n_ == b.n_ && a.words_ == b.words_;
    }

private:
    std::uint32_t n_ = 0;
    std::uint32_t count_ = 0;
    std::vector<std::uint64_t> words_;
};

// Each informed node sends to one uniformly chosen neighbor; isolated nodes
// are no-ops. Synchronous: choices read the round's starting informed set.
inline InformedSet push_round(const GraphSnapshot& g, const InformedSet& informed,
                              rng::SplitMix64& gen) {
    InformedSet out = informed;
    informed.for_each([&](std::uint32_t v) {
        const auto nb = g.neighbors(v);
        if (nb.empty()) return;
        out.add(nb[gen.below(nb.size())]);
    });
    return out;
}

// Each uninformed node polls one uniformly chosen neighbor and becomes
// informed iff that neighbor already was at the start of the round.
inline InformedSet pull_round(const GraphSnapshot& g, const InformedSet& informed,
                              rng::SplitMix64& gen) {
    InformedSet out = informed;
    for (std::uint32_t v = 0; v < g.n(); ++v) {
        if (informed.contains(v)) continue;
        const auto nb = g.neighbors(v);
        if (nb.empty()) continue;
        if (informed.contains(nb[gen.below(nb.size())])) out.add(v);
    }
    return out;
}

// Union of a push phase and a pull phase on the same starting set, with
// independent choices. The push phase consumes uniforms first, so with a
// shared generator state the result contains the plain push_round result.
inline InformedSet push_pull_round(const GraphSnapshot& g, const InformedSet& informed,
                                   rng::SplitMix64& gen) {
    InformedSet out = informed;
    informed.for_each([&](std::uint32_t v) {
        const auto nb = g.neighbors(v);
        if (nb.empty()) return;
        out.add(nb[gen.below(nb.size())]);
    });
    for (std::uint32_t v = 0; v < g.n(); ++v) {
        if (informed.contains(v)) continue;
        const auto nb = g.neighbors(v);
        if (nb.empty()) continue;
        if (informed.contains(nb[gen.below(nb.size())])) out.add(v);
    }
    return out;
}

// Informed nodes inform every neighbor; deterministic given the snapshot.
inline InformedSet flood_round(const GraphSnapshot& g, const InformedSet& informed) {
    InformedSet out = informed;
    informed.for_each([&](std::uint32_t v) {
        for (std::uint32_t u : g.neighbors(v)) out.add(u);
    });
    return out;
}

inline InformedSet protocol_round(Protocol p, const GraphSnapshot& g, const InformedSet& informed,
                                  rng::SplitMix64& gen) {
    if (g.n() != informed.n()) throw std::invalid_argument("snapshot/informed size mismatch");
    switch (p) {
        case Protocol::Push: return push_round(g, informed, gen);
        case Protocol::Pull: return pull_round(g, informed, gen);
        case Protocol::PushPull: return push_pull_round(g, informed, gen);
        case Protocol::Flood: return flood_round(g, informed);
    }
    throw std::logic_error("unreachable");
}

struct RunResult {
    Protocol protocol = Protocol::Push;
    std::uint64_t seed = 0;
    std::uint32_t cap = 0;
    std::optional<std::uint32_t> completion;      // rounds; empty means censored
    std::vector<std::uint32_t> trajectory;        // informed counts, [0] = start

    bool censored() const { return !completion.has_value(); }
    std::uint32_t rounds_or_cap() const { return completion.value_or(cap); }
};

// Run to completion from a single source: each round the graph advances one
// step first, then the protocol acts on the fresh snapshot. Stops when all n
// vertices are informed or after `cap` rounds (censored).
inline RunResult run(DynamicGraphState& state, Protocol protocol, std::uint32_t source,
                     std::uint32_t cap) {
    if (source >= state.n()) throw std::invalid_argument("source out of range");
    if (cap < 1) throw std::invalid_argument("cap must be >= 1");
    RunResult res;
    res.protocol = protocol;
    res.seed = state.seed();
    res.cap = cap;
    InformedSet informed = InformedSet::single(state.n(), source);
    res.trajectory.push_back(informed.count());
    if (informed.all()) {
        res.completion = 0;
        return res;
    }
    rng::SplitMix64 gen(rng::derive(state.seed(), rng::kProtocol));
    for (std::uint32_t round = 1; round <= cap; ++round) {
        const GraphSnapshot& g = state.advance();
        informed = protocol_round(protocol, g, informed, gen);
        res.trajectory.push_back(informed.count());
        if (informed.all()) {
            res.completion = round;
            break;
        }
    }
    return res;
}

}  // namespace gossipdyn
