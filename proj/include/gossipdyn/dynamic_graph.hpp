#pragma once

#include <bit>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "gossipdyn/edge_dynamics.hpp"
#include "gossipdyn/rng.hpp"

namespace gossipdyn {

using EdgeParams = std::variant<IidEdgeParams, MarkovEdgeParams, RenewalEdgeParams>;

// Canonical, reproducibility-critical index of the undirected edge (x, y),
// x < y, over [n]: x*n - x*(x+1)/2 + (y - x - 1).
constexpr std::uint64_t edge_index(std::uint32_t n, std::uint32_t x, std::uint32_t y) {
    const std::uint64_t xx = x;
    return xx * n - xx * (xx + 1) / 2 + (y - x - 1);
}

struct EdgeProcessSpec {
    std::uint32_t n = 0;
    EdgeParams params;

    std::uint64_t edge_count() const { return static_cast<std::uint64_t>(n) * (n - 1) / 2; }

    bool is_iid() const { return std::holds_alternative<IidEdgeParams>(params); }
    bool is_markov() const { return std::holds_alternative<MarkovEdgeParams>(params); }
    bool is_renewal() const { return std::holds_alternative<RenewalEdgeParams>(params); }

    const char* dynamics_name() const {
        if (is_iid()) return "iid";
        if (is_markov()) return "markov";
        return "renewal";
    }

    // pi(1): the stationary per-edge presence probability.
    double stationary_presence() const {
        if (const auto* iid = std::get_if<IidEdgeParams>(&params)) return iid->p;
        if (const auto* mk = std::get_if<MarkovEdgeParams>(&params)) {
            return markov_stationary(*mk).lambda1;
        }
        return 1.0 - 1.0 / std::get<RenewalEdgeParams>(params).mean_gap();
    }

    void validate() const {
        if (n < 1) throw std::invalid_argument("vertex count must be >= 1");
        if (const auto* iid = std::get_if<IidEdgeParams>(&params)) iid->validate();
        if (const auto* mk = std::get_if<MarkovEdgeParams>(&params)) mk->validate();
    }
};

// One round's graph: edge presence bitset over canonical indices plus the
// derived per-vertex adjacency (CSR). Treat as immutable once obtained.
class GraphSnapshot {
public:
    GraphSnapshot() = default;

    static GraphSnapshot from_presence(std::uint32_t n, std::vector<std::uint64_t> words) {
        GraphSnapshot g;
        g.assign(n, std::move(words));
        return g;
    }

    static GraphSnapshot from_edges(std::uint32_t n,
                                    std::span<const std::pair<std::uint32_t, std::uint32_t>> edges) {
        std::vector<std::uint64_t> words(word_count(n), 0);
        for (auto [u, v] : edges) {
            if (u == v || u >= n || v >= n) throw std::invalid_argument("bad edge");
            const std::uint64_t idx = u < v ? edge_index(n, u, v) : edge_index(n, v, u);
            words[idx >> 6] |= std::uint64_t{1} << (idx & 63);
        }
        return from_presence(n, std::move(words));
    }

    static GraphSnapshot complete(std::uint32_t n) {
        const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        std::vector<std::uint64_t> words(word_count(n), ~std::uint64_t{0});
        if (m % 64 != 0 && !words.empty()) words.back() = (std::uint64_t{1} << (m % 64)) - 1;
        return from_presence(n, std::move(words));
    }

    static GraphSnapshot empty_graph(std::uint32_t n) {
        return from_presence(n, std::vector<std::uint64_t>(word_count(n), 0));
    }

    std::uint32_t n() const { return n_; }
    std::uint64_t edge_count() const { return edges_; }

    bool has_edge(std::uint32_t u, std::uint32_t v) const {
        if (u == v || u >= n_ || v >= n_) return false;
        const std::uint64_t idx = u < v ? edge_index(n_, u, v) : edge_index(n_, v, u);
        return (presence_[idx >> 6] >> (idx & 63)) & 1;
    }

    std::span<const std::uint32_t> neighbors(std::uint32_t v) const {
        if (v >= n_) throw std::out_of_range("vertex out of range");
        return {adj_.data() + offsets_[v], offsets_[v + 1] - offsets_[v]};
    }

    std::uint32_t degree(std::uint32_t v) const {
        if (v >= n_) throw std::out_of_range("vertex out of range");
        return offsets_[v + 1] - offsets_[v];
    }

    const std::vector<std::uint64_t>& presence() const { return presence_; }

    // `lhs` edge set contained in `rhs` edge set.
    friend bool subgraph_of(const GraphSnapshot& lhs, const GraphSnapshot& rhs) {
        if (lhs.n_ != rhs.n_) return false;
        for (std::size_t w = 0; w < lhs.presence_.size(); ++w) {
            if (lhs.presence_[w] & ~rhs.presence_[w]) return false;
        }
        return true;
    }

    friend bool operator==(const GraphSnapshot& a, const GraphSnapshot& b) {
        return a.n_ == b.n_ && a.presence_ == b.presence_;
    }

    // Debug export, one "u v" pair per line.
    void write_edge_list(std::ostream& os) const {
        for_each_edge([&os](std::uint32_t x, std::uint32_t y) { os << x << ' ' << y << '\n'; });
    }

    template <class F>
    void for_each_edge(F&& fn) const {
        std::uint32_t x = 0;
        std::uint64_t row_base = 0;       // first index of row x
        std::uint64_t row_end = n_ - 1;   // one past row x
        for (std::size_t w = 0; w < presence_.size(); ++w) {
            std::uint64_t bits = presence_[w];
            while (bits) {
                const int b = std::countr_zero(bits);
                bits &= bits - 1;
                const std::uint64_t idx = (static_cast<std::uint64_t>(w) << 6) + b;
                while (idx >= row_end) {
                    ++x;
                    row_base = row_end;
                    row_end += n_ - 1 - x;
                }
                fn(x, static_cast<std::uint32_t>(x + 1 + (idx - row_base)));
            }
        }
    }

    static std::size_t word_count(std::uint32_t n) {
        return (static_cast<std::uint64_t>(n) * (n - 1) / 2 + 63) / 64;
    }

private:
    friend class DynamicGraphState;

    void assign(std::uint32_t n, std::vector<std::uint64_t> words) {
        if (n < 1) throw std::invalid_argument("vertex count must be >= 1");
        if (words.size() != word_count(n)) throw std::invalid_argument("presence size mismatch");
        const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
        if (m % 64 != 0 && !words.empty()) {
            words.back() &= (std::uint64_t{1} << (m % 64)) - 1;  // no bits past C(n,2)
        }
        n_ = n;
        presence_ = std::move(words);
        build_adjacency();
    }

    void build_adjacency() {
        offsets_.assign(n_ + 1, 0);
        edges_ = 0;
        for_each_edge([this](std::uint32_t x, std::uint32_t y) {
            ++offsets_[x + 1];
            ++offsets_[y + 1];
            ++edges_;
        });
        for (std::uint32_t v = 0; v < n_; ++v) offsets_[v + 1] += offsets_[v];
        adj_.resize(2 * edges_);
        std::vector<std::uint32_t> cursor(offsets_.begin(), offsets_.end() - 1);
        for_each_edge([this, &cursor](std::uint32_t x, std::uint32_t y) {
            adj_[cursor[x]++] = y;
            adj_[cursor[y]++] = x;
        });
    }

    std::uint32_t n_ = 0;
    std::uint64_t edges_ = 0;
    std::vector<std::uint64_t> presence_;
    std::vector<std::uint32_t> offsets_;
    std::vector<std::uint32_t> adj_;
};

// Joint state of all C(n,2) edge processes plus the current snapshot. Confined
// to one trial; uniforms come from pure (seed, stream, edge, time) cells, so a
// rerun with the same seed is bit-identical and two states sharing a seed are
// automatically coupled through common uniforms.
class DynamicGraphState {
public:
    // Stationary initialization: Markov edges i.i.d. Bernoulli(lambda1),
    // renewal edges via the stationary delay converted to an age.
    DynamicGraphState(EdgeProcessSpec spec, std::uint64_t seed)
        : spec_(std::move(spec)), seed_(seed) {
        spec_.validate();
        const std::uint64_t m = spec_.edge_count();
        std::vector<std::uint64_t> words(GraphSnapshot::word_count(spec_.n), 0);
        if (const auto* mk = std::get_if<MarkovEdgeParams>(&spec_.params)) {
            const double lambda1 = markov_stationary(*mk).lambda1;
            states_.resize(m);
            for (std::uint64_t e = 0; e < m; ++e) {
                const double u = rng::cell_unit(seed_, rng::kInit, e, 0);
                states_[e].bit = u < lambda1 ? 1 : 0;
                if (states_[e].bit) words[e >> 6] |= std::uint64_t{1} << (e & 63);
            }
        } else if (const auto* rn = std::get_if<RenewalEdgeParams>(&spec_.params)) {
            states_.resize(m);
            for (std::uint64_t e = 0; e < m; ++e) {
                const double u = rng::cell_unit(seed_, rng::kInit, e, 0);
                const std::uint64_t delay = stationary_delay_sample(*rn, u);
                states_[e].bit = delay == 0 ? 0 : 1;
                states_[e].age = static_cast<std::uint32_t>(delay + 1);
                if (states_[e].bit) words[e >> 6] |= std::uint64_t{1} << (e & 63);
            }
        } else {
            sample_iid_presence(words, rng::kInit, 0);
        }
        current_.assign(spec_.n, std::move(words));
    }

    // Non-stationary start from explicit per-edge bits (experiments and
    // coupling fixtures); renewal ages start at 1.
    static DynamicGraphState from_bits(EdgeProcessSpec spec, std::uint64_t seed,
                                       const std::vector<std::uint8_t>& bits) {
        DynamicGraphState state(std::move(spec), seed);
        if (bits.size() != state.spec_.edge_count()) {
            throw std::invalid_argument("one bit per edge required");
        }
        std::vector<std::uint64_t> words(GraphSnapshot::word_count(state.spec_.n), 0);
        for (std::uint64_t e = 0; e < bits.size(); ++e) {
            if (!state.states_.empty()) state.states_[e] = {bits[e], 1};
            if (bits[e]) words[e >> 6] |= std::uint64_t{1} << (e & 63);
        }
        state.current_.assign(state.spec_.n, std::move(words));
        return state;
    }

    const EdgeProcessSpec& spec() const { return spec_; }
    std::uint32_t n() const { return spec_.n; }
    std::uint64_t seed() const { return seed_; }
    std::int64_t time() const { return time_; }
    const GraphSnapshot& snapshot() const { return current_; }
    const std::vector<EdgeState>& edge_states() const { return states_; }

    // Advance every edge one step (each consumes exactly one uniform from its
    // derived stream) and return the fresh snapshot. The reference is
    // invalidated by the next advance; copy to keep history.
    const GraphSnapshot& advance() {
        ++time_;
        const std::uint64_t m = spec_.edge_count();
        scratch_.assign(GraphSnapshot::word_count(spec_.n), 0);
        if (const auto* mk = std::get_if<MarkovEdgeParams>(&spec_.params)) {
            for (std::uint64_t e = 0; e < m; ++e) {
                const double u = rng::cell_unit(seed_, rng::kStep, e, time_);
                states_[e].bit = step_markov(states_[e].bit, *mk, u);
                if (states_[e].bit) scratch_[e >> 6] |= std::uint64_t{1} << (e & 63);
            }
        } else if (const auto* rn = std::get_if<RenewalEdgeParams>(&spec_.params)) {
            for (std::uint64_t e = 0; e < m; ++e) {
                const double u = rng::cell_unit(seed_, rng::kStep, e, time_);
                const RenewalStep s = step_renewal(states_[e].age, *rn, u);
                states_[e] = {s.bit, s.age};
                if (s.bit) scratch_[e >> 6] |= std::uint64_t{1} << (e & 63);
            }
        } else {
            sample_iid_presence(scratch_, rng::kStep, time_);
        }
        current_.assign(spec_.n, std::move(scratch_));
        scratch_ = {};
        return current_;
    }

private:
    // Fresh ER(p) draw. Dense per-edge uniforms for moderate p; geometric
    // skipping over canonical indices when p is small (exact, stateless).
    void sample_iid_presence(std::vector<std::uint64_t>& words, std::uint64_t tag,
                             std::int64_t t) {
        const double p = std::get<IidEdgeParams>(spec_.params).p;
        const std::uint64_t m = spec_.edge_count();
        if (p >= 1.0) {
            for (std::uint64_t e = 0; e < m; ++e) words[e >> 6] |= std::uint64_t{1} << (e & 63);
            return;
        }
        if (p <= 0.0) return;
        if (p > kSparseThreshold) {
            for (std::uint64_t e = 0; e < m; ++e) {
                if (rng::cell_unit(seed_, tag, e, t) < p) {
                    words[e >> 6] |= std::uint64_t{1} << (e & 63);
                }
            }
            return;
        }
        rng::SplitMix64 gen(rng::derive(seed_, rng::kSparse, static_cast<std::uint64_t>(t)) ^
                            rng::derive(seed_, tag));
        const double log1mp = std::log1p(-p);
        std::uint64_t e = 0;
        while (true) {
            double u = gen.next_unit();
            if (u <= 0.0) u = 0x1.0p-53;
            const double skip = std::floor(std::log(u) / log1mp);
            if (skip >= static_cast<double>(m - e)) break;
            e += static_cast<std::uint64_t>(skip);
            words[e >> 6] |= std::uint64_t{1} << (e & 63);
            if (++e >= m) break;
        }
    }

    static constexpr double kSparseThreshold = 0.1;

    EdgeProcessSpec spec_;
    std::uint64_t seed_ = 0;
    std::int64_t time_ = 0;
    std::vector<EdgeState> states_;
    GraphSnapshot current_;
    std::vector<std::uint64_t> scratch_;
};

inline DynamicGraphState init_stationary(EdgeProcessSpec spec, std::uint64_t seed) {
    return DynamicGraphState(std::move(spec), seed);
}

// Advance a dominance-ordered pair of Markov states one step on shared
// uniforms (they must be built over the same seed, which makes the per-edge
// streams literally identical). Containment lower <= upper is preserved by
// the monotone threshold rule whenever P_lower(1|x') <= P_upper(1|x'') for
// all x' <= x'', i.e. p' <= p'', p' <= 1-q'' and q' >= q''.
inline std::pair<const GraphSnapshot*, const GraphSnapshot*> coupled_advance(
    DynamicGraphState& lower, DynamicGraphState& upper) {
    const auto* pl = std::get_if<MarkovEdgeParams>(&lower.spec().params);
    const auto* pu = std::get_if<MarkovEdgeParams>(&upper.spec().params);
    if (!pl || !pu) throw std::invalid_argument("coupled_advance requires Markov specs");
    if (lower.n() != upper.n()) throw std::invalid_argument("coupled_advance: size mismatch");
    if (lower.seed() != upper.seed()) {
        throw std::invalid_argument("coupled_advance: states must share a seed");
    }
    if (lower.time() != upper.time()) {
        throw std::invalid_argument("coupled_advance: states must share a clock");
    }
    const bool dominated =
        pl->p <= pu->p && pl->p <= 1.0 - pu->q && 1.0 - pl->q <= 1.0 - pu->q;
    if (!dominated) {
        throw std::invalid_argument("no monotone coupling under these parameters");
    }
    const GraphSnapshot& lo = lower.advance();
    const GraphSnapshot& hi = upper.advance();
    return {&lo, &hi};
}

}  // namespace gossipdyn
