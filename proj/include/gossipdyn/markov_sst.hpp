#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "gossipdyn/dynamic_graph.hpp"
#include "gossipdyn/edge_dynamics.hpp"
#include "gossipdyn/rng.hpp"

namespace gossipdyn {

struct Mat2 {
    // m[from][to]
    std::array<std::array<double, 2>, 2> m{};
};

// Closed form P^k(x,y) = lambda(y) + Delta^k (1{x=y} - lambda(y)).
inline Mat2 two_state_power(const MarkovEdgeParams& params, std::uint64_t k) {
    params.validate();
    Mat2 out;
    if (k == 0 || params.p + params.q == 0.0) {  // P^0, and the identity chain
        out.m = {{{1.0, 0.0}, {0.0, 1.0}}};
        return out;
    }
    const auto law = markov_stationary(params);
    const double d = markov_delta(params);
    const double mag = std::pow(std::fabs(d), static_cast<double>(k));
    const double dk = (d < 0.0 && (k & 1)) ? -mag : mag;
    const double lambda[2] = {law.lambda0, law.lambda1};
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            out.m[x][y] = lambda[y] + dk * ((x == y ? 1.0 : 0.0) - lambda[y]);
        }
    }
    return out;
}

// s_edge(k) = 1 - min_{x,y} P^k(x,y)/lambda(y); satisfies s_edge <= rho|Delta|^k.
inline double edge_separation(const MarkovEdgeParams& params, std::uint64_t k) {
    if (k < 1) throw std::invalid_argument("separation order must be >= 1");
    const auto law = markov_stationary(params);
    if (law.lambda0 <= 0.0 || law.lambda1 <= 0.0) {
        throw std::invalid_argument("degenerate stationary law");
    }
    const Mat2 pk = two_state_power(params, k);
    const double lambda[2] = {law.lambda0, law.lambda1};
    double min_ratio = std::numeric_limits<double>::infinity();
    for (int x = 0; x < 2; ++x) {
        for (int y = 0; y < 2; ++y) {
            min_ratio = std::min(min_ratio, pk.m[x][y] / lambda[y]);
        }
    }
    return std::max(0.0, 1.0 - min_ratio);
}

// s(k) = 1 - (1 - s_edge(k))^{|E|}, evaluated as -expm1(|E| log1p(-s_edge))
// to survive huge edge counts.
inline double graph_separation(const MarkovEdgeParams& params, std::uint64_t n_edges,
                               std::uint64_t k) {
    const double se = edge_separation(params, k);
    if (se >= 1.0) return 1.0;
    return -std::expm1(static_cast<double>(n_edges) * std::log1p(-se));
}

struct UbsBound {
    double mid = 0.0;    // n^2 (M / n^alpha)^k
    double outer = 0.0;  // n^{-t (k - l)}
    bool valid = false;  // k > l and mid <= outer
};

inline UbsBound ubs_bound(double n, double M, double alpha_family, double k, double t, double l) {
    if (!(n > 1.0) || !(M > 0.0) || !(alpha_family > 0.0) || !(t > 0.0) || !(l > 0.0)) {
        throw std::invalid_argument("ubs_bound needs positive constants and n > 1");
    }
    UbsBound b;
    b.mid = n * n * std::pow(M / std::pow(n, alpha_family), k);
    b.outer = std::pow(n, -t * (k - l));
    b.valid = k > l && b.mid <= b.outer;
    return b;
}

// Smallest lattice (t, l) making the bound chain valid across the whole grid;
// searches t descending so the tightest exponent wins.
inline std::optional<std::pair<double, double>> ubs_search(double M, double alpha_family,
                                                           std::span<const std::uint32_t> n_grid,
                                                           std::uint64_t k_min,
                                                           std::uint64_t k_max) {
    for (double t = 3.0; t >= 0.25; t -= 0.25) {
        for (double l = 1.0; l <= 8.0; l += 1.0) {
            bool ok = true;
            for (std::uint32_t n : n_grid) {
                for (std::uint64_t k = k_min; k <= k_max && ok; ++k) {
                    ok = ubs_bound(n, M, alpha_family, static_cast<double>(k), t, l).valid;
                }
                if (!ok) break;
            }
            if (ok) return std::make_pair(t, l);
        }
    }
    return std::nullopt;
}

struct UbsConstants {
    double n = 0.0;
    double M = 0.0;
    double alpha = 0.0;
    double t = 0.0;
    double l = 0.0;
};

// Exact separation distances of the product chain over n_edges independent
// two-state edges, together with the standard envelopes.
class SeparationProfile {
public:
    SeparationProfile(MarkovEdgeParams params, std::uint64_t n_edges)
        : params_(params), n_edges_(n_edges) {
        const auto law = markov_stationary(params_);
        if (law.lambda0 <= 0.0 || law.lambda1 <= 0.0) {
            throw std::invalid_argument("degenerate stationary law");
        }
        lambda0_ = law.lambda0;
        lambda1_ = law.lambda1;
        delta_ = markov_delta(params_);
        rho_ = markov_rho(params_);
    }

    const MarkovEdgeParams& params() const { return params_; }
    std::uint64_t n_edges() const { return n_edges_; }
    double delta() const { return delta_; }
    double rho() const { return rho_; }
    double lambda0() const { return lambda0_; }
    double lambda1() const { return lambda1_; }

    // s(k); s(0) = 1 from any fixed start (n_edges >= 1).
    double separation(std::uint64_t k) const {
        if (k == 0) return n_edges_ >= 1 ? 1.0 : 0.0;
        return graph_separation(params_, n_edges_, k);
    }

    double edge_envelope(std::uint64_t k) const {
        return rho_ * std::pow(std::fabs(delta_), static_cast<double>(k));
    }

    // 1 - (1 - rho|Delta|^k)^{|E|}, clamped to the vacuous 1 when the base
    // exceeds 1.
    double product_bound(std::uint64_t k) const {
        const double env = edge_envelope(k);
        if (env >= 1.0) return 1.0;
        return -std::expm1(static_cast<double>(n_edges_) * std::log1p(-env));
    }

    // CSV export: k, s_exact, s_bound_rho, s_bound_ubs.
    void write_csv(std::ostream& os, std::span<const std::uint64_t> ks,
                   const std::optional<UbsConstants>& ubs = std::nullopt) const {
        os << "k,s_exact,s_bound_rho,s_bound_ubs\n";
        for (std::uint64_t k : ks) {
            os << k << ',' << separation(k) << ',' << product_bound(k) << ',';
            if (ubs) {
                os << ubs_bound(ubs->n, ubs->M, ubs->alpha, static_cast<double>(k), ubs->t,
                                ubs->l)
                          .mid;
            } else {
                os << "nan";
            }
            os << '\n';
        }
    }

private:
    MarkovEdgeParams params_;
    std::uint64_t n_edges_;
    double lambda0_, lambda1_, delta_, rho_;
};

// T with P(T > k) = s(k) exactly, by inverse CDF on the nonincreasing s.
inline std::uint64_t sample_strong_uniform_time(const SeparationProfile& profile,
                                                rng::SplitMix64& gen) {
    if (std::fabs(profile.delta()) >= 1.0) {
        throw std::domain_error("no finite strong uniform time (|delta| = 1)");
    }
    double v = gen.next_unit();
    if (v <= 0.0) v = std::numeric_limits<double>::min();
    // T = min{k >= 0 : v >= s(k)}; s(0) = 1 > v, so T >= 1.
    std::uint64_t hi = 1;
    while (v < profile.separation(hi)) {
        hi *= 2;
        if (hi > (std::uint64_t{1} << 40)) {
            throw std::runtime_error("strong uniform time search overflow");
        }
    }
    std::uint64_t lo = hi / 2;  // v < s(lo) for lo >= 1; s(0) = 1 handled by lo=0
    while (lo + 1 < hi) {
        const std::uint64_t mid = lo + (hi - lo) / 2;
        if (v >= profile.separation(mid)) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    return hi;
}

// exp(-(1 - 1/s)^2 * s * r / 2); with r = log n this is n^{-(1-1/s)^2 s / 2}.
inline double chernoff_tail_bound(double s_ratio, double r) {
    if (!(s_ratio > 1.0)) throw std::invalid_argument("s_ratio must exceed 1");
    if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
    const double c = 1.0 - 1.0 / s_ratio;
    return std::exp(-c * c * s_ratio * r / 2.0);
}

// Times at which a Doeblin-refresh evolution has renewed every edge since the
// previous record; snapshots there are independent ER(lambda1) draws.
struct StationaryTimeRecord {
    std::vector<std::uint64_t> times;                            // t_0 = 0 first
    std::vector<GraphSnapshot> snapshots;                        // aligned with times
    std::vector<std::array<std::uint64_t, 4>> transition_counts; // per edge: 00,01,10,11
    std::uint64_t steps = 0;                                     // absolute steps simulated
    std::uint32_t step_width = 1;                                // 2 in the negative-delta mode
};

// Evolve the graph by the refresh representation P = Delta*I + (1-Delta)*Lambda
// (each edge keeps its bit or redraws it from lambda), which reproduces the
// edge-Markov law exactly for Delta >= 0. For Delta < 0 the chain is driven in
// two-step blocks, whose eigenvalue parameter Delta^2 is nonnegative; recorded
// times then live on even steps and transitions follow P^2.
//
// Records t_0 = 0 plus the first `count` stationary times; keeps stepping to
// `min_steps` so long-run transition frequencies can be audited.
inline StationaryTimeRecord refresh_coupling_run(const DynamicGraphState& state,
                                                 std::size_t count,
                                                 std::uint64_t min_steps = 0,
                                                 bool record_snapshots = true) {
    const auto* mk = std::get_if<MarkovEdgeParams>(&state.spec().params);
    if (!mk) throw std::invalid_argument("refresh coupling requires a Markov spec");
    const double d = markov_delta(*mk);
    const bool two_step = d < 0.0;
    const double keep = two_step ? d * d : d;
    if (keep >= 1.0) throw std::invalid_argument("no refresh possible (|delta| = 1)");
    const double refresh_p = 1.0 - keep;
    const double lambda1 = markov_stationary(*mk).lambda1;
    const std::uint32_t n = state.n();
    const std::uint64_t m = state.spec().edge_count();
    const std::uint32_t width = two_step ? 2 : 1;

    std::vector<std::uint8_t> bits(m);
    for (std::uint64_t e = 0; e < m; ++e) bits[e] = state.edge_states()[e].bit;

    StationaryTimeRecord rec;
    rec.step_width = width;
    rec.transition_counts.assign(m, {0, 0, 0, 0});
    rec.times.push_back(0);
    auto snapshot_from_bits = [&]() {
        std::vector<std::uint64_t> words(GraphSnapshot::word_count(n), 0);
        for (std::uint64_t e = 0; e < m; ++e) {
            if (bits[e]) words[e >> 6] |= std::uint64_t{1} << (e & 63);
        }
        return GraphSnapshot::from_presence(n, std::move(words));
    };
    if (record_snapshots) rec.snapshots.push_back(snapshot_from_bits());

    std::vector<std::uint8_t> refreshed(m, 0);
    std::uint64_t pending = m;
    std::size_t recorded = 0;
    const std::uint64_t min_blocks = (min_steps + width - 1) / width;
    for (std::uint64_t block = 1; recorded < count || block <= min_blocks; ++block) {
        for (std::uint64_t e = 0; e < m; ++e) {
            const double u = rng::cell_unit(state.seed(), rng::kRefresh, e, block);
            const std::uint8_t old = bits[e];
            if (u < refresh_p) {
                // conditional slice of the same uniform is again uniform
                bits[e] = (u / refresh_p) < lambda1 ? 1 : 0;
                if (!refreshed[e]) {
                    refreshed[e] = 1;
                    --pending;
                }
            }
            ++rec.transition_counts[e][old * 2 + bits[e]];
        }
        rec.steps = block * width;
        if (pending == 0 && recorded < count) {
            rec.times.push_back(block * width);
            if (record_snapshots) rec.snapshots.push_back(snapshot_from_bits());
            ++recorded;
            std::fill(refreshed.begin(), refreshed.end(), std::uint8_t{0});
            pending = m;
        }
    }
    return rec;
}

}  // namespace gossipdyn
