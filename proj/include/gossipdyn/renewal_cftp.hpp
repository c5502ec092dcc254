#pragma once

#include <cmath>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"

#include "gossipdyn/dynamic_graph.hpp"
#include "gossipdyn/edge_dynamics.hpp"
#include "gossipdyn/markov_sst.hpp"
#include "gossipdyn/rng.hpp"
#include "gossipdyn/stats.hpp"

namespace gossipdyn {

// Backward window of driving uniforms: a pure function of (seed, edge, time),
// so any cell is recomputable and nothing is ever stored.
struct UniformWindow {
    std::uint64_t seed = 0;

    double operator()(std::uint64_t edge, std::int64_t t) const {
        return rng::cell_unit(seed, rng::kStep, edge, t);
    }
};

struct CftpOptions {
    // Error out after this many multiples of the expected coalescing depth.
    double depth_limit_multiplier = 50.0;
    std::uint64_t hard_depth_limit = std::uint64_t{1} << 40;
};

inline std::uint64_t cftp_depth_limit(const RenewalEdgeParams& params, std::uint64_t n_edges,
                                      const CftpOptions& opts) {
    const double success =
        std::pow(1.0 - params.minorization_alpha(), static_cast<double>(n_edges));
    if (!(success > 0.0)) return opts.hard_depth_limit;
    const double limit = opts.depth_limit_multiplier / success;
    if (limit >= static_cast<double>(opts.hard_depth_limit)) return opts.hard_depth_limit;
    return static_cast<std::uint64_t>(limit) + 1;
}

// Smallest i >= 0 such that at time anchor - i every edge takes the
// minorization branch (u < 1 - alpha forces a renewal at any age).
inline std::uint64_t coalescing_depth(const RenewalEdgeParams& params, std::uint32_t n,
                                      const UniformWindow& window, std::int64_t anchor,
                                      const CftpOptions& opts = {}) {
    const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    const double threshold = 1.0 - params.minorization_alpha();
    const std::uint64_t limit = cftp_depth_limit(params, m, opts);
    for (std::uint64_t i = 0; i <= limit; ++i) {
        bool all = true;
        for (std::uint64_t e = 0; e < m; ++e) {
            if (!(window(e, anchor - static_cast<std::int64_t>(i)) < threshold)) {
                all = false;
                break;
            }
        }
        if (all) return i;
    }
    throw std::runtime_error("coalescence not found within limit (limit = " +
                             std::to_string(limit) + ")");
}

struct CftpResult {
    std::uint64_t theta0 = 0;  // coalescing depth at the anchor
    GraphSnapshot sample;      // graph at the anchor
    std::uint64_t work = 0;    // uniforms consumed
};

namespace detail {

// State of one edge at `anchor`, replayed from its own first minorization hit
// at or below the anchor. Identical to replaying the whole window from any
// earlier coalescence: at that hit the edge renews no matter what age it
// carried, and everything after is a deterministic function of the uniforms.
inline std::uint8_t replay_edge(const RenewalEdgeParams& params, const UniformWindow& window,
                                std::uint64_t e, std::int64_t anchor, std::uint64_t depth_limit,
                                std::uint64_t& work) {
    const double threshold = 1.0 - params.minorization_alpha();
    std::uint64_t back = 0;
    while (true) {
        ++work;
        if (window(e, anchor - static_cast<std::int64_t>(back)) < threshold) break;
        if (++back > depth_limit) {
            throw std::runtime_error("coalescence not found within limit (limit = " +
                                     std::to_string(depth_limit) + ")");
        }
    }
    std::uint8_t bit = 0;
    std::uint32_t age = 1;
    for (std::int64_t t = anchor - static_cast<std::int64_t>(back) + 1; t <= anchor; ++t) {
        ++work;
        const RenewalStep s = step_renewal(age, params, window(e, t));
        bit = s.bit;
        age = s.age;
    }
    return bit;
}

inline GraphSnapshot sample_at(const RenewalEdgeParams& params, std::uint32_t n,
                               const UniformWindow& window, std::int64_t anchor,
                               const CftpOptions& opts, std::uint64_t& work) {
    const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    // Per-edge limit: scanning alpha per step, not (1-alpha)^m per step.
    const double keep = params.minorization_alpha();
    double limit_d = opts.depth_limit_multiplier *
                     (keep > 0.0 ? 1.0 / (1.0 - keep) : 1.0) * 64.0;
    std::uint64_t limit = limit_d >= static_cast<double>(opts.hard_depth_limit)
                              ? opts.hard_depth_limit
                              : static_cast<std::uint64_t>(limit_d) + 64;
    std::vector<std::uint64_t> words(GraphSnapshot::word_count(n), 0);
    for (std::uint64_t e = 0; e < m; ++e) {
        if (replay_edge(params, window, e, anchor, limit, work)) {
            words[e >> 6] |= std::uint64_t{1} << (e & 63);
        }
    }
    return GraphSnapshot::from_presence(n, std::move(words));
}

}  // namespace detail

// Perfect draw from the stationary edge-renewal graph: find the coalescing
// depth, renew every edge there, roll the window forward to time 0.
inline CftpResult perfect_sample(const RenewalEdgeParams& params, std::uint32_t n,
                                 std::uint64_t seed, const CftpOptions& opts = {}) {
    if (!(params.minorization_alpha() < 1.0)) {
        throw std::invalid_argument("perfect_sample requires alpha < 1");
    }
    const UniformWindow window{seed};
    CftpResult res;
    res.theta0 = coalescing_depth(params, n, window, 0, opts);
    res.work = 0;
    res.sample = detail::sample_at(params, n, window, 0, opts, res.work);
    return res;
}

// Test oracle: run every edge forward from explicit ages at `start_time`,
// consuming the same window uniforms, and report the graph at `target_time`.
inline GraphSnapshot replay_from_ages(const RenewalEdgeParams& params, std::uint32_t n,
                                      const UniformWindow& window, std::int64_t start_time,
                                      std::span<const std::uint32_t> ages,
                                      std::int64_t target_time = 0) {
    const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    if (ages.size() != m) throw std::invalid_argument("one age per edge required");
    std::vector<std::uint64_t> words(GraphSnapshot::word_count(n), 0);
    for (std::uint64_t e = 0; e < m; ++e) {
        std::uint8_t bit = 0;
        std::uint32_t age = ages[e];
        if (age < 1) throw std::invalid_argument("ages must be >= 1");
        for (std::int64_t t = start_time + 1; t <= target_time; ++t) {
            const RenewalStep s = step_renewal(age, params, window(e, t));
            bit = s.bit;
            age = s.age;
        }
        if (bit) words[e >> 6] |= std::uint64_t{1} << (e & 63);
    }
    return GraphSnapshot::from_presence(n, std::move(words));
}

// Backward sequence of strong stationary times t_1 = 0 > t_2 > ...: each pass
// anchors one step before the previous coalescence, so passes consume disjoint
// stretches of the window and the samples are i.i.d. stationary.
struct BackwardStationaryTimes {
    std::vector<std::int64_t> times;
    std::vector<GraphSnapshot> samples;

    // |t_{i+1} - t_i| = depth_i + 1, geometric with success (1-alpha)^{C(n,2)}.
    std::vector<std::uint64_t> spacings() const {
        std::vector<std::uint64_t> out;
        for (std::size_t i = 1; i < times.size(); ++i) {
            out.push_back(static_cast<std::uint64_t>(times[i - 1] - times[i]));
        }
        return out;
    }
};

inline BackwardStationaryTimes backward_stationary_times(const RenewalEdgeParams& params,
                                                         std::uint32_t n, std::size_t count,
                                                         std::uint64_t seed,
                                                         const CftpOptions& opts = {}) {
    if (count < 1) throw std::invalid_argument("need at least one stationary time");
    const UniformWindow window{seed};
    BackwardStationaryTimes out;
    std::int64_t anchor = 0;
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t depth = coalescing_depth(params, n, window, anchor, opts);
        std::uint64_t work = 0;
        out.times.push_back(anchor);
        out.samples.push_back(detail::sample_at(params, n, window, anchor, opts, work));
        anchor -= static_cast<std::int64_t>(depth) + 1;
    }
    return out;
}

struct CftpTailCertificate {
    double bound = 0.0;      // Chernoff value for s = D/C - 1
    double empirical = 0.0;  // fraction of trials with -t_{ceil(Cr)+1} > D r
    double s_ratio = 0.0;
    std::uint64_t trials = 0;
    std::uint64_t exceedances = 0;
};

// Certify P(-t_{Cr} > Dr): the distance to the (Cr)-th stationary time is a
// sum of i.i.d. geometrics with success (1-alpha)^{C(n,2)}, and the Chernoff
// bound from the block argument caps its tail. Uses a constant hazard
// 1 - alpha_n; the coalescence law depends on the hazard only through alpha.
inline CftpTailCertificate cftp_tail_certificate(double alpha_n, std::uint32_t n, double C,
                                                 double D, double r, std::uint64_t trials,
                                                 std::uint64_t seed) {
    if (!(alpha_n > 0.0 && alpha_n < 1.0)) throw std::invalid_argument("alpha in (0,1) required");
    if (!(C > 0.0) || !(r > 0.0) || trials == 0) {
        throw std::invalid_argument("positive C, r and trials required");
    }
    CftpTailCertificate cert;
    cert.s_ratio = D / C - 1.0;
    cert.bound = chernoff_tail_bound(cert.s_ratio, r);  // throws unless s_ratio > 1
    cert.trials = trials;
    const auto params = RenewalEdgeParams::constant(1.0 - alpha_n);
    const auto spacing_count = static_cast<std::size_t>(std::ceil(C * r));
    const double budget = D * r;
    const CftpOptions opts;
    for (std::uint64_t trial = 0; trial < trials; ++trial) {
        const UniformWindow w{rng::derive(seed, rng::kTrial, trial)};
        std::int64_t anchor = 0;
        for (std::size_t i = 0; i < spacing_count; ++i) {
            const std::uint64_t depth = coalescing_depth(params, n, w, anchor, opts);
            anchor -= static_cast<std::int64_t>(depth) + 1;
            if (static_cast<double>(-anchor) > budget) break;
        }
        if (static_cast<double>(-anchor) > budget) ++cert.exceedances;
    }
    cert.empirical = static_cast<double>(cert.exceedances) / static_cast<double>(trials);
    return cert;
}

// Validation report for the perfect sampler, JSON shape:
// {theta0_histogram, marginal_estimate, pi1_expected, ks_statistics}.
inline nlohmann::json cftp_validation_report(const RenewalEdgeParams& params, std::uint32_t n,
                                             std::size_t samples, std::uint64_t seed) {
    if (samples < 100) throw std::invalid_argument("need >= 100 samples");
    const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    std::vector<std::uint64_t> theta_hist;
    std::uint64_t present = 0;
    for (std::size_t i = 0; i < samples; ++i) {
        const auto res = perfect_sample(params, n, rng::derive(seed, rng::kTrial, i));
        if (res.theta0 >= theta_hist.size()) theta_hist.resize(res.theta0 + 1, 0);
        ++theta_hist[res.theta0];
        present += res.sample.edge_count();
    }
    const double marginal =
        static_cast<double>(present) / (static_cast<double>(samples) * static_cast<double>(m));
    const double pi1 = 1.0 - 1.0 / params.mean_gap();

    // spacing law against eq-style geometric survival
    const std::size_t n_times = std::min<std::size_t>(std::max<std::size_t>(samples / 4, 64), 4096);
    const auto bst = backward_stationary_times(params, n, n_times, rng::derive(seed, 0xb5));
    const auto spacings = bst.spacings();
    const double success =
        std::pow(1.0 - params.minorization_alpha(), static_cast<double>(m));
    const auto cdf = [success](std::uint64_t k) {
        // spacing >= 1; P(spacing <= k) = 1 - (1-success)^k
        return 1.0 - std::pow(1.0 - success, static_cast<double>(k));
    };
    const double ks = stats::ks_statistic_discrete(spacings, cdf);
    const double band = stats::dkw_band_4sigma(spacings.size());

    const double sigma = stats::binomial_sigma(
        pi1, static_cast<double>(samples) * static_cast<double>(m));

    nlohmann::json rep;
    rep["theta0_histogram"] = theta_hist;
    rep["marginal_estimate"] = marginal;
    rep["pi1_expected"] = pi1;
    rep["samples"] = samples;
    rep["ks_statistics"] = {
        {"spacing_ks", ks},
        {"spacing_band_4sigma", band},
        {"spacing_pass", ks <= band},
        {"marginal_z", sigma > 0.0 ? (marginal - pi1) / sigma : 0.0},
    };
    return rep;
}

}  // namespace gossipdyn
