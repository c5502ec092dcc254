#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "gossipdyn/rng.hpp"

namespace gossipdyn::stats {

// Two-sided normal tail mass at 4 sigma; the acceptance bands in this project
// are phrased as "within 4 standard errors".
inline constexpr double kFourSigmaTail = 6.334248366623996e-5;

inline double mean(std::span<const double> xs) {
    if (xs.empty()) throw std::invalid_argument("mean of empty sample");
    return std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
}

inline double variance(std::span<const double> xs) {
    if (xs.size() < 2) throw std::invalid_argument("variance needs >= 2 samples");
    const double m = mean(xs);
    double acc = 0.0;
    for (double x : xs) acc += (x - m) * (x - m);
    return acc / static_cast<double>(xs.size() - 1);
}

// Nearest-rank quantile of a sorted sample, q in (0, 1].
template <class T>
T quantile_sorted(const std::vector<T>& sorted, double q) {
    if (sorted.empty()) throw std::invalid_argument("quantile of empty sample");
    const double rank = std::ceil(q * static_cast<double>(sorted.size()));
    auto idx = static_cast<std::size_t>(std::max(1.0, rank)) - 1;
    if (idx >= sorted.size()) idx = sorted.size() - 1;
    return sorted[idx];
}

// Regularized incomplete gamma Q(a, x) = Gamma(a, x)/Gamma(a); series for
// x < a+1, continued fraction otherwise (Lentz).
inline double gamma_q(double a, double x) {
    if (a <= 0.0 || x < 0.0) throw std::invalid_argument("gamma_q domain");
    if (x == 0.0) return 1.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::fabs(del) < std::fabs(sum) * 1e-15) break;
        }
        return 1.0 - sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double kTiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / kTiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::fabs(d) < kTiny) d = kTiny;
        c = b + an / c;
        if (std::fabs(c) < kTiny) c = kTiny;
        d = 1.0 / d;
        const double del = d * c;
        h *= del;
        if (std::fabs(del - 1.0) < 1e-15) break;
    }
    return std::exp(-x + a * std::log(x) - lg) * h;
}

// Survival function of the chi-square distribution with `dof` degrees.
inline double chi2_sf(double x, double dof) { return gamma_q(dof / 2.0, x / 2.0); }

// Chi-square statistic for observed vs expected cell counts.
inline double chi2_statistic(std::span<const double> observed, std::span<const double> expected) {
    if (observed.size() != expected.size()) throw std::invalid_argument("chi2 size mismatch");
    double stat = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        if (expected[i] <= 0.0) {
            if (observed[i] != 0.0) return std::numeric_limits<double>::infinity();
            continue;
        }
        const double d = observed[i] - expected[i];
        stat += d * d / expected[i];
    }
    return stat;
}

inline double binomial_sigma(double p, double m) { return std::sqrt(p * (1.0 - p) / m); }

// Half-width of the empirical-CDF band with failure probability `tail`
// (Dvoretzky-Kiefer-Wolfowitz: P(sup|F_m - F| > e) <= 2 exp(-2 m e^2)).
inline double dkw_band(std::size_t m, double tail) {
    return std::sqrt(std::log(2.0 / tail) / (2.0 * static_cast<double>(m)));
}

inline double dkw_band_4sigma(std::size_t m) { return dkw_band(m, kFourSigmaTail); }

// sup_k |F_hat(k) - F(k)| for integer-valued samples against a discrete CDF.
// Both CDFs are right-continuous steps that jump only at integers, so the sup
// over the reals is attained on the integer grid.
inline double ks_statistic_discrete(const std::vector<std::uint64_t>& samples,
                                    const std::function<double(std::uint64_t)>& cdf) {
    if (samples.empty()) throw std::invalid_argument("ks on empty sample");
    std::vector<std::uint64_t> xs(samples);
    std::sort(xs.begin(), xs.end());
    const double m = static_cast<double>(xs.size());
    double d = 0.0;
    std::size_t i = 0;
    while (i < xs.size()) {
        std::size_t j = i;
        while (j < xs.size() && xs[j] == xs[i]) ++j;
        const std::uint64_t v = xs[i];
        // just below the atom and at the atom
        d = std::max(d, std::fabs(static_cast<double>(i) / m - (v == 0 ? 0.0 : cdf(v - 1))));
        d = std::max(d, std::fabs(static_cast<double>(j) / m - cdf(v)));
        i = j;
    }
    return d;
}

inline double lag1_autocorr(std::span<const double> xs) {
    if (xs.size() < 3) throw std::invalid_argument("lag1_autocorr needs >= 3 points");
    const double m = mean(xs);
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double d = xs[i] - m;
        den += d * d;
        if (i + 1 < xs.size()) num += d * (xs[i + 1] - m);
    }
    if (den == 0.0) return 0.0;
    return num / den;
}

// Permutation p-value for the null "series is exchangeable" against lag-1
// autocorrelation; add-one smoothing keeps the estimate positive.
inline double permutation_pvalue_lag1(std::span<const double> xs, std::size_t permutations,
                                      std::uint64_t seed) {
    const double observed = std::fabs(lag1_autocorr(xs));
    std::vector<double> work(xs.begin(), xs.end());
    rng::SplitMix64 gen(rng::derive(seed, 0x9e1));
    std::size_t at_least = 0;
    for (std::size_t b = 0; b < permutations; ++b) {
        for (std::size_t i = work.size() - 1; i > 0; --i) {
            const auto j = static_cast<std::size_t>(gen.below(i + 1));
            std::swap(work[i], work[j]);
        }
        if (std::fabs(lag1_autocorr(work)) >= observed) ++at_least;
    }
    return (1.0 + static_cast<double>(at_least)) / (1.0 + static_cast<double>(permutations));
}

struct Quantiles {
    double p10 = 0.0;
    double p50 = 0.0;
    double p90 = 0.0;
};

template <class T>
Quantiles quantiles_p10_p50_p90(std::vector<T> values) {
    std::sort(values.begin(), values.end());
    return {static_cast<double>(quantile_sorted(values, 0.10)),
            static_cast<double>(quantile_sorted(values, 0.50)),
            static_cast<double>(quantile_sorted(values, 0.90))};
}

}  // namespace gossipdyn::stats
