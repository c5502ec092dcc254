#include "doctest.h"

#include <cmath>
#include <vector>

#include "gossipdyn/stats.hpp"

using namespace gossipdyn;

TEST_SUITE("stats") {

TEST_CASE("chi2 survival function against known values") {
    // chi2_sf(x, 2) = exp(-x/2)
    CHECK(stats::chi2_sf(2.0, 2.0) == doctest::Approx(std::exp(-1.0)).epsilon(1e-10));
    CHECK(stats::chi2_sf(10.0, 2.0) == doctest::Approx(std::exp(-5.0)).epsilon(1e-10));
    // chi2_sf(x, 1) = 2 Phi(-sqrt(x)) = erfc(sqrt(x/2))
    CHECK(stats::chi2_sf(4.0, 1.0) == doctest::Approx(std::erfc(std::sqrt(2.0))).epsilon(1e-9));
    CHECK(stats::chi2_sf(0.0, 5.0) == 1.0);
}

TEST_CASE("quantiles use nearest rank") {
    std::vector<int> xs = {5, 1, 4, 2, 3};
    const auto q = stats::quantiles_p10_p50_p90(xs);
    CHECK(q.p10 == 1.0);
    CHECK(q.p50 == 3.0);
    CHECK(q.p90 == 5.0);
    std::vector<int> one = {7};
    const auto q1 = stats::quantiles_p10_p50_p90(one);
    CHECK(q1.p10 == 7.0);
    CHECK(q1.p90 == 7.0);
}

TEST_CASE("ks statistic on an exact discrete match is small") {
    // empirical = exact geometric: sample from the cdf inverse on a fine grid
    std::vector<std::uint64_t> xs;
    const double p = 0.4;
    auto cdf = [p](std::uint64_t k) { return 1.0 - std::pow(1.0 - p, static_cast<double>(k)); };
    rng::SplitMix64 gen(11);
    for (int i = 0; i < 20000; ++i) {
        double u = gen.next_unit();
        std::uint64_t k = 1;
        while (cdf(k) <= u) ++k;
        xs.push_back(k);
    }
    const double d = stats::ks_statistic_discrete(xs, cdf);
    CHECK(d <= stats::dkw_band_4sigma(xs.size()));
}

TEST_CASE("ks statistic flags a wrong law") {
    std::vector<std::uint64_t> xs(5000, 3);  // point mass
    auto cdf = [](std::uint64_t k) { return 1.0 - std::pow(0.5, static_cast<double>(k)); };
    CHECK(stats::ks_statistic_discrete(xs, cdf) > stats::dkw_band_4sigma(xs.size()));
}

TEST_CASE("lag-1 autocorrelation of alternating series is -1ish") {
    std::vector<double> xs;
    for (int i = 0; i < 100; ++i) xs.push_back(i % 2 == 0 ? 1.0 : -1.0);
    CHECK(stats::lag1_autocorr(xs) < -0.9);
}

TEST_CASE("permutation p-value accepts exchangeable data, rejects trends") {
    rng::SplitMix64 gen(3);
    std::vector<double> iid;
    for (int i = 0; i < 300; ++i) iid.push_back(gen.next_unit());
    CHECK(stats::permutation_pvalue_lag1(iid, 2000, 17) > 0.01);

    std::vector<double> trend;
    for (int i = 0; i < 300; ++i) trend.push_back(i);
    CHECK(stats::permutation_pvalue_lag1(trend, 2000, 17) < 0.01);
}

TEST_CASE("dkw band shrinks like 1/sqrt(m)") {
    CHECK(stats::dkw_band_4sigma(100) > stats::dkw_band_4sigma(10000));
    CHECK(stats::dkw_band_4sigma(10000) ==
          doctest::Approx(stats::dkw_band_4sigma(100) / 10.0).epsilon(1e-12));
}

}  // TEST_SUITE
