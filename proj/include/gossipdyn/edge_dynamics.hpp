#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>

namespace gossipdyn {

inline void check_probability(double x, const char* name) {
    if (!(x >= 0.0 && x <= 1.0)) {
        throw std::invalid_argument(std::string(name) + " must lie in [0, 1]");
    }
}

// i.i.d. Bernoulli edge: present with probability p at every step.
struct IidEdgeParams {
    double p = 0.0;

    void validate() const { check_probability(p, "p"); }
};

// Two-state edge chain: p = P(1|0) (absent -> present), q = P(0|1).
struct MarkovEdgeParams {
    double p = 0.0;
    double q = 0.0;

    void validate() const {
        check_probability(p, "p");
        check_probability(q, "q");
    }
};

struct StationaryLaw {
    double lambda0 = 0.0;  // absent
    double lambda1 = 0.0;  // present
};

inline StationaryLaw markov_stationary(const MarkovEdgeParams& m) {
    m.validate();
    if (m.p + m.q <= 0.0) throw std::invalid_argument("no unique stationary law (p + q = 0)");
    return {m.q / (m.p + m.q), m.p / (m.p + m.q)};
}

// Second eigenvalue of the two-state chain: 1 - p - q, in [-1, 1].
inline double markov_delta(const MarkovEdgeParams& m) { return 1.0 - m.p - m.q; }

// max{lambda0/lambda1, lambda1/lambda0, 1}.
inline double markov_rho(const MarkovEdgeParams& m) {
    const auto law = markov_stationary(m);
    if (law.lambda0 <= 0.0 || law.lambda1 <= 0.0) {
        throw std::invalid_argument("degenerate stationary law");
    }
    return std::max({law.lambda0 / law.lambda1, law.lambda1 / law.lambda0, 1.0});
}

// Threshold update: next bit is 1 iff u < P(1|bit). Monotone in the bit
// whenever p <= 1 - q, which is what the common-uniform coupling relies on.
inline std::uint8_t step_markov(std::uint8_t bit, const MarkovEdgeParams& m, double u) {
    const double birth = bit ? (1.0 - m.q) : m.p;
    return u < birth ? std::uint8_t{1} : std::uint8_t{0};
}

// Stationary binary renewal edge, renewal state 0 (absent). Gaps between
// renewals are integers >= 1 with hazard h(i) = P(Z = i | Z >= i) and
// minorization inf_i h(i) = 1 - alpha > 0.
class RenewalEdgeParams {
public:
    using Hazard = std::function<double(std::uint64_t)>;

    static constexpr std::uint64_t kDefaultHorizon = 1'000'000;
    static constexpr double kDefaultTol = 1e-12;

    RenewalEdgeParams(Hazard hazard_fn, double minorization_alpha,
                      std::uint64_t truncation_horizon = kDefaultHorizon,
                      double tol = kDefaultTol)
        : hazard_(std::move(hazard_fn)),
          alpha_(minorization_alpha),
          horizon_(truncation_horizon),
          tol_(tol) {
        if (!hazard_) throw std::invalid_argument("hazard function required");
        if (!(alpha_ >= 0.0 && alpha_ < 1.0)) {
            throw std::invalid_argument("minorization alpha must lie in [0, 1)");
        }
        if (horizon_ == 0) throw std::invalid_argument("truncation horizon must be positive");
        const std::uint64_t prefix = std::min<std::uint64_t>(horizon_, 1024);
        for (std::uint64_t i = 1; i <= prefix; ++i) hazard(i);
        mean_ = try_mean(tol_);
    }

    static RenewalEdgeParams constant(double h, std::uint64_t horizon = kDefaultHorizon) {
        check_probability(h, "hazard");
        if (h <= 0.0) throw std::invalid_argument("constant hazard must be positive");
        return RenewalEdgeParams([h](std::uint64_t) { return h; }, 1.0 - h, horizon);
    }

    // h(i) = 1 - ((i+2)/(i+1)) / scale; the worst case is i = 1, so
    // alpha = 1.5 / scale. Needs scale > 1.5 to be a hazard at all.
    static RenewalEdgeParams example_hazard(double scale, std::uint64_t horizon = kDefaultHorizon) {
        if (!(scale > 1.5)) throw std::invalid_argument("example hazard needs scale > 3/2");
        auto h = [scale](std::uint64_t i) {
            const double di = static_cast<double>(i);
            return 1.0 - (di + 2.0) / ((di + 1.0) * scale);
        };
        return RenewalEdgeParams(std::move(h), 1.5 / scale, horizon);
    }

    // P(Z = i | Z >= i); validates the range and the minorization on use.
    double hazard(std::uint64_t i) const {
        if (i < 1) throw std::invalid_argument("hazard index must be >= 1");
        const double h = hazard_(i);
        if (!(h > 0.0 && h <= 1.0)) throw std::invalid_argument("hazard value out of (0, 1]");
        if (h < 1.0 - alpha_ - 1e-12) {
            throw std::invalid_argument("hazard violates the declared minorization");
        }
        return h;
    }

    double minorization_alpha() const { return alpha_; }
    std::uint64_t truncation_horizon() const { return horizon_; }

    // Mean gap; computed once at construction via truncated summation.
    double mean_gap() const {
        if (!mean_) throw std::domain_error("nonconvergent mean");
        return *mean_;
    }

    bool mean_converged() const { return mean_.has_value(); }

private:
    std::optional<double> try_mean(double tol) const;

    Hazard hazard_;
    double alpha_;
    std::uint64_t horizon_;
    double tol_;
    std::optional<double> mean_;
};

// P(Z = i) = h(i) * prod_{j<i} (1 - h(j)).
inline double gap_distribution(const RenewalEdgeParams& r, std::uint64_t i) {
    if (i < 1) throw std::invalid_argument("gap index must be >= 1");
    double survival = 1.0;
    for (std::uint64_t j = 1; j < i; ++j) survival *= 1.0 - r.hazard(j);
    return r.hazard(i) * survival;
}

// mu = sum_{k>=1} survival(k), survival(k) = prod_{j<k} (1 - h(j)). The
// geometric envelope survival(k) <= alpha^{k-1} bounds the truncated tail.
inline double renewal_mean(const RenewalEdgeParams& r, double tol) {
    const double alpha = r.minorization_alpha();
    double mu = 0.0;
    double survival = 1.0;
    double envelope = 1.0;  // alpha^{k-1} at loop entry
    for (std::uint64_t k = 1; k <= r.truncation_horizon(); ++k) {
        mu += survival;
        envelope *= alpha;
        // tail sum_{j>k} survival(j) <= alpha^k / (1 - alpha)
        if (envelope / (1.0 - alpha) < tol) return mu;
        survival *= 1.0 - r.hazard(k);
        if (survival == 0.0) return mu;
    }
    throw std::domain_error("nonconvergent mean");
}

inline std::optional<double> RenewalEdgeParams::try_mean(double tol) const {
    const double alpha = alpha_;
    double mu = 0.0;
    double survival = 1.0;
    double envelope = 1.0;
    for (std::uint64_t k = 1; k <= horizon_; ++k) {
        mu += survival;
        envelope *= alpha;
        if (envelope / (1.0 - alpha) < tol) return mu;
        survival *= 1.0 - hazard(k);
        if (survival == 0.0) return mu;
    }
    return std::nullopt;
}

// Delay to the first renewal of the time-stationary process:
// P(t) = survival(t+1) / mu for t >= 0. Inverse CDF on a single uniform.
inline std::uint64_t stationary_delay_sample(const RenewalEdgeParams& r, double u) {
    const double target = u * r.mean_gap();
    double acc = 0.0;
    double survival = 1.0;  // survival(t + 1) at t = 0
    for (std::uint64_t t = 0;; ++t) {
        acc += survival;
        if (acc > target) return t;
        if (t + 1 >= r.truncation_horizon()) return r.truncation_horizon();
        survival *= 1.0 - r.hazard(t + 1);
        if (survival == 0.0) return t;  // CDF saturated
    }
}

struct RenewalStep {
    std::uint8_t bit = 0;   // 0 = renewal happened (edge absent)
    std::uint32_t age = 1;  // candidate gap length for the next step
};

// age is the candidate gap length being tested. Small u renews, so the
// minorization event u <= 1 - alpha <= h(age) forces a renewal at any age;
// the coupling-from-the-past coalescence rule depends on that orientation.
inline RenewalStep step_renewal(std::uint32_t age, const RenewalEdgeParams& r, double u) {
    if (u < r.hazard(age)) return {0, 1};
    return {1, age + 1};
}

// Sufficient statistic for one edge process; Markov edges use `bit`, renewal
// edges use both, i.i.d. edges are stateless.
struct EdgeState {
    std::uint8_t bit = 0;
    std::uint32_t age = 1;
};

}  // namespace gossipdyn
