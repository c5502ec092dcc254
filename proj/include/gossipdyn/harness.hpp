#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <optional>
#include <ostream>
#include <span>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "json.hpp"

#include "gossipdyn/dynamic_graph.hpp"
#include "gossipdyn/markov_sst.hpp"
#include "gossipdyn/parallel.hpp"
#include "gossipdyn/protocols.hpp"
#include "gossipdyn/renewal_cftp.hpp"
#include "gossipdyn/rng.hpp"
#include "gossipdyn/stats.hpp"

namespace gossipdyn {

// limit + coef / n^exponent; covers the constant and power-law knobs the
// parameter families need.
struct PowerLaw {
    double limit = 0.0;
    double coef = 0.0;
    double exponent = 0.0;

    double operator()(double n) const { return limit + coef / std::pow(n, exponent); }

    static PowerLaw constant(double c) { return {c, 0.0, 0.0}; }
};

// ---- Parameter families (per-n dynamics specs) ----

struct IidFamily {
    PowerLaw p;
};

struct MarkovPqFamily {
    double p = 0.0;
    double q = 0.0;
};

// Markov chain pinned by its stationary presence pi1(n) and eigenvalue
// delta(n): p = (1-delta) pi1, q = (1-delta)(1-pi1).
struct MarkovPi1Family {
    PowerLaw pi1;
    PowerLaw delta;
};

// p = f(n), q = 1 - g(n); hypothesis |g - f| <= M / n^alpha.
struct MarkovTheorem1Family {
    PowerLaw f;
    PowerLaw g;
    double M = 1.0;
    double alpha = 1.0;
};

// p = a / n^k, q = 1.
struct MarkovSpecialFamily {
    double a = 1.0;
    double k = 2.0;
};

// Constant hazard 1 - g(n)/n^lambda, i.e. per-edge alpha_n = g(n)/n^lambda.
struct RenewalConstFamily {
    double lambda = 1.0;
    PowerLaw g = PowerLaw::constant(1.0);
};

// The worked hazard h(i) = 1 - ((i+2)/(i+1)) / n^lambda.
struct RenewalExampleFamily {
    double lambda = 1.0;
};

using ParamFamily = std::variant<IidFamily, MarkovPqFamily, MarkovPi1Family,
                                 MarkovTheorem1Family, MarkovSpecialFamily, RenewalConstFamily,
                                 RenewalExampleFamily>;

inline EdgeProcessSpec family_spec(const ParamFamily& family, std::uint32_t n) {
    const double dn = static_cast<double>(n);
    EdgeProcessSpec spec;
    spec.n = n;
    if (const auto* f = std::get_if<IidFamily>(&family)) {
        spec.params = IidEdgeParams{f->p(dn)};
    } else if (const auto* f = std::get_if<MarkovPqFamily>(&family)) {
        spec.params = MarkovEdgeParams{f->p, f->q};
    } else if (const auto* f = std::get_if<MarkovPi1Family>(&family)) {
        const double pi1 = f->pi1(dn);
        const double delta = f->delta(dn);
        spec.params = MarkovEdgeParams{(1.0 - delta) * pi1, (1.0 - delta) * (1.0 - pi1)};
    } else if (const auto* f = std::get_if<MarkovTheorem1Family>(&family)) {
        spec.params = MarkovEdgeParams{f->f(dn), 1.0 - f->g(dn)};
    } else if (const auto* f = std::get_if<MarkovSpecialFamily>(&family)) {
        spec.params = MarkovEdgeParams{f->a / std::pow(dn, f->k), 1.0};
    } else if (const auto* f = std::get_if<RenewalConstFamily>(&family)) {
        const double alpha = f->g(dn) / std::pow(dn, f->lambda);
        if (!(alpha > 0.0 && alpha < 1.0)) {
            throw std::invalid_argument("renewal family alpha out of (0, 1)");
        }
        spec.params = RenewalEdgeParams::constant(1.0 - alpha);
    } else {
        const auto& ex = std::get<RenewalExampleFamily>(family);
        spec.params = RenewalEdgeParams::example_hazard(std::pow(dn, ex.lambda));
    }
    spec.validate();
    return spec;
}

inline double family_pi1(const ParamFamily& family, std::uint32_t n) {
    return family_spec(family, n).stationary_presence();
}

inline const char* family_dynamics(const ParamFamily& family) {
    if (std::holds_alternative<IidFamily>(family)) return "iid";
    if (std::holds_alternative<RenewalConstFamily>(family) ||
        std::holds_alternative<RenewalExampleFamily>(family)) {
        return "renewal";
    }
    return "markov";
}

// |g(n) - f(n)| <= M / n^alpha, per n.
inline bool theorem1_hypothesis_ok(const MarkovTheorem1Family& f, std::uint32_t n) {
    const double dn = static_cast<double>(n);
    return std::fabs(f.g(dn) - f.f(dn)) <= f.M / std::pow(dn, f.alpha) + 1e-15;
}

// ---- Completion-time rate families ----

struct RateFamily {
    enum class Kind { Log, Flood, Push, SpecialPush };

    Kind kind = Kind::Log;
    double k_exp = 1.0;  // SpecialPush: r(n) = n^{k-1} log n

    double value(std::uint32_t n, double pi1) const {
        const double dn = static_cast<double>(n);
        const double ln = std::log(dn);
        switch (kind) {
            case Kind::Log: return ln;
            case Kind::Flood: return ln / std::log1p(dn * pi1);
            case Kind::Push: return ln / std::min(1.0, dn * pi1);
            case Kind::SpecialPush: return std::pow(dn, k_exp - 1.0) * ln;
        }
        throw std::logic_error("unreachable");
    }

    static RateFamily parse(const std::string& s, double k_exp = 1.0) {
        if (s == "log") return {Kind::Log, k_exp};
        if (s == "flood") return {Kind::Flood, k_exp};
        if (s == "push") return {Kind::Push, k_exp};
        if (s == "special-push") return {Kind::SpecialPush, k_exp};
        throw std::invalid_argument("unknown rate family: " + s);
    }

    const char* name() const {
        switch (kind) {
            case Kind::Log: return "log";
            case Kind::Flood: return "flood";
            case Kind::Push: return "push";
            case Kind::SpecialPush: return "special-push";
        }
        return "?";
    }
};

// ---- Sweep configuration and reports ----

struct SweepConfig {
    ParamFamily family = MarkovPqFamily{0.5, 0.5};
    Protocol protocol = Protocol::Push;
    std::vector<std::uint32_t> n_grid;
    std::uint32_t trials = 100;
    std::uint64_t seed = 1;
    std::uint32_t cap = 0;  // 0: max(1000, 50 r(n))
    RateFamily rate;

    std::uint32_t cap_for(std::uint32_t n, double pi1) const {
        if (cap != 0) return cap;
        const double r = rate.value(n, pi1);
        return static_cast<std::uint32_t>(std::max(1000.0, std::ceil(50.0 * r)));
    }
};

inline std::string format_g6(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", x);
    return buf;
}

struct SweepRow {
    std::uint32_t n = 0;
    Protocol protocol = Protocol::Push;
    std::string dynamics;
    std::uint32_t trials = 0;
    double p10 = 0.0, p50 = 0.0, p90 = 0.0;
    std::uint32_t censored = 0;
    double rate = 0.0;
    double ratio = 0.0;  // p50 / rate
    std::uint64_t seed = 0;
};

struct SweepReport {
    std::vector<SweepRow> rows;

    static constexpr const char* kCsvHeader =
        "n,protocol,dynamics,trials,p10,p50,p90,censored,rate,ratio,seed";

    void write_csv(std::ostream& os) const {
        os << kCsvHeader << '\n';
        for (const auto& r : rows) {
            os << r.n << ',' << protocol_name(r.protocol) << ',' << r.dynamics << ','
               << r.trials << ',' << format_g6(r.p10) << ',' << format_g6(r.p50) << ','
               << format_g6(r.p90) << ',' << r.censored << ',' << format_g6(r.rate) << ','
               << format_g6(r.ratio) << ',' << r.seed << '\n';
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json rows_json = nlohmann::json::array();
        for (const auto& r : rows) {
            rows_json.push_back({{"n", r.n},
                                 {"protocol", protocol_name(r.protocol)},
                                 {"dynamics", r.dynamics},
                                 {"trials", r.trials},
                                 {"p10", r.p10},
                                 {"p50", r.p50},
                                 {"p90", r.p90},
                                 {"censored", r.censored},
                                 {"rate", r.rate},
                                 {"ratio", r.ratio},
                                 {"seed", r.seed}});
        }
        return {{"schema", "sweep"}, {"rows", rows_json}};
    }
};

// Fail fast before any trial: family constants valid on the whole grid, rates
// positive and finite, Theorem-1 hypothesis per n for that family.
inline void validate_sweep_config(const SweepConfig& config) {
    if (config.n_grid.empty()) throw std::invalid_argument("empty n grid");
    if (config.trials < 1) throw std::invalid_argument("trials must be >= 1");
    for (std::uint32_t n : config.n_grid) {
        if (n < 1) throw std::invalid_argument("n must be >= 1");
        const auto spec = family_spec(config.family, n);  // validates constants
        const double pi1 = spec.stationary_presence();
        const double r = config.rate.value(n, pi1);
        if (n >= 2 && !(r > 0.0 && std::isfinite(r))) {
            throw std::invalid_argument("rate family not positive/finite at n = " +
                                        std::to_string(n));
        }
        if (const auto* t1 = std::get_if<MarkovTheorem1Family>(&config.family)) {
            if (!theorem1_hypothesis_ok(*t1, n)) {
                throw std::invalid_argument("|g(n) - f(n)| > M/n^alpha at n = " +
                                            std::to_string(n));
            }
        }
    }
}

namespace detail {

// One protocol trial on a fresh stationary state; trial streams are keyed by
// (seed, n, trial index), so assembly order never matters.
inline RunResult sweep_trial(const EdgeProcessSpec& spec, Protocol protocol, std::uint64_t seed,
                             std::uint32_t n, std::uint32_t trial, std::uint32_t cap) {
    const std::uint64_t trial_seed = rng::derive(rng::derive(seed, rng::kTrial, n), trial);
    DynamicGraphState state(spec, trial_seed);
    rng::SplitMix64 src(rng::derive(trial_seed, rng::kSource));
    const auto source = static_cast<std::uint32_t>(src.below(n));
    return run(state, protocol, source, cap);
}

inline SweepRow summarize(std::uint32_t n, Protocol protocol, const std::string& dynamics,
                          const std::vector<RunResult>& results, double rate,
                          std::uint64_t seed) {
    std::vector<std::uint32_t> rounds;
    rounds.reserve(results.size());
    std::uint32_t censored = 0;
    for (const auto& r : results) {
        rounds.push_back(r.rounds_or_cap());
        if (r.censored()) ++censored;
    }
    const auto q = stats::quantiles_p10_p50_p90(std::move(rounds));
    SweepRow row;
    row.n = n;
    row.protocol = protocol;
    row.dynamics = dynamics;
    row.trials = static_cast<std::uint32_t>(results.size());
    row.p10 = q.p10;
    row.p50 = q.p50;
    row.p90 = q.p90;
    row.censored = censored;
    row.rate = rate;
    row.ratio = rate > 0.0 ? q.p50 / rate : std::numeric_limits<double>::quiet_NaN();
    row.seed = seed;
    return row;
}

}  // namespace detail

inline SweepReport run_sweep(const SweepConfig& config) {
    validate_sweep_config(config);
    SweepReport report;
    for (std::uint32_t n : config.n_grid) {
        const auto spec = family_spec(config.family, n);
        const double pi1 = spec.stationary_presence();
        const std::uint32_t cap = config.cap_for(n, pi1);
        std::vector<RunResult> results(config.trials);
        parallel_for(config.trials, [&](std::size_t i) {
            results[i] = detail::sweep_trial(spec, config.protocol, config.seed, n,
                                             static_cast<std::uint32_t>(i), cap);
        });
        report.rows.push_back(detail::summarize(n, config.protocol, spec.dynamics_name(),
                                                results, config.rate.value(n, pi1),
                                                config.seed));
    }
    return report;
}

// ---- Dependent vs i.i.d. comparison (same protocol, matched pi1) ----

struct CompareRow {
    std::uint32_t n = 0;
    Protocol protocol = Protocol::Push;
    std::string dynamics;
    std::uint32_t trials = 0;
    double p50_dep = 0.0;
    double p50_iid = 0.0;
    double ratio = 0.0;
    std::uint64_t seed = 0;
};

struct CompareReport {
    std::vector<CompareRow> rows;

    static constexpr const char* kCsvHeader =
        "n,protocol,dynamics,trials,p50_dep,p50_iid,ratio,seed";

    void write_csv(std::ostream& os) const {
        os << kCsvHeader << '\n';
        for (const auto& r : rows) {
            os << r.n << ',' << protocol_name(r.protocol) << ',' << r.dynamics << ','
               << r.trials << ',' << format_g6(r.p50_dep) << ',' << format_g6(r.p50_iid) << ','
               << format_g6(r.ratio) << ',' << r.seed << '\n';
        }
    }

    nlohmann::json to_json() const {
        nlohmann::json rows_json = nlohmann::json::array();
        for (const auto& r : rows) {
            rows_json.push_back({{"n", r.n},
                                 {"protocol", protocol_name(r.protocol)},
                                 {"dynamics", r.dynamics},
                                 {"trials", r.trials},
                                 {"p50_dep", r.p50_dep},
                                 {"p50_iid", r.p50_iid},
                                 {"ratio", r.ratio},
                                 {"seed", r.seed}});
        }
        return {{"schema", "compare"}, {"rows", rows_json}};
    }
};

inline CompareReport dependent_vs_iid(const SweepConfig& config) {
    validate_sweep_config(config);
    CompareReport report;
    for (std::uint32_t n : config.n_grid) {
        const double pi1 = family_pi1(config.family, n);
        if (!(pi1 > 0.0)) throw std::invalid_argument("degenerate stationary graph (pi1 = 0)");
        SweepConfig dep = config;
        dep.n_grid = {n};
        SweepConfig iid = dep;
        iid.family = IidFamily{PowerLaw::constant(pi1)};
        const auto dep_report = run_sweep(dep);
        const auto iid_report = run_sweep(iid);
        CompareRow row;
        row.n = n;
        row.protocol = config.protocol;
        row.dynamics = family_dynamics(config.family);
        row.trials = config.trials;
        row.p50_dep = dep_report.rows.front().p50;
        row.p50_iid = iid_report.rows.front().p50;
        row.ratio = row.p50_iid > 0.0 ? row.p50_dep / row.p50_iid
                                      : std::numeric_limits<double>::quiet_NaN();
        row.seed = config.seed;
        report.rows.push_back(row);
    }
    return report;
}

// ---- Flood rate check with the dominance-coupled pair ----

struct CoupledFloodTrial {
    bool containment_ok = true;       // lower edges inside upper edges, every round
    bool informed_ok = true;          // lower informed inside upper informed
    std::uint32_t completion_lower = 0;  // rounds or cap
    std::uint32_t completion_upper = 0;
};

// Flood on a dominance-ordered pair driven by shared uniforms. Containment of
// edge sets and informed sets is asserted each round.
inline CoupledFloodTrial coupled_flood_trial(const MarkovEdgeParams& lower_params,
                                             const MarkovEdgeParams& upper_params,
                                             std::uint32_t n, std::uint32_t source,
                                             std::uint32_t cap, std::uint64_t seed) {
    DynamicGraphState lower({n, lower_params}, seed);
    DynamicGraphState upper({n, upper_params}, seed);
    CoupledFloodTrial out;
    InformedSet inf_lower = InformedSet::single(n, source);
    InformedSet inf_upper = inf_lower;
    std::optional<std::uint32_t> done_lower, done_upper;
    if (n == 1) {
        done_lower = done_upper = 0;
    }
    for (std::uint32_t round = 1; round <= cap && (!done_lower || !done_upper); ++round) {
        auto [lo, hi] = coupled_advance(lower, upper);
        if (!subgraph_of(*lo, *hi)) out.containment_ok = false;
        if (!done_lower) {
            inf_lower = flood_round(*lo, inf_lower);
            if (inf_lower.all()) done_lower = round;
        }
        if (!done_upper) {
            inf_upper = flood_round(*hi, inf_upper);
            if (inf_upper.all()) done_upper = round;
        }
        if (!inf_lower.subset_of(inf_upper)) out.informed_ok = false;
    }
    out.completion_lower = done_lower.value_or(cap);
    out.completion_upper = done_upper.value_or(cap);
    return out;
}

struct FloodCheckReport {
    SweepReport sweep;
    std::uint32_t coupled_trials = 0;
    std::uint32_t containment_violations = 0;
    std::uint32_t order_violations = 0;  // completion(upper) > completion(lower)
};

// p50 / flood-rate table for the family, plus (for the special p = a/n^k,
// q = 1 family) the coupled pair against q = 1 - alpha.
inline FloodCheckReport flood_rate_check(const SweepConfig& config_in, double remark_alpha = 0.0,
                                         std::uint32_t coupled_trials = 0) {
    SweepConfig config = config_in;
    config.protocol = Protocol::Flood;
    config.rate = RateFamily{RateFamily::Kind::Flood};
    FloodCheckReport report;
    report.sweep = run_sweep(config);
    if (remark_alpha > 0.0 && coupled_trials > 0) {
        const auto* special = std::get_if<MarkovSpecialFamily>(&config.family);
        if (!special) {
            throw std::invalid_argument("coupled check needs the special p=a/n^k family");
        }
        for (std::uint32_t n : config.n_grid) {
            const auto lower_spec = family_spec(config.family, n);
            const auto lower_params = std::get<MarkovEdgeParams>(lower_spec.params);
            const MarkovEdgeParams upper_params{lower_params.p, 1.0 - remark_alpha};
            const double pi1_upper = markov_stationary(upper_params).lambda1;
            const std::uint32_t cap = config.cap_for(n, pi1_upper);
            std::vector<CoupledFloodTrial> trials(coupled_trials);
            parallel_for(coupled_trials, [&](std::size_t i) {
                const std::uint64_t trial_seed =
                    rng::derive(rng::derive(config.seed, rng::kTrial, n),
                                static_cast<std::uint64_t>(i));
                rng::SplitMix64 src(rng::derive(trial_seed, rng::kSource));
                trials[i] = coupled_flood_trial(lower_params, upper_params, n,
                                                static_cast<std::uint32_t>(src.below(n)), cap,
                                                trial_seed);
            });
            for (const auto& t : trials) {
                ++report.coupled_trials;
                if (!t.containment_ok || !t.informed_ok) ++report.containment_violations;
                if (t.completion_upper > t.completion_lower) ++report.order_violations;
            }
        }
    }
    return report;
}

// ---- Separation / bound report ----

struct BoundRow {
    std::uint32_t n = 0;
    std::uint64_t k = 0;
    double s_exact = 0.0;
    double edge_env = 0.0;       // rho |Delta|^k
    double product_bound = 0.0;  // 1 - (1 - rho|Delta|^k)^{|E|}
    double ubs_mid = 0.0;
    double ubs_outer = 0.0;
    bool ubs_valid = false;
    double chernoff = 0.0;  // s_ratio = 3, r = log n
};

struct BoundReport {
    std::vector<BoundRow> rows;

    static constexpr const char* kCsvHeader =
        "n,k,s_exact,edge_env,product_bound,ubs_mid,ubs_outer,ubs_valid,chernoff";

    void write_csv(std::ostream& os) const {
        os << kCsvHeader << '\n';
        for (const auto& r : rows) {
            os << r.n << ',' << r.k << ',' << format_g6(r.s_exact) << ','
               << format_g6(r.edge_env) << ',' << format_g6(r.product_bound) << ','
               << format_g6(r.ubs_mid) << ',' << format_g6(r.ubs_outer) << ','
               << (r.ubs_valid ? 1 : 0) << ',' << format_g6(r.chernoff) << '\n';
        }
    }
};

inline BoundReport bound_report(const ParamFamily& family, std::span<const std::uint32_t> n_grid,
                                std::span<const std::uint64_t> k_grid, double M,
                                double alpha_family, double t, double l) {
    BoundReport report;
    for (std::uint32_t n : n_grid) {
        const auto spec = family_spec(family, n);
        const auto* mk = std::get_if<MarkovEdgeParams>(&spec.params);
        if (!mk) throw std::invalid_argument("bound report requires a Markov family");
        SeparationProfile profile(*mk, spec.edge_count());
        for (std::uint64_t k : k_grid) {
            BoundRow row;
            row.n = n;
            row.k = k;
            row.s_exact = profile.separation(k);
            row.edge_env = profile.edge_envelope(k);
            row.product_bound = profile.product_bound(k);
            const auto ub = ubs_bound(n, M, alpha_family, static_cast<double>(k), t, l);
            row.ubs_mid = ub.mid;
            row.ubs_outer = ub.outer;
            row.ubs_valid = ub.valid;
            row.chernoff = chernoff_tail_bound(3.0, std::log(static_cast<double>(n)));
            report.rows.push_back(row);
        }
    }
    return report;
}

}  // namespace gossipdyn
