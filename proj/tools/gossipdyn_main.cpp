// gossipdyn command-line front end.
//
// Subcommands:
//   simulate      one trial, prints the informed-count trajectory
//   sweep         Monte Carlo completion-time sweep over an n grid
//   compare       dependent dynamics vs i.i.d. ER(pi1) baseline
//   separation    separation distances and bound chain as CSV
//   sst-validate  statistical checks for the strong-stationary-time machinery
//   cftp-validate statistical checks for the perfect sampler (JSON report)
//
// Exit codes: 0 success, 1 configuration error, 2 runtime error,
// 3 a validation subcommand failed a statistical check.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "gossipdyn/gossipdyn.hpp"

namespace {

using namespace gossipdyn;

struct FamilyOptions {
    std::string dynamics = "markov";
    std::string family = "pq";
    double p = 0.5, q = 0.5;
    double a = 1.0, k = 2.0;
    double pi1_limit = 0.0, pi1_coef = 0.0, pi1_exp = 0.0;
    double delta_limit = 0.0, delta_coef = 0.0, delta_exp = 0.0;
    double f_limit = 0.0, f_coef = 0.0, f_exp = 0.0;
    double g_limit = 0.0, g_coef = 0.0, g_exp = 0.0;
    double M = 1.0, alpha_family = 1.0;
    double lambda = 1.0;
    double hazard = 0.5;
};

ParamFamily build_family(const FamilyOptions& fo) {
    if (fo.dynamics == "iid") {
        if (fo.family == "p" || fo.family == "pq") return IidFamily{PowerLaw::constant(fo.p)};
        if (fo.family == "powerlaw") return IidFamily{{fo.pi1_limit, fo.pi1_coef, fo.pi1_exp}};
        throw std::invalid_argument("unknown iid family: " + fo.family);
    }
    if (fo.dynamics == "markov") {
        if (fo.family == "pq") return MarkovPqFamily{fo.p, fo.q};
        if (fo.family == "pi1") {
            return MarkovPi1Family{{fo.pi1_limit, fo.pi1_coef, fo.pi1_exp},
                                   {fo.delta_limit, fo.delta_coef, fo.delta_exp}};
        }
        if (fo.family == "theorem1") {
            return MarkovTheorem1Family{{fo.f_limit, fo.f_coef, fo.f_exp},
                                        {fo.g_limit, fo.g_coef, fo.g_exp},
                                        fo.M,
                                        fo.alpha_family};
        }
        if (fo.family == "special") return MarkovSpecialFamily{fo.a, fo.k};
        throw std::invalid_argument("unknown markov family: " + fo.family);
    }
    if (fo.dynamics == "renewal") {
        if (fo.family == "const") {
            return RenewalConstFamily{fo.lambda, {fo.g_limit, fo.g_coef, fo.g_exp}};
        }
        if (fo.family == "const-hazard") {
            // fixed hazard h, alpha = 1 - h, independent of n
            return RenewalConstFamily{0.0, PowerLaw::constant(1.0 - fo.hazard)};
        }
        if (fo.family == "example") return RenewalExampleFamily{fo.lambda};
        throw std::invalid_argument("unknown renewal family: " + fo.family);
    }
    throw std::invalid_argument("unknown dynamics: " + fo.dynamics);
}

struct OutputOptions {
    std::string out;
    std::string format = "csv";
};

int write_report(const OutputOptions& oo, const std::string& csv, const nlohmann::json& json) {
    std::string payload;
    if (oo.format == "csv") {
        payload = csv;
    } else if (oo.format == "json") {
        payload = json.dump(2) + "\n";
    } else {
        throw std::invalid_argument("unknown format: " + oo.format);
    }
    if (oo.out.empty()) {
        std::cout << payload;
        return 0;
    }
    std::ofstream os(oo.out, std::ios::binary);
    if (!os) throw std::runtime_error("cannot open output file: " + oo.out);
    os << payload;
    return 0;
}

std::vector<std::uint32_t> parse_grid(const std::string& grid) {
    std::vector<std::uint32_t> out;
    std::stringstream ss(grid);
    std::string item;
    while (std::getline(ss, item, ',')) {
        if (item.empty()) continue;
        out.push_back(static_cast<std::uint32_t>(std::stoul(item)));
    }
    if (out.empty()) throw std::invalid_argument("empty n grid");
    return out;
}

struct CheckPrinter {
    bool all_ok = true;

    void operator()(const std::string& name, bool ok, const std::string& detail = "") {
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << name;
        if (!detail.empty()) std::cout << " (" << detail << ")";
        std::cout << '\n';
        all_ok = all_ok && ok;
    }
};

int run_sst_validate(std::uint32_t n, double p, double q, std::uint64_t seed,
                     std::size_t sut_samples, std::uint64_t steps, std::size_t times) {
    const MarkovEdgeParams params{p, q};
    const std::uint64_t edges = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    CheckPrinter check;

    // strong-uniform-time law vs the exact separation profile
    SeparationProfile profile(params, edges);
    if (std::fabs(profile.delta()) < 1.0) {
        rng::SplitMix64 gen(rng::derive(seed, 0x511));
        std::vector<std::uint64_t> survival_counts(64, 0);
        for (std::size_t i = 0; i < sut_samples; ++i) {
            const std::uint64_t t = sample_strong_uniform_time(profile, gen);
            for (std::uint64_t k = 0; k < survival_counts.size(); ++k) {
                if (t > k) ++survival_counts[k];
            }
        }
        double worst = 0.0;
        for (std::uint64_t k = 0; k < survival_counts.size(); ++k) {
            const double emp =
                static_cast<double>(survival_counts[k]) / static_cast<double>(sut_samples);
            worst = std::max(worst, std::fabs(emp - profile.separation(k)));
        }
        const double band = stats::dkw_band(sut_samples, 2e-9);  // DKW at eps = 0.01 scale
        check("strong uniform time survival within DKW band", worst <= std::max(0.01, band),
              "sup deviation " + format_g6(worst));
    } else {
        check("strong uniform time defined (|delta| < 1)", false, "periodic chain");
    }

    // refresh coupling: per-edge transition law
    DynamicGraphState state({n, params}, rng::derive(seed, 0x512));
    const auto rec = refresh_coupling_run(state, times, steps);
    bool chi_ok = true;
    double min_p = 1.0;
    if (rec.step_width == 1) {
        for (const auto& counts : rec.transition_counts) {
            const double n0 = static_cast<double>(counts[0] + counts[1]);
            const double n1 = static_cast<double>(counts[2] + counts[3]);
            if (n0 < 100 || n1 < 100) continue;
            const std::vector<double> observed = {
                static_cast<double>(counts[0]), static_cast<double>(counts[1]),
                static_cast<double>(counts[2]), static_cast<double>(counts[3])};
            const std::vector<double> expected = {n0 * (1.0 - params.p), n0 * params.p,
                                                  n1 * params.q, n1 * (1.0 - params.q)};
            const double pv = stats::chi2_sf(stats::chi2_statistic(observed, expected), 2.0);
            min_p = std::min(min_p, pv);
            chi_ok = chi_ok && pv > 1e-4;
        }
        check("refresh coupling preserves the transition law", chi_ok,
              "min chi-square p " + format_g6(min_p));
    }

    // snapshots at stationary times: marginal + lag-1 independence
    const double lambda1 = markov_stationary(params).lambda1;
    double present = 0.0;
    std::vector<double> series;
    for (std::size_t i = 1; i < rec.snapshots.size(); ++i) {
        present += static_cast<double>(rec.snapshots[i].edge_count());
        series.push_back(static_cast<double>(rec.snapshots[i].edge_count()));
    }
    const double pool = static_cast<double>(series.size()) * static_cast<double>(edges);
    const double freq = present / pool;
    check("stationary-time snapshots have marginal lambda1",
          std::fabs(freq - lambda1) < 4.0 * stats::binomial_sigma(lambda1, pool),
          "freq " + format_g6(freq) + " vs " + format_g6(lambda1));
    const double corr = stats::lag1_autocorr(series);
    check("stationary-time snapshots decorrelate (lag-1)",
          std::fabs(corr) < 4.0 / std::sqrt(static_cast<double>(series.size() - 1)),
          "corr " + format_g6(corr));

    // spacing exchangeability
    std::vector<double> spacings;
    for (std::size_t i = 1; i < rec.times.size(); ++i) {
        spacings.push_back(static_cast<double>(rec.times[i] - rec.times[i - 1]));
    }
    if (spacings.size() >= 16) {
        const double pv = stats::permutation_pvalue_lag1(spacings, 2000, rng::derive(seed, 3));
        check("stationary-time spacings exchangeable", pv > 1e-3, "perm p " + format_g6(pv));
    }

    return check.all_ok ? 0 : 3;
}

int run_cftp_validate(std::uint32_t n, const std::string& hazard_kind, double hazard,
                      double scale, std::size_t samples, std::uint64_t seed,
                      const std::string& out) {
    const RenewalEdgeParams params = hazard_kind == "example"
                                         ? RenewalEdgeParams::example_hazard(scale)
                                         : RenewalEdgeParams::constant(hazard);
    const nlohmann::json rep = cftp_validation_report(params, n, samples, seed);
    CheckPrinter check;
    const double z = rep["ks_statistics"]["marginal_z"].get<double>();
    check("perfect-sample marginal within 4 sigma of pi1", std::fabs(z) < 4.0,
          "z " + format_g6(z));
    check("spacing law matches the geometric tail",
          rep["ks_statistics"]["spacing_pass"].get<bool>(),
          "ks " + format_g6(rep["ks_statistics"]["spacing_ks"].get<double>()));

    // past independence spot check
    bool past_ok = true;
    rng::SplitMix64 gen(rng::derive(seed, 0xa8e));
    const std::uint64_t m = static_cast<std::uint64_t>(n) * (n - 1) / 2;
    for (std::uint64_t s = 0; s < 64 && past_ok; ++s) {
        const std::uint64_t sample_seed = rng::derive(seed, 0xc0de, s);
        const UniformWindow window{sample_seed};
        const CftpResult res = perfect_sample(params, n, sample_seed);
        std::vector<std::uint32_t> ages(m);
        for (auto& a : ages) a = 1 + static_cast<std::uint32_t>(gen.below(64));
        const GraphSnapshot replay = replay_from_ages(
            params, n, window, -static_cast<std::int64_t>(res.theta0) - 1, ages, 0);
        past_ok = replay == res.sample;
    }
    check("time-0 sample independent of the pre-coalescence past", past_ok);

    if (!out.empty()) {
        std::ofstream os(out, std::ios::binary);
        if (!os) throw std::runtime_error("cannot open output file: " + out);
        os << rep.dump(2) << '\n';
    } else {
        std::cout << rep.dump(2) << '\n';
    }
    return check.all_ok ? 0 : 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"rumor spreading on dynamic random graphs"};
    app.require_subcommand(1);

    FamilyOptions fo;
    OutputOptions oo;
    std::string n_grid = "64";
    std::uint32_t n_single = 64;
    std::uint32_t trials = 100;
    std::uint64_t seed = 1;
    std::uint32_t cap = 0;
    std::string protocol = "push";
    std::string rate = "log";
    double rate_k = 1.0;
    std::string config_path;

    auto add_common = [&](CLI::App* cmd, bool wants_grid) {
        cmd->add_option("--seed", seed, "RNG seed");
        cmd->add_option("--config", config_path, "JSON config file (flags override)");
        cmd->add_option("--dynamics", fo.dynamics, "iid|markov|renewal");
        cmd->add_option("--family", fo.family,
                        "pq|pi1|theorem1|special|p|powerlaw|const|const-hazard|example");
        cmd->add_option("--p", fo.p);
        cmd->add_option("--q", fo.q);
        cmd->add_option("--a", fo.a);
        cmd->add_option("--k", fo.k);
        cmd->add_option("--pi1-limit", fo.pi1_limit);
        cmd->add_option("--pi1-coef", fo.pi1_coef);
        cmd->add_option("--pi1-exp", fo.pi1_exp);
        cmd->add_option("--delta-limit", fo.delta_limit);
        cmd->add_option("--delta-coef", fo.delta_coef);
        cmd->add_option("--delta-exp", fo.delta_exp);
        cmd->add_option("--f-limit", fo.f_limit);
        cmd->add_option("--f-coef", fo.f_coef);
        cmd->add_option("--f-exp", fo.f_exp);
        cmd->add_option("--g-limit", fo.g_limit);
        cmd->add_option("--g-coef", fo.g_coef);
        cmd->add_option("--g-exp", fo.g_exp);
        cmd->add_option("--M", fo.M);
        cmd->add_option("--alpha-family", fo.alpha_family);
        cmd->add_option("--lambda", fo.lambda);
        cmd->add_option("--hazard", fo.hazard);
        if (wants_grid) cmd->add_option("--n-grid", n_grid, "comma-separated n values");
        cmd->add_option("--n", n_single, "single n");
        cmd->add_option("--out", oo.out, "output file (default stdout)");
        cmd->add_option("--format", oo.format, "csv|json");
    };

    CLI::App* sim = app.add_subcommand("simulate", "run one trial and print the trajectory");
    add_common(sim, false);
    sim->add_option("--protocol", protocol);
    sim->add_option("--cap", cap);
    std::uint32_t source = 0;
    sim->add_option("--source", source, "source vertex (default 0)");

    CLI::App* sweep = app.add_subcommand("sweep", "completion-time sweep over an n grid");
    add_common(sweep, true);
    sweep->add_option("--protocol", protocol);
    sweep->add_option("--trials", trials);
    sweep->add_option("--cap", cap);
    sweep->add_option("--rate", rate, "log|flood|push|special-push");
    sweep->add_option("--rate-k", rate_k, "k for the special-push rate");

    CLI::App* compare = app.add_subcommand("compare", "dependent vs iid baseline");
    add_common(compare, true);
    compare->add_option("--protocol", protocol);
    compare->add_option("--trials", trials);
    compare->add_option("--cap", cap);
    compare->add_option("--rate", rate);
    compare->add_option("--rate-k", rate_k);

    CLI::App* separation = app.add_subcommand("separation", "separation distances and bounds");
    add_common(separation, true);
    std::uint64_t k_min = 1, k_max = 64;
    double ubs_t = 0.0, ubs_l = 0.0;
    separation->add_option("--k-min", k_min);
    separation->add_option("--k-max", k_max);
    separation->add_option("--t", ubs_t, "outer-bound exponent (0: search)");
    separation->add_option("--l", ubs_l, "outer-bound offset (0: search)");

    CLI::App* sstv = app.add_subcommand("sst-validate", "strong-stationary-time checks");
    add_common(sstv, false);
    std::size_t sut_samples = 100000;
    std::uint64_t sst_steps = 1000000;
    std::size_t sst_times = 200;
    sstv->add_option("--sut-samples", sut_samples);
    sstv->add_option("--steps", sst_steps);
    sstv->add_option("--times", sst_times);

    CLI::App* cftpv = app.add_subcommand("cftp-validate", "perfect-sampler checks");
    add_common(cftpv, false);
    std::size_t cftp_samples = 10000;
    double cftp_scale = 10.0;
    std::string cftp_hazard_kind = "const";
    cftpv->add_option("--hazard-kind", cftp_hazard_kind, "const|example");
    cftpv->add_option("--scale", cftp_scale, "scale for the example hazard");
    cftpv->add_option("--samples", cftp_samples);

    // a config file, when present, seeds the defaults before CLI parsing
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::string(argv[i]) == "--config") {
            std::ifstream is(argv[i + 1]);
            if (!is) {
                std::cerr << "error: cannot read config file " << argv[i + 1] << '\n';
                return 1;
            }
            try {
                nlohmann::json cfg = nlohmann::json::parse(is);
                auto get = [&cfg](const char* key, auto& target) {
                    if (cfg.contains(key)) target = cfg[key].get<std::decay_t<decltype(target)>>();
                };
                get("dynamics", fo.dynamics);
                get("family", fo.family);
                get("p", fo.p);
                get("q", fo.q);
                get("a", fo.a);
                get("k", fo.k);
                get("lambda", fo.lambda);
                get("hazard", fo.hazard);
                get("protocol", protocol);
                get("trials", trials);
                get("seed", seed);
                get("cap", cap);
                get("rate", rate);
                get("n", n_single);
                get("n_grid", n_grid);
                get("out", oo.out);
                get("format", oo.format);
            } catch (const std::exception& e) {
                std::cerr << "error: bad config file: " << e.what() << '\n';
                return 1;
            }
        }
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);  // --help
        app.exit(e);
        return 1;
    }

    try {
        if (sim->parsed()) {
            const ParamFamily family = build_family(fo);
            const auto spec = family_spec(family, n_single);
            DynamicGraphState state(spec, seed);
            const double pi1 = spec.stationary_presence();
            SweepConfig defaults;
            defaults.rate = RateFamily::parse(rate, rate_k);
            defaults.cap = cap;
            const std::uint32_t run_cap = n_single == 1 ? 1 : defaults.cap_for(n_single, pi1);
            const RunResult res = run(state, parse_protocol(protocol), source, run_cap);
            std::ostringstream csv;
            csv << "round,informed\n";
            for (std::size_t r = 0; r < res.trajectory.size(); ++r) {
                csv << r << ',' << res.trajectory[r] << '\n';
            }
            nlohmann::json js = {{"trajectory", res.trajectory},
                                 {"censored", res.censored()},
                                 {"cap", res.cap},
                                 {"seed", res.seed}};
            if (res.completion) js["completion"] = *res.completion;
            csv << "completion," << (res.censored() ? "censored" : std::to_string(*res.completion))
                << '\n';
            return write_report(oo, csv.str(), js);
        }
        if (sweep->parsed()) {
            SweepConfig cfg;
            cfg.family = build_family(fo);
            cfg.protocol = parse_protocol(protocol);
            cfg.n_grid = parse_grid(n_grid);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.cap = cap;
            cfg.rate = RateFamily::parse(rate, rate_k);
            const SweepReport rep = run_sweep(cfg);
            std::ostringstream csv;
            rep.write_csv(csv);
            return write_report(oo, csv.str(), rep.to_json());
        }
        if (compare->parsed()) {
            SweepConfig cfg;
            cfg.family = build_family(fo);
            cfg.protocol = parse_protocol(protocol);
            cfg.n_grid = parse_grid(n_grid);
            cfg.trials = trials;
            cfg.seed = seed;
            cfg.cap = cap;
            cfg.rate = RateFamily::parse(rate, rate_k);
            const CompareReport rep = dependent_vs_iid(cfg);
            std::ostringstream csv;
            rep.write_csv(csv);
            return write_report(oo, csv.str(), rep.to_json());
        }
        if (separation->parsed()) {
            const ParamFamily family = build_family(fo);
            const auto grid = parse_grid(n_grid);
            std::vector<std::uint64_t> ks;
            if (k_min < 1 || k_max < k_min) throw std::invalid_argument("bad k range");
            for (std::uint64_t k = k_min; k <= k_max; ++k) ks.push_back(k);
            double t = ubs_t, l = ubs_l;
            if (t <= 0.0 || l <= 0.0) {
                const auto found =
                    ubs_search(fo.M, fo.alpha_family, grid, std::max<std::uint64_t>(k_min, 4),
                               k_max);
                if (found) {
                    t = found->first;
                    l = found->second;
                } else {
                    t = 1.0;
                    l = 2.0;
                }
            }
            const BoundReport rep = bound_report(family, grid, ks, fo.M, fo.alpha_family, t, l);
            std::ostringstream csv;
            rep.write_csv(csv);
            nlohmann::json js = {{"schema", "separation"}, {"t", t}, {"l", l}};
            return write_report(oo, csv.str(), js);
        }
        if (sstv->parsed()) {
            return run_sst_validate(n_single, fo.p, fo.q, seed, sut_samples, sst_steps,
                                    sst_times);
        }
        if (cftpv->parsed()) {
            return run_cftp_validate(n_single, cftp_hazard_kind, fo.hazard, cftp_scale,
                                     cftp_samples, seed, oo.out);
        }
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
