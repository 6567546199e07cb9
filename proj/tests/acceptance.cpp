// Acceptance gate: runs thirteen end-to-end checks against the built library
// and CLI and prints exactly one line per check,
//   PASS <n> <description> (<details>)
//   FAIL <n> <description> (<details>)
//   SKIP <n> <description> (<reason>)
// The process exit code is the number of FAIL lines. Every tolerance is
// pinned next to the check that uses it. Checks 3-7 and 9 are Monte Carlo
// suites at desk scale; their seeds are fixed so reruns are byte-identical.
//
// Usage: evtail_acceptance --cli <path-to-evtail> [--condroz <csv-path>]

#include "evtail/detector.hpp"
#include "evtail/distributions.hpp"
#include "evtail/errors.hpp"
#include "evtail/estimators.hpp"
#include "evtail/math.hpp"
#include "evtail/outlier_test.hpp"
#include "evtail/sample.hpp"
#include "evtail/study.hpp"

#include "support.hpp"

#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace {

using namespace evtail;

std::string g6(double x) {
    char b[64];
    std::snprintf(b, sizeof b, "%.6g", x);
    return b;
}

double rel_gap(double a, double b) {
    double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

DetectorConfig make_cfg(std::size_t k, std::size_t k_star, std::size_t k0_star,
                        std::optional<double> xi = std::nullopt) {
    DetectorConfig cfg;
    cfg.k = k;
    cfg.k_star = k_star;
    cfg.k0_star = k0_star;
    cfg.xi_override = xi;
    return cfg;
}

// Default scan bound: floor(7 k*^(1/3)), clamped so the scan fits under k.
std::size_t rule_k0(std::size_t k_star, std::size_t k) {
    auto v = static_cast<std::size_t>(std::floor(7.0 * std::cbrt(double(k_star))));
    return std::min(v, k - 2);
}

support::CliResult run_tool(const std::string& cli, const std::string& args) {
    support::CliResult r;
    std::string cmd = cli + " " + args + " 2>&1";
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int status = ::pclose(p);
    r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
    return r;
}

std::size_t count_of(const std::string& hay, const std::string& needle) {
    std::size_t n = 0;
    for (std::size_t at = hay.find(needle); at != std::string::npos;
         at = hay.find(needle, at + needle.size()))
        ++n;
    return n;
}

struct Outcome {
    bool ok = false;
    std::string details;
};

} // namespace

int main(int argc, char** argv) {
    std::string cli, condroz;
    for (int i = 1; i + 1 < argc; ++i) {
        if (std::strcmp(argv[i], "--cli") == 0) cli = argv[i + 1];
        if (std::strcmp(argv[i], "--condroz") == 0) condroz = argv[i + 1];
    }

    int failures = 0;
    auto report = [&](int n, const char* desc, const Outcome& r) {
        std::printf("%s %d %s (%s)\n", r.ok ? "PASS" : "FAIL", n, desc,
                    r.details.c_str());
        if (!r.ok) ++failures;
    };
    auto skip = [](int n, const char* desc, const std::string& why) {
        std::printf("SKIP %d %s (%s)\n", n, desc, why.c_str());
    };
    auto guarded = [&](int n, const char* desc,
                       const std::function<Outcome()>& fn) {
        Outcome r;
        try {
            r = fn();
        } catch (const std::exception& e) {
            r = {false, std::string("raised: ") + e.what()};
        }
        report(n, desc, r);
    };

    // 1. Algebraic identities on random positive samples, 1e-12 relative:
    //    the trimmed Hill window mean, the 1-T spacing ratio, and the
    //    untrimmed reduction of the trimmed generalized Hill estimator.
    guarded(1, "algebraic identities of the trimmed estimators", [&] {
        double worst = 0.0;
        for (int rep = 0; rep < 100; ++rep) {
            std::mt19937_64 g(7000 + rep);
            std::lognormal_distribution<double> ln(0.0, 1.0);
            std::vector<double> v(120);
            for (auto& x : v) x = ln(g);
            OrderedSample s = OrderedSample::ingest(std::move(v), 0.0, 0);
            for (auto [k0, k] : {std::pair<std::size_t, std::size_t>{0, 40},
                                 std::pair<std::size_t, std::size_t>{7, 60}}) {
                LogSpacings vs = log_spacings(s, k + 1);
                double m = 0.0;
                for (std::size_t j = k0 + 1; j <= k; ++j) m += vs.at(j);
                m /= double(k - k0);
                double h = trimmed_hill(s, k0, k);
                worst = std::max(worst, rel_gap(h, m));
                // Asserted at the scale of T: near T = 1 the subtraction
                // 1 - T is exact, so a 1e-12 bound relative to the tiny
                // difference itself would demand sub-ulp accuracy of T.
                worst = std::max(worst,
                                 rel_gap(t_statistic(s, k0, k),
                                         1.0 - vs.at(k0 + 1) / (double(k - k0) * h)));
                worst = std::max(worst, rel_gap(trimmed_generalized_hill(s, 0, k),
                                                generalized_hill(s, k)));
            }
        }
        return Outcome{worst <= 1e-12,
                       "max relative gap " + g6(worst) + " over 100 samples, tolerance 1e-12"};
    });

    // 2. The alpha schedule multiplies back to the overall budget, 1e-10;
    //    k=2 spends the whole budget on one level; levels strictly decrease.
    guarded(2, "alpha schedule multiplies out to the overall budget", [&] {
        double worst = 0.0;
        bool shape_ok = true;
        for (std::size_t k : {std::size_t(2), std::size_t(10), std::size_t(100),
                              std::size_t(1000)}) {
            for (auto [a, q] : {std::pair<double, double>{1.2, 0.05},
                                std::pair<double, double>{2.0, 0.10}}) {
                AlphaSchedule sched = alpha_schedule(k, a, q);
                double prod = 1.0;
                for (std::size_t j = 0; j < sched.alphas.size(); ++j) {
                    double al = sched.alphas[j];
                    prod *= 1.0 - al;
                    if (!(al > 0.0 && al < 1.0)) shape_ok = false;
                    if (j > 0 && !(al < sched.alphas[j - 1])) shape_ok = false;
                }
                worst = std::max(worst, std::abs(prod - (1.0 - q)));
            }
        }
        bool exact2 = alpha_schedule(2, 1.2, 0.05).alphas[0] == 0.05;
        return Outcome{worst <= 1e-10 && shape_ok && exact2,
                       "max |product - (1-q)| = " + g6(worst) +
                           ", tolerance 1e-10; k=2 spends q exactly: " +
                           (exact2 ? "yes" : "no")};
    });

    // 3. Null calibration with the tail index pinned: standard Pareto,
    //    n=1000, k=k*=200, 1000 replications; P(k0 > 0) must sit in
    //    [0.03, 0.07] around the q=0.05 budget.
    guarded(3, "null calibration with known tail index stays near the budget", [&] {
        std::size_t hits = 0, reps = 1000;
        DetectorConfig cfg = make_cfg(200, 200, 40, 1.0);
        for (std::size_t r = 0; r < reps; ++r) {
            std::mt19937_64 g(sub_seed(101, r));
            std::vector<double> v(1000);
            for (auto& x : v) x = 1.0 / support::u01(g);
            OrderedSample s = OrderedSample::ingest(std::move(v), 0.0, 0);
            if (detect(s, cfg).k0_stage1 > 0) ++hits;
        }
        double rate = double(hits) / double(reps);
        return Outcome{rate >= 0.03 && rate <= 0.07,
                       "false-alarm rate " + g6(rate) + " over 1000 reps, bounds [0.03, 0.07]"};
    });

    // 4. Type-1 rate with the tail index estimated: half-t(2), n=1000,
    //    k=k*=400, default scan bound, 500 replications; 0.038 +- 0.025.
    guarded(4, "type-1 rate for half-t with estimated tail index", [&] {
        DetectorConfig cfg = make_cfg(400, 400, rule_k0(400, 400));
        StudyMetrics m = run_study(DistributionSpec::half_t(2), std::nullopt, cfg,
                                   1000, 500, 303, 4);
        bool ok = std::abs(m.type1_rate - 0.038) <= 0.025;
        return Outcome{ok, "rate " + g6(m.type1_rate) + " over 500 reps, target 0.038 +- 0.025, " +
                               std::to_string(m.failures) + " failures"};
    });

    // 5. Sensitivity to the estimation depth: Burr with tail index 0.25,
    //    k=200; the shallow estimate (k*=100) must over-fire the deep one
    //    (k*=300) by at least 0.3.
    guarded(5, "estimation depth drives the type-1 rate ordering", [&] {
        DistributionSpec dist = DistributionSpec::burr(1, 0.5, 8);
        double rate[2];
        std::size_t kstars[2] = {100, 300};
        for (int i = 0; i < 2; ++i) {
            DetectorConfig cfg = make_cfg(200, kstars[i], rule_k0(kstars[i], 200));
            rate[i] = run_study(dist, std::nullopt, cfg, 1000, 500, 404, 4).type1_rate;
        }
        return Outcome{rate[0] - rate[1] >= 0.3,
                       "k*=100 fires at " + g6(rate[0]) + ", k*=300 at " + g6(rate[1]) +
                           ", gap " + g6(rate[0] - rate[1]) + " >= 0.3 required"};
    });

    // 6. Recovery of ten exponentiated outliers (L=10) in half-t(2),
    //    k=k*=400, 500 replications: mean k0 in [7.9, 8.9], sd in [1.4, 2.6].
    guarded(6, "recovery of ten exponentiated outliers in half-t", [&] {
        InjectionSpec inj;
        inj.kind = InjectionKind::Exponentiated;
        inj.k0 = 10;
        inj.intensity = 10.0;
        DetectorConfig cfg = make_cfg(400, 400, rule_k0(400, 400));
        StudyMetrics m = run_study(DistributionSpec::half_t(2), inj, cfg, 1000, 500,
                                   505, 4);
        bool ok = m.mean_k0 >= 7.9 && m.mean_k0 <= 8.9 && m.sd_k0 >= 1.4 &&
                  m.sd_k0 <= 2.6;
        return Outcome{ok, "mean " + g6(m.mean_k0) + " in [7.9, 8.9], sd " + g6(m.sd_k0) +
                               " in [1.4, 2.6]"};
    });

    // 7. Recovery of ten scaled outliers (C=50) in Beta(1,2) with the tail
    //    index pinned at -0.5, k=k*=200, 500 replications: mean in [9.4, 10.4].
    guarded(7, "recovery of ten scaled outliers in beta", [&] {
        InjectionSpec inj;
        inj.kind = InjectionKind::Scaled;
        inj.k0 = 10;
        inj.intensity = 50.0;
        DetectorConfig cfg = make_cfg(200, 200, rule_k0(200, 200), -0.5);
        StudyMetrics m = run_study(DistributionSpec::beta(1, 2), inj, cfg, 1000, 500,
                                   606, 4);
        return Outcome{m.mean_k0 >= 9.4 && m.mean_k0 <= 10.4,
                       "mean " + g6(m.mean_k0) + " in [9.4, 10.4], sd " + g6(m.sd_k0)};
    });

    // 8. Unit-intensity injections are exact no-ops, bit for bit.
    guarded(8, "unit-intensity injections are exact no-ops", [&] {
        std::mt19937_64 g(4242);
        OrderedSample s =
            OrderedSample::ingest(sample_raw(DistributionSpec::half_t(2), 400, g), 0.0, 0);
        InjectionSpec expo{InjectionKind::Exponentiated, 25, 1.0};
        InjectionSpec scal{InjectionKind::Scaled, 25, 1.0};
        bool ok = inject(s, expo).values() == s.values() &&
                  inject(s, scal).values() == s.values();
        return Outcome{ok, ok ? "L=1 and C=1 leave all 400 values bit-identical"
                              : "a unit-intensity injection changed a value"};
    });

    // 9. Under the standard-Pareto null with known index, U at k0=0 passes a
    //    KS uniformity check at level 0.01 (critical 1.628/sqrt(2000)) and
    //    the KS distance of E to the unit exponential stays below 0.05.
    guarded(9, "U is uniform and E is exponential under the null", [&] {
        std::vector<double> us, es;
        for (std::size_t r = 0; r < 2000; ++r) {
            std::mt19937_64 g(sub_seed(707, r));
            std::vector<double> v(1000);
            for (auto& x : v) x = 1.0 / support::u01(g);
            OrderedSample s = OrderedSample::ingest(std::move(v), 0.0, 0);
            TestStatistic ts = evaluate_statistic(s, 0, 200, 1.0);
            us.push_back(ts.u);
            es.push_back(ts.e);
        }
        double du = support::ks_statistic(us, [](double x) {
            return std::min(1.0, std::max(0.0, x));
        });
        double de =
            support::ks_statistic(es, [](double x) { return 1.0 - std::exp(-x); });
        double crit = 1.628 / std::sqrt(2000.0);
        return Outcome{du <= crit && de < 0.05,
                       "KS(U) " + g6(du) + " vs critical " + g6(crit) + "; KS(E) " +
                           g6(de) + " vs 0.05"};
    });

    // 10. Continuity of E across the xi=0 branch: |E(xi=-1e-6) - E(xi=0)|
    //     must stay below 1e-4 over t in [0.5, 0.999] step 0.001,
    //     k in {50, 200}, k0 in {0, 5}; and the clamp case (xi=-0.5, k=100,
    //     k0=0, 1-T=0.01) must return U=1 with the clamped flag set.
    guarded(10, "E statistic is continuous across the xi=0 branch", [&] {
        double worst = 0.0, worst_rel = 0.0, wt = 0.0;
        std::size_t wk = 0, wk0 = 0;
        for (std::size_t k : {std::size_t(50), std::size_t(200)}) {
            for (std::size_t k0 : {std::size_t(0), std::size_t(5)}) {
                for (double t = 0.5; t <= 0.999 + 1e-12; t += 0.001) {
                    double em = e_statistic(t, k0, k, -1e-6);
                    double e0 = e_statistic(t, k0, k, 0.0);
                    double d = std::abs(em - e0);
                    if (d > worst) {
                        worst = d;
                        wt = t;
                        wk = k;
                        wk0 = k0;
                    }
                    if (e0 > 0.0) worst_rel = std::max(worst_rel, d / e0);
                }
            }
        }
        double ec = e_statistic(1.0 - 0.01, 0, 100, -0.5);
        OrderedSample s =
            OrderedSample::ingest({1.0, 1.01, 1.02, 1000.0}, 0.0, 0);
        TestStatistic ts = evaluate_statistic(s, 0, 3, -0.5);
        bool clamp_ok = std::isinf(ec) && u_statistic(ec) == 1.0 && ts.clamped &&
                        ts.u == 1.0;
        bool cont_ok = worst < 1e-4;
        // The absolute gap scales with E itself: near t=0.5, E is about k/2,
        // so the first-order term xi * E * (log(k/(k0+1)) + ...) is ~1e-6 * 100 * 5
        // even though the relative gap stays ~5e-5. An absolute 1e-4 bound is
        // only attainable where E is O(1).
        return Outcome{cont_ok && clamp_ok,
                       "max |E(-1e-6) - E(0)| = " + g6(worst) + " at t=" + g6(wt) +
                           " k=" + std::to_string(wk) + " k0=" + std::to_string(wk0) +
                           ", tolerance 1e-4; max relative gap " + g6(worst_rel) +
                           "; clamp case " + (clamp_ok ? "ok" : "wrong")};
    });

    // 11. Fence exceedance probabilities from the closed-form CDFs, no Monte
    //     Carlo: P(X > q3 + 1.5 iqr) for the normal, unit exponential and
    //     unit Pareto, each within 1e-3 of the quoted 0.0037 / 0.05 / 0.16.
    guarded(11, "classical fence exceedance probabilities match the quoted values", [&] {
        double z75 = normal_quantile(0.75);
        double p_norm = 1.0 - support::normal_cdf(4.0 * z75);
        double fence_exp = std::log(4.0) + 1.5 * (std::log(4.0) - std::log(4.0 / 3.0));
        double p_exp = std::exp(-fence_exp);
        double q1 = 4.0 / 3.0, q3 = 4.0;
        double fence_par = q3 + 1.5 * (q3 - q1);
        double p_par = 1.0 / fence_par;
        bool ok_n = std::abs(p_norm - 0.0037) <= 1e-3;
        bool ok_e = std::abs(p_exp - 0.05) <= 1e-3;
        bool ok_p = std::abs(p_par - 0.16) <= 1e-3;
        return Outcome{ok_n && ok_e && ok_p,
                       "normal " + g6(p_norm) + " vs 0.0037 " + (ok_n ? "ok" : "off") +
                           "; exponential " + g6(p_exp) + " vs 0.05 " +
                           (ok_e ? "ok" : "off") + "; pareto " + g6(p_par) +
                           " vs 0.16 " + (ok_p ? "ok" : "off") + "; tolerance 1e-3 each"};
    });

    // 12. Byte-reproducibility of the CLI: analyze twice with the same seed,
    //     and simulate with 1 versus 4 worker threads.
    if (cli.empty()) {
        skip(12, "analyze and simulate are byte-reproducible", "--cli not given");
    } else {
        guarded(12, "analyze and simulate are byte-reproducible", [&] {
            support::TempDir tmp;
            std::string in = tmp.file("data.csv");
            support::write_file(in, support::csv_of(support::pareto_rows(200, 12)));
            std::string base = "analyze --input " + in +
                               " --column x --k 64 --kstar 64 --seed 42";
            support::CliResult a1 = run_tool(cli, base);
            support::CliResult a2 = run_tool(cli, base);
            std::string sim = "simulate --dist burr --params 1,0.5,4 --n 200 "
                              "--reps 40 --k 20 --seed 3 --threads ";
            support::CliResult s1 = run_tool(cli, sim + "1");
            support::CliResult s4 = run_tool(cli, sim + "4");
            bool ok = a1.exit_code == 0 && a2.exit_code == 0 && a1.out == a2.out &&
                      s1.exit_code == 0 && s4.exit_code == 0 && s1.out == s4.out;
            return Outcome{ok, ok ? "analyze rerun and simulate threads 1 vs 4 byte-identical"
                                  : "outputs differ or a run failed"};
        });
    }

    // 13. Condroz recipe: one regime, scan bound 30, k=k*=85, fixed dither
    //     seed; the upper tail must flag exactly six outliers. Runs only when
    //     the user has dropped the CSV next to the build.
    {
        const char* desc = "condroz recipe flags six upper-tail outliers";
        std::ifstream probe(condroz);
        if (cli.empty()) {
            skip(13, desc, "--cli not given");
        } else if (!condroz.empty() && probe.good()) {
            std::string header;
            std::getline(probe, header);
            if (!header.empty() && header.back() == '\r') header.pop_back();
            std::string column = header.substr(0, header.find(','));
            guarded(13, desc, [&] {
                support::CliResult r =
                    run_tool(cli, "boxplot --input " + condroz + " --column " + column +
                                      " --k 85 --kstar 85 --k0star 30 --regimes 1 "
                                      "--seed 1 --format csv");
                std::size_t found = count_of(r.out, "\nupper_outlier,");
                bool ok = r.exit_code == 0 && found == 6;
                return Outcome{ok, "column '" + column + "', " + std::to_string(found) +
                                       " upper outliers flagged, 6 required, exit " +
                                       std::to_string(r.exit_code)};
            });
        } else {
            skip(13, desc, "no csv at " + (condroz.empty() ? "(unset)" : condroz));
        }
    }

    return failures;
}
