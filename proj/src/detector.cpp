#include "evtail/detector.hpp"

#include "evtail/errors.hpp"
#include "evtail/estimators.hpp"
#include "top_logs.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>

namespace evtail {

namespace {

void validate(const OrderedSample& s, const DetectorConfig& cfg) {
    const std::size_t n = s.size();
    if (cfg.k < 2 || cfg.k + 2 > n)
        throw config_error("k must lie in [2, n-2]; got k=" + std::to_string(cfg.k) +
                           ", n=" + std::to_string(n));
    if (cfg.k_star < 2 || cfg.k_star + 2 > n)
        throw config_error("k_star must lie in [2, n-2]; got k_star=" +
                           std::to_string(cfg.k_star) + ", n=" + std::to_string(n));
    if (cfg.k0_star + 2 > cfg.k)
        throw config_error("k0_star must be at most k-2; got k0_star=" +
                           std::to_string(cfg.k0_star) + ", k=" + std::to_string(cfg.k));
    if (cfg.k0_star >= cfg.k_star)
        throw config_error("k0_star must be below k_star; got k0_star=" +
                           std::to_string(cfg.k0_star) + ", k_star=" +
                           std::to_string(cfg.k_star));
    if (cfg.max_regimes < 1) throw config_error("max_regimes must be at least 1");
    if (cfg.xi_override && !std::isfinite(*cfg.xi_override))
        throw config_error("tail index override must be finite");
}

double gh_at(const OrderedSample& s, std::size_t k0, std::size_t k_star,
             const char* stage) {
    try {
        return trimmed_generalized_hill(s, k0, k_star);
    } catch (const tie_error& ex) {
        throw tie_error(std::string(stage) + ": " + ex.what());
    } catch (const numeric_error& ex) {
        throw numeric_error(std::string(stage) + ": " + ex.what());
    }
}

struct Scan {
    std::size_t deepest = 0;            // largest firing depth, 0 if none
    std::vector<std::size_t> fired;     // firing depths, ascending
};

// One pass of the sequential test. Depth j tests spacing V_j, so the statistic
// trims j-1 points and is compared against the schedule slot alphas[j]; slot 0
// is reserved for the (never-scanned) depth-0 hypothesis.
Scan run_scan(const detail::TopLogs& tl, const DetectorConfig& cfg,
              const AlphaSchedule& sch, double xi, std::vector<double>* trace) {
    Scan out;
    for (std::size_t j = 1; j <= cfg.k0_star; ++j) {
        double t = detail::t_from_logs(tl, j - 1, cfg.k);
        double e = e_statistic(t, j - 1, cfg.k, xi);
        double u = u_statistic(e);
        if (trace) (*trace)[j - 1] = u;
        if (u > 1.0 - sch.alphas[j]) out.fired.push_back(j);
    }
    if (!out.fired.empty()) out.deepest = out.fired.back();
    return out;
}

} // namespace

std::pair<std::size_t, double> initial_estimates(const OrderedSample& s,
                                                 const DetectorConfig& cfg) {
    validate(s, cfg);
    AlphaSchedule sch = alpha_schedule(cfg.k, cfg.a, cfg.q);
    double xi0 = cfg.xi_override ? *cfg.xi_override
                                 : gh_at(s, cfg.k0_star, cfg.k_star, "initial tail estimate");
    detail::TopLogs tl(s, cfg.k + 1);
    Scan s0 = run_scan(tl, cfg, sch, xi0, nullptr);
    double xi_hat = cfg.xi_override
                        ? *cfg.xi_override
                        : gh_at(s, s0.deepest, cfg.k_star, "revised tail estimate");
    return {s0.deepest, xi_hat};
}

DetectorResult detect(const OrderedSample& s, const DetectorConfig& cfg) {
    validate(s, cfg);
    AlphaSchedule sch = alpha_schedule(cfg.k, cfg.a, cfg.q);

    DetectorResult res;
    res.xi_initial = cfg.xi_override
                         ? *cfg.xi_override
                         : gh_at(s, cfg.k0_star, cfg.k_star, "initial tail estimate");

    detail::TopLogs tl(s, cfg.k + 1);
    Scan s0 = run_scan(tl, cfg, sch, res.xi_initial, nullptr);
    res.k0_stage0 = s0.deepest;

    res.xi_hat = cfg.xi_override
                     ? *cfg.xi_override
                     : gh_at(s, res.k0_stage0, cfg.k_star, "revised tail estimate");

    res.u_trace.assign(cfg.k0_star, 0.0);
    Scan s1 = run_scan(tl, cfg, sch, res.xi_hat, &res.u_trace);
    res.k0_stage1 = s1.deepest;
    res.significant = std::move(s1.fired);

    if (res.k0_stage1 > 0) {
        // Regimes split the flagged block at the firing depths, most extreme
        // first; the last regime absorbs everything beyond the cap.
        const auto& v = res.significant;
        std::size_t shown = std::min<std::size_t>(v.size(), cfg.max_regimes);
        for (std::size_t r = 1; r <= shown; ++r) {
            Regime reg;
            reg.lo = (r == 1) ? 0 : v[r - 2];
            reg.hi = (r < shown) ? v[r - 1] : v.back();
            reg.score = res.u_trace[reg.hi - 1];
            res.regimes.push_back(reg);
        }
    }
    return res;
}

TailAdjustedBoxplot tail_adjusted_boxplot(const OrderedSample& s,
                                          const DetectorConfig& cfg_upper,
                                          const DetectorConfig& cfg_lower,
                                          LowerTransform how) {
    TailAdjustedBoxplot box;
    box.quartiles = quartiles(s);

    // Bad configurations are caller bugs and throw up front; the per-tail
    // isolation below is for runtime trouble (ties, positivity) only.
    validate(s, cfg_upper);
    validate(s, cfg_lower);

    const auto& v = s.values();
    const std::size_t n = v.size();

    try {
        DetectorResult r = detect(s, cfg_upper);
        std::size_t m = r.k0_stage1;
        box.whisker_high = v[n - 1 - m]; // top(m+1), largest value kept inside
        for (std::size_t i = n - m; i < n; ++i) box.upper_outliers.push_back(i);
        box.upper.result = std::move(r);
    } catch (const std::exception& ex) {
        box.whisker_high = v[n - 1];
        box.upper.error = ex.what();
    }

    try {
        OrderedSample flipped = transform_lower(s, how);
        DetectorResult r = detect(flipped, cfg_lower);
        std::size_t m = r.k0_stage1;
        box.whisker_low = v[m]; // depth m+1 of the flipped sample is index m here
        for (std::size_t i = 0; i < m; ++i) box.lower_outliers.push_back(i);
        box.lower.result = std::move(r);
    } catch (const std::exception& ex) {
        box.whisker_low = v[0];
        box.lower.error = ex.what();
    }

    return box;
}

} // namespace evtail
