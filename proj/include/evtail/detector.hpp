#pragma once

#include "evtail/outlier_test.hpp"
#include "evtail/sample.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace evtail {

// Tuning knobs of the sequential detector.
//   k        test depth of the scan statistics T_{j-1,k}
//   k_star   estimation depth of the generalized Hill steps
//   k0_star  scan bound: candidate outlier counts are 1..k0_star
//   max_regimes  V, how many distinct outlier groups to report
struct DetectorConfig {
    std::size_t k = 0;
    std::size_t k_star = 0;
    std::size_t k0_star = 0;
    std::size_t max_regimes = 1;
    double a = 1.2;
    double q = 0.05;
    std::optional<double> xi_override; // pin xi instead of estimating it
};

// One contiguous block of flagged order statistics, depths (lo, hi].
// score is the stage-1 U statistic at the hi boundary, a significance
// score in [0,1] (large = strong evidence), not a p-value.
struct Regime {
    std::size_t lo = 0;
    std::size_t hi = 0;
    double score = 0.0;
};

struct DetectorResult {
    double xi_initial = 0.0;               // xi used by the stage-0 scan
    std::size_t k0_stage0 = 0;             // max firing depth under xi_initial
    double xi_hat = 0.0;                   // revised xi after stage 0
    std::size_t k0_stage1 = 0;             // max firing depth under xi_hat
    std::vector<std::size_t> significant;  // all stage-1 firing depths, ascending
    std::vector<Regime> regimes;
    std::vector<double> u_trace;           // stage-1 U at depths 1..k0_star
};

// Stage 0 only: (k0_stage0, xi_hat).
std::pair<std::size_t, double> initial_estimates(const OrderedSample& s,
                                                 const DetectorConfig& cfg);

DetectorResult detect(const OrderedSample& s, const DetectorConfig& cfg);

// Per-tail outcome of the boxplot assembly; errors are isolated so one tail
// can succeed while the other reports what went wrong.
struct TailOutcome {
    std::optional<DetectorResult> result;
    std::string error;
};

struct TailAdjustedBoxplot {
    QuartileSummary quartiles;
    TailOutcome upper;
    TailOutcome lower;            // run on transform_lower(s)
    double whisker_low = 0.0;     // smallest observation in no lower regime
    double whisker_high = 0.0;    // largest observation in no upper regime
    std::vector<std::size_t> upper_outliers; // indices into the sorted sample
    std::vector<std::size_t> lower_outliers;
};

// how picks the lower-tail flip; Auto takes the reciprocal on all-positive
// samples and negation otherwise.
TailAdjustedBoxplot tail_adjusted_boxplot(const OrderedSample& s,
                                          const DetectorConfig& cfg_upper,
                                          const DetectorConfig& cfg_lower,
                                          LowerTransform how = LowerTransform::Auto);

} // namespace evtail
