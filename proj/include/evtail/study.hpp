#pragma once

#include "evtail/detector.hpp"
#include "evtail/distributions.hpp"

#include <cstdint>
#include <map>
#include <optional>
#include <vector>

namespace evtail {

struct StudyMetrics {
    std::size_t reps = 0;     // attempted replications
    std::size_t failures = 0; // replications that raised an error
    double type1_rate = 0.0;  // P(k0_stage1 > 0) over successes
    double mean_k0 = 0.0;
    double sd_k0 = 0.0;
    std::map<std::size_t, std::size_t> histogram; // k0_stage1 -> count
};

// reps independent replications of: sample -> optional inject -> detect.
// Replication r is seeded by sub_seed(master_seed, r), so the metrics do not
// depend on thread count or execution order. Per-rep failures are counted
// and excluded; an all-failed study raises numeric_error.
StudyMetrics run_study(const DistributionSpec& dist,
                       const std::optional<InjectionSpec>& inj,
                       const DetectorConfig& cfg, std::size_t n, std::size_t reps,
                       std::uint64_t master_seed, unsigned threads = 1);

struct KOptCell {
    std::size_t k = 0;
    double variance = 0.0;
    std::size_t failures = 0;
    bool skipped = false; // more than 5% of reps failed here
};

struct KOptResult {
    std::vector<KOptCell> cells;
    std::size_t k_opt = 0; // smallest k attaining the minimal variance
};

// Empirical variance of GH_k over fresh samples, minimized over the grid.
KOptResult estimate_k_opt(const DistributionSpec& dist, std::size_t n,
                          const std::vector<std::size_t>& k_grid, std::size_t reps,
                          std::uint64_t seed);

} // namespace evtail
