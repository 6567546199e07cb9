#include "evtail/study.hpp"

#include "evtail/errors.hpp"
#include "evtail/estimators.hpp"
#include "evtail/math.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <thread>
#include <vector>

namespace evtail {

StudyMetrics run_study(const DistributionSpec& dist,
                       const std::optional<InjectionSpec>& inj,
                       const DetectorConfig& cfg, std::size_t n, std::size_t reps,
                       std::uint64_t master_seed, unsigned threads) {
    if (reps < 1) throw config_error("study needs at least one replication");
    if (n < 4) throw config_error("study needs n >= 4");
    if (threads < 1) threads = 1;

    // -1 marks a failed replication, otherwise the detected k0_stage1.
    std::vector<long long> outcome(reps, -1);
    auto worker = [&](std::size_t lo, std::size_t hi) {
        for (std::size_t r = lo; r < hi; ++r) {
            try {
                std::mt19937_64 rng(sub_seed(master_seed, r));
                OrderedSample os = OrderedSample::ingest(sample_raw(dist, n, rng), 0.0, 0);
                if (inj) os = inject(os, *inj);
                outcome[r] = static_cast<long long>(detect(os, cfg).k0_stage1);
            } catch (const std::exception&) {
                outcome[r] = -1;
            }
        }
    };

    if (threads == 1 || reps < 2) {
        worker(0, reps);
    } else {
        unsigned used = static_cast<unsigned>(std::min<std::size_t>(threads, reps));
        std::size_t chunk = (reps + used - 1) / used;
        std::vector<std::thread> pool;
        for (unsigned t = 0; t < used; ++t) {
            std::size_t lo = static_cast<std::size_t>(t) * chunk;
            std::size_t hi = std::min(reps, lo + chunk);
            if (lo >= hi) break;
            pool.emplace_back(worker, lo, hi);
        }
        for (auto& th : pool) th.join();
    }

    // Aggregation is a fixed sequential pass in replication order, so the
    // metrics are bitwise independent of the thread count.
    StudyMetrics m;
    m.reps = reps;
    std::vector<double> k0s;
    k0s.reserve(reps);
    std::size_t positives = 0;
    for (std::size_t r = 0; r < reps; ++r) {
        if (outcome[r] < 0) {
            ++m.failures;
            continue;
        }
        auto k0 = static_cast<std::size_t>(outcome[r]);
        k0s.push_back(static_cast<double>(k0));
        ++m.histogram[k0];
        if (k0 > 0) ++positives;
    }
    if (k0s.empty()) throw numeric_error("every replication of the study failed");

    const double cnt = static_cast<double>(k0s.size());
    m.type1_rate = static_cast<double>(positives) / cnt;
    CompensatedSum sum;
    for (double x : k0s) sum.add(x);
    m.mean_k0 = sum.value() / cnt;
    if (k0s.size() > 1) {
        CompensatedSum ss;
        for (double x : k0s) ss.add((x - m.mean_k0) * (x - m.mean_k0));
        m.sd_k0 = std::sqrt(ss.value() / (cnt - 1.0));
    }
    return m;
}

KOptResult estimate_k_opt(const DistributionSpec& dist, std::size_t n,
                          const std::vector<std::size_t>& k_grid, std::size_t reps,
                          std::uint64_t seed) {
    if (k_grid.empty()) throw config_error("k grid must not be empty");
    if (reps < 2) throw config_error("variance needs at least 2 replications");
    for (std::size_t k : k_grid)
        if (k < 2 || k + 2 > n)
            throw config_error("grid k must lie in [2, n-2]; got k=" + std::to_string(k) +
                               ", n=" + std::to_string(n));

    // One sample per replication is shared by every grid cell (common random
    // numbers), so cells differ only through k.
    std::vector<std::vector<double>> vals(k_grid.size());
    std::vector<std::size_t> fails(k_grid.size(), 0);
    for (auto& v : vals) v.reserve(reps);
    for (std::size_t r = 0; r < reps; ++r) {
        std::mt19937_64 rng(sub_seed(seed, r));
        OrderedSample os = OrderedSample::ingest(sample_raw(dist, n, rng), 0.0, 0);
        for (std::size_t c = 0; c < k_grid.size(); ++c) {
            try {
                vals[c].push_back(generalized_hill(os, k_grid[c]));
            } catch (const std::exception&) {
                ++fails[c];
            }
        }
    }

    KOptResult out;
    out.cells.resize(k_grid.size());
    double best = std::numeric_limits<double>::infinity();
    bool any = false;
    for (std::size_t c = 0; c < k_grid.size(); ++c) {
        KOptCell& cell = out.cells[c];
        cell.k = k_grid[c];
        cell.failures = fails[c];
        cell.skipped = (static_cast<double>(fails[c]) >
                        0.05 * static_cast<double>(reps)) ||
                       vals[c].size() < 2;
        if (cell.skipped) continue;
        const double cnt = static_cast<double>(vals[c].size());
        CompensatedSum sum;
        for (double x : vals[c]) sum.add(x);
        double mean = sum.value() / cnt;
        CompensatedSum ss;
        for (double x : vals[c]) ss.add((x - mean) * (x - mean));
        cell.variance = ss.value() / (cnt - 1.0);
        if (!any || cell.variance < best ||
            (cell.variance == best && cell.k < out.k_opt)) {
            any = true;
            best = cell.variance;
            out.k_opt = cell.k;
        }
    }
    if (!any) throw numeric_error("every grid cell exceeded the failure budget");
    return out;
}

} // namespace evtail
