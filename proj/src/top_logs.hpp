#pragma once

#include "evtail/errors.hpp"
#include "evtail/math.hpp"
#include "evtail/sample.hpp"

#include <cmath>
#include <cstddef>
#include <string>
#include <vector>

namespace evtail::detail {

// Logs of the m largest order statistics: lg(j) = log top(j), j = 1..m.
// Positivity is enforced once at construction. Estimator sums are always
// windowed (log ratios against a nearby base), never differences of long
// prefixes, so compensated accumulation keeps them at ulp-level accuracy.
class TopLogs {
public:
    TopLogs(const OrderedSample& s, std::size_t m) {
        const std::size_t n = s.size();
        if (m < 1 || m > n)
            throw config_error("order-statistic depth " + std::to_string(m) +
                               " out of range for n=" + std::to_string(n));
        if (!(s.top(m) > 0.0)) {
            std::size_t usable = 0;
            while (usable < m && s.top(usable + 1) > 0.0) ++usable;
            throw numeric_error(
                "non-positive order statistic at depth " + std::to_string(usable + 1) +
                "; log-based estimators can use depths up to " + std::to_string(usable));
        }
        lg_.resize(m + 1);
        for (std::size_t j = 1; j <= m; ++j) lg_[j] = std::log(s.top(j));
    }

    double lg(std::size_t j) const { return lg_[j]; }
    std::size_t depth() const { return lg_.size() - 1; }

    // V_j = j log(top(j)/top(j+1)); needs j+1 <= depth.
    double spacing(std::size_t j) const {
        return static_cast<double>(j) * (lg_[j] - lg_[j + 1]);
    }

    // Trimmed Hill H_{k0,k}; needs k+1 <= depth and k0 < k.
    double hill(std::size_t k0, std::size_t k) const {
        double base = lg_[k + 1];
        CompensatedSum sum;
        sum.add(static_cast<double>(k0) * (lg_[k0 + 1] - base));
        for (std::size_t j = k0 + 1; j <= k; ++j) sum.add(lg_[j] - base);
        return sum.value() / static_cast<double>(k - k0);
    }

private:
    std::vector<double> lg_;
};

// T_{k0,k} on a precomputed log table (shared by the detector's scan).
double t_from_logs(const TopLogs& tl, std::size_t k0, std::size_t k);

} // namespace evtail::detail
