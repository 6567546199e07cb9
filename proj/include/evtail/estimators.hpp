#pragma once

#include "evtail/sample.hpp"

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace evtail {

// Weighted log-spacings V_j = j * log(top(j) / top(j+1)), j = 1..kmax.
// Non-negative on sorted data; zero exactly at ties.
struct LogSpacings {
    std::vector<double> v; // v[j-1] holds V_j
    std::size_t kmax = 0;

    double at(std::size_t j) const { return v[j - 1]; } // 1-based, j <= kmax
};

LogSpacings log_spacings(const OrderedSample& s, std::size_t kmax);

// Hill estimator H_k = (1/k) sum_{j<=k} log top(j) - log top(k+1).
double hill(const OrderedSample& s, std::size_t k);

// Trimmed Hill H_{k0,k} =
//   (k0/(k-k0)) log(top(k0+1)/top(k+1)) + (1/(k-k0)) sum_{i=k0+1..k} log(top(i)/top(k+1)).
// Equals the mean of V_{k0+1}..V_k; tests hold the two forms to 1e-12.
double trimmed_hill(const OrderedSample& s, std::size_t k0, std::size_t k);

// Hill-type estimator on the trimmed window:
//   H_{k0,j} = (1/(j-k0)) sum_{i=k0+1..j} log top(i) - log top(j+1).
double trimmed_hill_inner(const OrderedSample& s, std::size_t k0, std::size_t j);

// Generalized Hill, consistent for every xi:
//   GH_k = (1/k) sum_{j<=k} log(top(j) H_j) - log(top(k+1) H_{k+1}).
double generalized_hill(const OrderedSample& s, std::size_t k);

// Trimmed generalized Hill with the inner H_{k0,j} sequence.
double trimmed_generalized_hill(const OrderedSample& s, std::size_t k0, std::size_t k);

enum class HillKind { Hill, GeneralizedHill };

// Estimator path over k for a fixed trim level, e.g. for plotting stability.
struct HillPath {
    HillKind kind = HillKind::Hill;
    std::size_t k0 = 0;
    std::size_t k_min = 1;
    std::vector<double> values; // values[i] is the estimate at k = k_min + i
};

HillPath hill_path(const OrderedSample& s, HillKind kind, std::size_t k0,
                   std::size_t kmax);

enum class QQKind { Exponential, Pareto, Generalized };

struct QQPoint {
    double x = 0.0;
    double y = 0.0;
};

// Plot coordinates. Generalized: (log((j+1)/(n+1)), log(top(j) H_j)), j = 1..n-1.
// Pareto: (-log(j/(n+1)), log top(j)), j = 1..n. Exponential: (-log(j/(n+1)), top(j)).
std::vector<QQPoint> qq_points(const OrderedSample& s, QQKind kind);

struct DiagnosticCell {
    std::size_t k = 0;
    std::size_t k0 = 0;
    std::optional<double> gh; // absent when the estimator errored here
    std::string error;
};

// GH_{k0,k} over k0 = 0..k0_max for each requested k; per-cell failures are
// reported in place rather than aborting the grid.
std::vector<DiagnosticCell> diagnostic_k0_series(const OrderedSample& s,
                                                 const std::vector<std::size_t>& k_values,
                                                 std::size_t k0_max);

} // namespace evtail
