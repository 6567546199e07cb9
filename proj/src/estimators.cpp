#include "evtail/estimators.hpp"

#include "evtail/errors.hpp"
#include "evtail/math.hpp"
#include "top_logs.hpp"

#include <cmath>
#include <string>
#include <utility>

namespace evtail {

namespace {

void check_k_range(std::size_t k, std::size_t lo, std::size_t hi, const char* what) {
    if (k < lo || k > hi)
        throw config_error(std::string(what) + " must lie in [" + std::to_string(lo) +
                           ", " + std::to_string(hi) + "]; got " + std::to_string(k));
}

[[noreturn]] void throw_tie(std::size_t k0, std::size_t j) {
    throw tie_error("tied top order statistics: Hill step H_{" + std::to_string(k0) +
                    "," + std::to_string(j) +
                    "} is not positive; dither the sample (ingest with a small half-width)");
}

// log H_{k0,j} for j = k0+1..jmax. Shared by the generalized-Hill estimators
// and paths; inner Hills are built incrementally from one running sum.
std::vector<double> inner_log_hills(const detail::TopLogs& tl, std::size_t k0,
                                    std::size_t jmax) {
    std::vector<double> lh(jmax + 1, 0.0);
    CompensatedSum acc;
    for (std::size_t j = k0 + 1; j <= jmax; ++j) {
        acc.add(tl.lg(j));
        double h = acc.value() / static_cast<double>(j - k0) - tl.lg(j + 1);
        if (!(h > 0.0)) throw_tie(k0, j);
        lh[j] = std::log(h);
    }
    return lh;
}

} // namespace

LogSpacings log_spacings(const OrderedSample& s, std::size_t kmax) {
    check_k_range(kmax, 1, s.size() - 1, "kmax");
    detail::TopLogs tl(s, kmax + 1);
    LogSpacings out;
    out.kmax = kmax;
    out.v.resize(kmax);
    for (std::size_t j = 1; j <= kmax; ++j) out.v[j - 1] = tl.spacing(j);
    return out;
}

double hill(const OrderedSample& s, std::size_t k) {
    check_k_range(k, 1, s.size() - 1, "k");
    detail::TopLogs tl(s, k + 1);
    CompensatedSum sum;
    for (std::size_t j = 1; j <= k; ++j) sum.add(tl.lg(j) - tl.lg(k + 1));
    return sum.value() / static_cast<double>(k);
}

double trimmed_hill(const OrderedSample& s, std::size_t k0, std::size_t k) {
    check_k_range(k, 2, s.size() - 1, "k");
    if (k0 >= k)
        throw config_error("trim k0 must be below k; got k0=" + std::to_string(k0) +
                           ", k=" + std::to_string(k));
    detail::TopLogs tl(s, k + 1);
    return tl.hill(k0, k);
}

double trimmed_hill_inner(const OrderedSample& s, std::size_t k0, std::size_t j) {
    check_k_range(j, 1, s.size() - 1, "j");
    if (k0 >= j)
        throw config_error("trim k0 must be below j; got k0=" + std::to_string(k0) +
                           ", j=" + std::to_string(j));
    detail::TopLogs tl(s, j + 1);
    CompensatedSum sum;
    for (std::size_t i = k0 + 1; i <= j; ++i) sum.add(tl.lg(i) - tl.lg(j + 1));
    return sum.value() / static_cast<double>(j - k0);
}

double generalized_hill(const OrderedSample& s, std::size_t k) {
    check_k_range(k, 2, s.size() - 2, "k");
    detail::TopLogs tl(s, k + 2);
    std::vector<double> lh = inner_log_hills(tl, 0, k + 1);
    double base = tl.lg(k + 1) + lh[k + 1];
    CompensatedSum sum;
    for (std::size_t j = 1; j <= k; ++j) sum.add(tl.lg(j) + lh[j] - base);
    return sum.value() / static_cast<double>(k);
}

double trimmed_generalized_hill(const OrderedSample& s, std::size_t k0, std::size_t k) {
    check_k_range(k, 2, s.size() - 2, "k");
    if (k0 >= k)
        throw config_error("trim k0 must be below k; got k0=" + std::to_string(k0) +
                           ", k=" + std::to_string(k));
    detail::TopLogs tl(s, k + 2);
    std::vector<double> lh = inner_log_hills(tl, k0, k + 1);
    double base = tl.lg(k + 1) + lh[k + 1];
    CompensatedSum sum;
    for (std::size_t j = k0 + 1; j <= k; ++j) sum.add(tl.lg(j) + lh[j] - base);
    return sum.value() / static_cast<double>(k - k0);
}

HillPath hill_path(const OrderedSample& s, HillKind kind, std::size_t k0,
                   std::size_t kmax) {
    const std::size_t n = s.size();
    const std::size_t hi = (kind == HillKind::Hill) ? n - 1 : n - 2;
    check_k_range(kmax, 2, hi, "kmax");
    if (k0 + 1 >= kmax)
        throw config_error("trim k0 must leave at least two path points; got k0=" +
                           std::to_string(k0) + ", kmax=" + std::to_string(kmax));

    HillPath path;
    path.kind = kind;
    path.k0 = k0;
    path.k_min = k0 + 1;
    path.values.reserve(kmax - k0);

    if (kind == HillKind::Hill) {
        detail::TopLogs tl(s, kmax + 1);
        for (std::size_t k = k0 + 1; k <= kmax; ++k) path.values.push_back(tl.hill(k0, k));
        return path;
    }

    detail::TopLogs tl(s, kmax + 2);
    std::vector<double> lh = inner_log_hills(tl, k0, kmax + 1);
    // Re-sum per k so each path value matches the pointwise estimator exactly.
    for (std::size_t k = k0 + 1; k <= kmax; ++k) {
        double base = tl.lg(k + 1) + lh[k + 1];
        CompensatedSum sum;
        for (std::size_t j = k0 + 1; j <= k; ++j) sum.add(tl.lg(j) + lh[j] - base);
        path.values.push_back(sum.value() / static_cast<double>(k - k0));
    }
    return path;
}

std::vector<QQPoint> qq_points(const OrderedSample& s, QQKind kind) {
    const std::size_t n = s.size();
    std::vector<QQPoint> pts;

    switch (kind) {
    case QQKind::Exponential: {
        pts.reserve(n);
        for (std::size_t j = 1; j <= n; ++j)
            pts.push_back({-std::log(static_cast<double>(j) / (n + 1.0)), s.top(j)});
        return pts;
    }
    case QQKind::Pareto: {
        detail::TopLogs tl(s, n);
        pts.reserve(n);
        for (std::size_t j = 1; j <= n; ++j)
            pts.push_back({-std::log(static_cast<double>(j) / (n + 1.0)), tl.lg(j)});
        return pts;
    }
    case QQKind::Generalized: {
        detail::TopLogs tl(s, n);
        std::vector<double> lh = inner_log_hills(tl, 0, n - 1);
        pts.reserve(n - 1);
        for (std::size_t j = 1; j + 1 <= n; ++j)
            pts.push_back({std::log((j + 1.0) / (n + 1.0)), tl.lg(j) + lh[j]});
        return pts;
    }
    }
    throw config_error("unknown QQ plot kind");
}

std::vector<DiagnosticCell> diagnostic_k0_series(const OrderedSample& s,
                                                 const std::vector<std::size_t>& ks,
                                                 std::size_t k0_max) {
    if (ks.empty()) throw config_error("diagnostic needs at least one k");
    std::vector<DiagnosticCell> cells;
    cells.reserve(ks.size() * (k0_max + 1));
    for (std::size_t k : ks) {
        for (std::size_t k0 = 0; k0 <= k0_max; ++k0) {
            DiagnosticCell cell;
            cell.k = k;
            cell.k0 = k0;
            try {
                cell.gh = trimmed_generalized_hill(s, k0, k);
            } catch (const std::exception& ex) {
                cell.error = "k=" + std::to_string(k) + " k0=" + std::to_string(k0) +
                             ": " + ex.what();
            }
            cells.push_back(std::move(cell));
        }
    }
    return cells;
}

} // namespace evtail
