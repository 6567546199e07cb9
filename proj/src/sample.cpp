#include "evtail/sample.hpp"

#include "evtail/errors.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <string>

namespace evtail {

OrderedSample OrderedSample::ingest(std::vector<double> raw, double dither_halfwidth,
                                    std::uint64_t seed) {
    if (raw.size() < 3)
        throw input_error("sample too small: need at least 3 observations, got " +
                          std::to_string(raw.size()));
    for (std::size_t i = 0; i < raw.size(); ++i)
        if (!std::isfinite(raw[i]))
            throw input_error("non-finite value at index " + std::to_string(i));
    if (dither_halfwidth < 0.0 || !std::isfinite(dither_halfwidth))
        throw config_error("dither half-width must be finite and >= 0");

    Provenance prov = Provenance::Raw;
    if (dither_halfwidth > 0.0) {
        std::mt19937_64 rng(seed);
        std::uniform_real_distribution<double> noise(-dither_halfwidth, dither_halfwidth);
        for (double& x : raw) x += noise(rng);
        prov = Provenance::Dithered;
    }
    std::sort(raw.begin(), raw.end());
    return OrderedSample(std::move(raw), prov, dither_halfwidth);
}

OrderedSample OrderedSample::from_sorted(std::vector<double> sorted, Provenance prov) {
    if (!std::is_sorted(sorted.begin(), sorted.end()))
        throw input_error("from_sorted called with unsorted data");
    for (std::size_t i = 0; i < sorted.size(); ++i)
        if (!std::isfinite(sorted[i]))
            throw input_error("non-finite value at index " + std::to_string(i));
    return OrderedSample(std::move(sorted), prov, 0.0);
}

OrderedSample transform_lower(const OrderedSample& s, LowerTransform how) {
    const auto& v = s.values();
    bool reciprocal = false;
    switch (how) {
    case LowerTransform::Auto:
        reciprocal = v.front() > 0.0;
        break;
    case LowerTransform::Reciprocal:
        if (v.front() <= 0.0)
            throw numeric_error("reciprocal transform needs a strictly positive sample; "
                                "minimum is " + std::to_string(v.front()));
        reciprocal = true;
        break;
    case LowerTransform::Negate:
        break;
    }

    // Both maps are decreasing, so writing the transform of the reversed
    // array keeps it sorted and pins the depth j <-> ascending index j-1
    // correspondence without a re-sort.
    std::vector<double> t(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double x = v[v.size() - 1 - i];
        t[i] = reciprocal ? 1.0 / x : -x;
    }
    return OrderedSample::from_sorted(std::move(t),
                                      reciprocal ? Provenance::TransformedReciprocal
                                                 : Provenance::TransformedNegated);
}

namespace {

// Type-7: interpolate at 0-based position p(n-1).
double type7(const std::vector<double>& v, double p) {
    double pos = p * static_cast<double>(v.size() - 1);
    auto lo = static_cast<std::size_t>(pos);
    if (lo + 1 >= v.size()) return v.back();
    double frac = pos - static_cast<double>(lo);
    return v[lo] + frac * (v[lo + 1] - v[lo]);
}

} // namespace

QuartileSummary quartiles(const OrderedSample& s) {
    if (s.size() < 3)
        throw input_error("quartiles need at least 3 observations");
    const auto& v = s.values();
    QuartileSummary qs;
    qs.q1 = type7(v, 0.25);
    qs.median = type7(v, 0.5);
    qs.q3 = type7(v, 0.75);
    qs.iqr = qs.q3 - qs.q1;
    qs.lower_fence = qs.q1 - 1.5 * qs.iqr;
    qs.upper_fence = qs.q3 + 1.5 * qs.iqr;
    return qs;
}

std::vector<bool> classical_flags(const OrderedSample& s) {
    QuartileSummary qs = quartiles(s);
    const auto& v = s.values();
    std::vector<bool> flags(v.size());
    for (std::size_t i = 0; i < v.size(); ++i)
        flags[i] = v[i] < qs.lower_fence || v[i] > qs.upper_fence;
    return flags;
}

double fence_exceedance_probability(const std::function<double(double)>& quantile) {
    double q1 = quantile(0.25);
    double q3 = quantile(0.75);
    if (!(q3 >= q1))
        throw config_error("quantile function is not monotone: Q(0.75) < Q(0.25)");
    double fence = q3 + 1.5 * (q3 - q1);

    // F(fence) by bisection; Q(lo) <= fence is maintained, starting at Q3.
    double lo = 0.75, hi = 1.0;
    for (int iter = 0; iter < 200 && hi - lo > 1e-17; ++iter) {
        double mid = 0.5 * (lo + hi);
        if (quantile(mid) <= fence)
            lo = mid;
        else
            hi = mid;
    }
    return 1.0 - 0.5 * (lo + hi);
}

} // namespace evtail
