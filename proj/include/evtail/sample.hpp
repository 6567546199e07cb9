#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

namespace evtail {

enum class Provenance {
    Raw,
    Dithered,
    TransformedReciprocal,
    TransformedNegated,
};

// A validated sample held in ascending order. Formulas throughout the library
// index order statistics from the top: top(j) is the j-th largest value,
// i.e. X_{n-j+1,n} == values()[n-j].
class OrderedSample {
public:
    // Validates (finite, n >= 3), optionally adds U(-h, h) dither from the
    // seeded generator before sorting.
    static OrderedSample ingest(std::vector<double> raw, double dither_halfwidth,
                                std::uint64_t seed);

    // Trusted constructor for already-sorted data (injection, transforms,
    // deterministic grids). Still checks ordering.
    static OrderedSample from_sorted(std::vector<double> sorted, Provenance prov);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }

    // j-th largest order statistic, j = 1..n.
    double top(std::size_t j) const { return values_[values_.size() - j]; }

    Provenance provenance() const { return provenance_; }
    double dither_halfwidth() const { return dither_halfwidth_; }

private:
    OrderedSample(std::vector<double> v, Provenance p, double h)
        : values_(std::move(v)), provenance_(p), dither_halfwidth_(h) {}

    std::vector<double> values_;
    Provenance provenance_;
    double dither_halfwidth_;
};

struct QuartileSummary {
    double q1 = 0.0;
    double median = 0.0;
    double q3 = 0.0;
    double iqr = 0.0;
    double lower_fence = 0.0;
    double upper_fence = 0.0;
};

enum class LowerTransform { Auto, Reciprocal, Negate };

// Maps the lower tail onto the upper-tail machinery: reciprocal when every
// value is positive, negation otherwise (Auto rule; either can be forced).
// Both transforms reverse order, so depth j of the result is the j-th
// smallest original, i.e. ascending index j-1. That fixed mapping is how
// detected upper-tail outliers of the transform are traced back.
OrderedSample transform_lower(const OrderedSample& s,
                              LowerTransform how = LowerTransform::Auto);

// Type-7 quartiles: linear interpolation at position 1 + p(n-1).
QuartileSummary quartiles(const OrderedSample& s);

// flag[i] true iff values()[i] lies outside (lower_fence, upper_fence).
std::vector<bool> classical_flags(const OrderedSample& s);

// P(X > Q3 + 1.5 IQR) for the law with the given quantile function, computed
// by bisecting the (monotone) quantile function at the fence. No sampling.
double fence_exceedance_probability(const std::function<double(double)>& quantile);

} // namespace evtail
