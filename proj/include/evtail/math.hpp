#pragma once

#include <cmath>
#include <cstdint>

namespace evtail {

// Neumaier-compensated accumulator. Every estimator sum in this library runs
// through one of these so the 1e-12 identity tolerances stay honest at k ~ 600.
class CompensatedSum {
public:
    void add(double x) {
        double t = sum_ + x;
        if (std::abs(sum_) >= std::abs(x))
            comp_ += (sum_ - t) + x;
        else
            comp_ += (x - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// splitmix64 finalizer.
inline std::uint64_t mix64(std::uint64_t z) {
    z ^= z >> 30;
    z *= 0xBF58476D1CE4E5B9ULL;
    z ^= z >> 27;
    z *= 0x94D049BB133111EBULL;
    z ^= z >> 31;
    return z;
}

// Deterministic per-replication seed. Depends only on (master, rep), so
// Monte Carlo aggregation is independent of execution order and thread count.
inline std::uint64_t sub_seed(std::uint64_t master, std::uint64_t rep) {
    return mix64(master + (rep + 1) * 0x9E3779B97F4A7C15ULL);
}

double normal_cdf(double x);

// Inverse standard-normal CDF (Acklam's rational approximation polished with
// one Halley step against erfc); accurate to ~1e-15 over (0,1).
double normal_quantile(double p);

} // namespace evtail
