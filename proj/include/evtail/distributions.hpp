#pragma once

#include "evtail/sample.hpp"

#include <array>
#include <cstdint>
#include <random>
#include <string>

namespace evtail {

// The simulation families, one per max-domain of attraction:
//   HalfT(nu)                    xi = 1/nu        (|T_nu|, density doubled on x>0)
//   Burr(eta,lambda,tau)         xi = 1/(lambda tau)
//   Lognormal(mu,sigma)          xi = 0
//   Normal(mu,sigma)             xi = 0
//   Weibull(lambda,tau)          xi = 0           (survival exp(-lambda x^tau))
//   Beta(p,q)                    xi = -1/q        (right endpoint 1)
//   ReverseBurr(eta,lambda,tau,x+) xi = -1/(lambda tau), endpoint x+
enum class Family { HalfT, Burr, Lognormal, Normal, Weibull, Beta, ReverseBurr };

struct DistributionSpec {
    Family family = Family::Normal;
    std::array<double, 4> param{}; // family-specific, see factories

    static DistributionSpec half_t(double nu);
    static DistributionSpec burr(double eta, double lambda, double tau);
    static DistributionSpec lognormal(double mu, double sigma);
    static DistributionSpec normal(double mu, double sigma);
    static DistributionSpec weibull(double lambda, double tau);
    static DistributionSpec beta(double p, double q);
    static DistributionSpec reverse_burr(double eta, double lambda, double tau,
                                         double x_plus = 1.0);

    double true_xi() const;
    std::string name() const;
};

// n i.i.d. draws, sorted. Burr/Weibull/ReverseBurr use closed-form inverse
// CDFs; the rest use the standard library distributions.
OrderedSample sample(const DistributionSpec& d, std::size_t n, std::uint64_t seed);
std::vector<double> sample_raw(const DistributionSpec& d, std::size_t n,
                               std::mt19937_64& rng);

enum class InjectionKind { None, Exponentiated, Scaled };

// Perturbs the top k0 order statistics around the anchor A = top(k0+1):
//   Exponentiated: x -> A (x/A)^L     (needs A > 0)
//   Scaled:        x -> A + C (x - A)
// intensity is L or C. intensity == 1 is the exact identity; the bottom
// n - k0 values are always preserved bitwise.
struct InjectionSpec {
    InjectionKind kind = InjectionKind::None;
    std::size_t k0 = 0;
    double intensity = 1.0;
};

OrderedSample inject(const OrderedSample& s, const InjectionSpec& inj);

} // namespace evtail
