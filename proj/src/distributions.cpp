#include "evtail/distributions.hpp"

#include "evtail/errors.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace evtail {

namespace {

void require_positive(double v, const char* what) {
    if (!std::isfinite(v) || !(v > 0.0))
        throw config_error(std::string(what) + " must be positive and finite");
}

// Uniform on the open interval (0,1): 53-bit mantissa shifted off the lattice
// endpoints, so inverse CDFs never see 0 or 1.
double uniform_open01(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1p-53;
}

double burr_draw(std::mt19937_64& rng, double eta, double lambda, double tau) {
    double u = uniform_open01(rng);
    return std::pow(eta * (std::pow(u, -1.0 / lambda) - 1.0), 1.0 / tau);
}

std::string fmt_params(const double* p, std::size_t m) {
    std::string out;
    char buf[40];
    for (std::size_t i = 0; i < m; ++i) {
        std::snprintf(buf, sizeof buf, "%g", p[i]);
        if (i) out += ",";
        out += buf;
    }
    return out;
}

} // namespace

DistributionSpec DistributionSpec::half_t(double nu) {
    require_positive(nu, "half-t degrees of freedom");
    return {Family::HalfT, {nu, 0, 0, 0}};
}

DistributionSpec DistributionSpec::burr(double eta, double lambda, double tau) {
    require_positive(eta, "Burr eta");
    require_positive(lambda, "Burr lambda");
    require_positive(tau, "Burr tau");
    return {Family::Burr, {eta, lambda, tau, 0}};
}

DistributionSpec DistributionSpec::lognormal(double mu, double sigma) {
    if (!std::isfinite(mu)) throw config_error("lognormal mu must be finite");
    require_positive(sigma, "lognormal sigma");
    return {Family::Lognormal, {mu, sigma, 0, 0}};
}

DistributionSpec DistributionSpec::normal(double mu, double sigma) {
    if (!std::isfinite(mu)) throw config_error("normal mu must be finite");
    require_positive(sigma, "normal sigma");
    return {Family::Normal, {mu, sigma, 0, 0}};
}

DistributionSpec DistributionSpec::weibull(double lambda, double tau) {
    require_positive(lambda, "Weibull lambda");
    require_positive(tau, "Weibull tau");
    return {Family::Weibull, {lambda, tau, 0, 0}};
}

DistributionSpec DistributionSpec::beta(double p, double q) {
    require_positive(p, "beta p");
    require_positive(q, "beta q");
    return {Family::Beta, {p, q, 0, 0}};
}

DistributionSpec DistributionSpec::reverse_burr(double eta, double lambda, double tau,
                                                double x_plus) {
    require_positive(eta, "reverse-Burr eta");
    require_positive(lambda, "reverse-Burr lambda");
    require_positive(tau, "reverse-Burr tau");
    if (!std::isfinite(x_plus)) throw config_error("reverse-Burr endpoint must be finite");
    return {Family::ReverseBurr, {eta, lambda, tau, x_plus}};
}

double DistributionSpec::true_xi() const {
    switch (family) {
    case Family::HalfT: return 1.0 / param[0];
    case Family::Burr: return 1.0 / (param[1] * param[2]);
    case Family::Lognormal: return 0.0;
    case Family::Normal: return 0.0;
    case Family::Weibull: return 0.0;
    case Family::Beta: return -1.0 / param[1];
    case Family::ReverseBurr: return -1.0 / (param[1] * param[2]);
    }
    throw config_error("unknown distribution family");
}

std::string DistributionSpec::name() const {
    switch (family) {
    case Family::HalfT: return "half-t(" + fmt_params(param.data(), 1) + ")";
    case Family::Burr: return "burr(" + fmt_params(param.data(), 3) + ")";
    case Family::Lognormal: return "lognormal(" + fmt_params(param.data(), 2) + ")";
    case Family::Normal: return "normal(" + fmt_params(param.data(), 2) + ")";
    case Family::Weibull: return "weibull(" + fmt_params(param.data(), 2) + ")";
    case Family::Beta: return "beta(" + fmt_params(param.data(), 2) + ")";
    case Family::ReverseBurr: return "reverse-burr(" + fmt_params(param.data(), 4) + ")";
    }
    throw config_error("unknown distribution family");
}

std::vector<double> sample_raw(const DistributionSpec& d, std::size_t n,
                               std::mt19937_64& rng) {
    std::vector<double> out(n);
    switch (d.family) {
    case Family::HalfT: {
        std::student_t_distribution<double> st(d.param[0]);
        for (auto& x : out) x = std::abs(st(rng));
        break;
    }
    case Family::Burr: {
        for (auto& x : out) x = burr_draw(rng, d.param[0], d.param[1], d.param[2]);
        break;
    }
    case Family::Lognormal: {
        std::lognormal_distribution<double> ln(d.param[0], d.param[1]);
        for (auto& x : out) x = ln(rng);
        break;
    }
    case Family::Normal: {
        std::normal_distribution<double> nd(d.param[0], d.param[1]);
        for (auto& x : out) x = nd(rng);
        break;
    }
    case Family::Weibull: {
        // Survival exp(-lambda x^tau), inverted directly.
        for (auto& x : out) {
            double u = uniform_open01(rng);
            x = std::pow(-std::log(u) / d.param[0], 1.0 / d.param[1]);
        }
        break;
    }
    case Family::Beta: {
        std::gamma_distribution<double> gp(d.param[0], 1.0);
        std::gamma_distribution<double> gq(d.param[1], 1.0);
        for (auto& x : out) {
            double a = gp(rng);
            double b = gq(rng);
            x = a / (a + b);
        }
        break;
    }
    case Family::ReverseBurr: {
        for (auto& x : out)
            x = d.param[3] - 1.0 / burr_draw(rng, d.param[0], d.param[1], d.param[2]);
        break;
    }
    }
    return out;
}

OrderedSample sample(const DistributionSpec& d, std::size_t n, std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return OrderedSample::ingest(sample_raw(d, n, rng), 0.0, 0);
}

OrderedSample inject(const OrderedSample& s, const InjectionSpec& inj) {
    if (inj.kind == InjectionKind::None || inj.k0 == 0) return s;
    const std::size_t n = s.size();
    if (inj.k0 >= n)
        throw config_error("injection k0 must be below n; got k0=" +
                           std::to_string(inj.k0) + ", n=" + std::to_string(n));
    if (!std::isfinite(inj.intensity) || !(inj.intensity > 0.0))
        throw config_error("injection intensity must be positive and finite");
    if (inj.intensity == 1.0) return s; // exact identity by contract

    std::vector<double> v = s.values();
    const double anchor = v[n - 1 - inj.k0]; // top(k0+1)
    if (inj.kind == InjectionKind::Exponentiated && !(anchor > 0.0))
        throw numeric_error("exponentiated injection needs a positive anchor; top(k0+1) = " +
                            std::to_string(anchor));
    for (std::size_t i = n - inj.k0; i < n; ++i) {
        v[i] = (inj.kind == InjectionKind::Exponentiated)
                   ? anchor * std::pow(v[i] / anchor, inj.intensity)
                   : anchor + inj.intensity * (v[i] - anchor);
    }
    return OrderedSample::from_sorted(std::move(v), s.provenance());
}

} // namespace evtail
