#pragma once

// Shared helpers for the unit tests: closed-form distributions for oracles,
// deterministic quantile grids, a KS statistic, OLS, and CLI process capture.

#include "evtail/math.hpp"
#include "evtail/sample.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace support {

inline evtail::OrderedSample make_sample(std::vector<double> v) {
    return evtail::OrderedSample::ingest(std::move(v), 0.0, 0);
}

// Open-interval uniform; keeps every downstream log and reciprocal finite.
inline double u01(std::mt19937_64& g) {
    return (static_cast<double>(g() >> 11) + 0.5) * 0x1p-53;
}

// Deterministic grid of quantiles Q(i/(n+1)), i = 1..n, already sorted for
// monotone Q.
inline evtail::OrderedSample quantile_grid(const std::function<double(double)>& q,
                                           std::size_t n) {
    std::vector<double> v(n);
    for (std::size_t i = 1; i <= n; ++i)
        v[i - 1] = q(static_cast<double>(i) / static_cast<double>(n + 1));
    std::sort(v.begin(), v.end());
    return evtail::OrderedSample::from_sorted(std::move(v), evtail::Provenance::Raw);
}

// Closed-form quantile functions.
inline double pareto_q(double p, double alpha = 1.0) {
    return std::pow(1.0 - p, -1.0 / alpha);
}
inline double exponential_q(double p) { return -std::log1p(-p); }
inline double burr_q(double p, double eta, double lambda, double tau) {
    return std::pow(eta * (std::pow(1.0 - p, -1.0 / lambda) - 1.0), 1.0 / tau);
}
inline double beta12_q(double p) { return 1.0 - std::sqrt(1.0 - p); }
inline double half_t2_q(double p) { return p * std::sqrt(2.0 / (1.0 - p * p)); }

// Closed-form CDFs.
inline double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }
inline double half_t2_cdf(double x) { return x / std::sqrt(2.0 + x * x); }
inline double burr_cdf(double x, double eta, double lambda, double tau) {
    return 1.0 - std::pow(eta / (eta + std::pow(x, tau)), lambda);
}

// Kolmogorov-Smirnov distance between a sample and a CDF.
inline double ks_statistic(std::vector<double> x,
                           const std::function<double(double)>& cdf) {
    std::sort(x.begin(), x.end());
    const double n = static_cast<double>(x.size());
    double d = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double f = cdf(x[i]);
        d = std::max(d, std::abs((static_cast<double>(i) + 1.0) / n - f));
        d = std::max(d, std::abs(static_cast<double>(i) / n - f));
    }
    return d;
}

struct OlsFit {
    double slope = 0.0;
    double intercept = 0.0;
    double max_abs_residual = 0.0;
};

inline OlsFit ols(const std::vector<double>& x, const std::vector<double>& y) {
    const double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    OlsFit f;
    f.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
    f.intercept = (sy - f.slope * sx) / n;
    for (std::size_t i = 0; i < x.size(); ++i)
        f.max_abs_residual = std::max(
            f.max_abs_residual, std::abs(y[i] - f.intercept - f.slope * x[i]));
    return f;
}

inline double mean_of(const std::vector<double>& v) {
    double s = 0;
    for (double x : v) s += x;
    return s / static_cast<double>(v.size());
}

inline double sd_of(const std::vector<double>& v) {
    double m = mean_of(v), s = 0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / static_cast<double>(v.size() - 1));
}

// ---- CLI process helpers ----

struct CliResult {
    int exit_code = -1;
    std::string out;
};

// Runs the built binary with stderr folded into the capture, so error text is
// assertable alongside the exit code.
inline CliResult run_cli(const std::string& args) {
    CliResult r;
#ifdef EVTAIL_CLI_PATH
    std::string cmd = std::string(EVTAIL_CLI_PATH) + " " + args + " 2>&1";
    FILE* p = ::popen(cmd.c_str(), "r");
    if (!p) return r;
    char buf[4096];
    std::size_t got;
    while ((got = fread(buf, 1, sizeof buf, p)) > 0) r.out.append(buf, got);
    int status = ::pclose(p);
    r.exit_code = (status >= 0 && WIFEXITED(status)) ? WEXITSTATUS(status) : -1;
#else
    (void)args;
#endif
    return r;
}

class TempDir {
public:
    TempDir() {
        char tmpl[] = "/tmp/evtail_test_XXXXXX";
        path_ = ::mkdtemp(tmpl);
    }
    ~TempDir() {
        if (!path_.empty()) {
            std::string cmd = "rm -rf " + path_;
            if (std::system(cmd.c_str()) != 0) {
                // best effort; leak the directory rather than abort a test run
            }
        }
    }
    std::string file(const std::string& name) const { return path_ + "/" + name; }

private:
    std::string path_;
};

inline void write_file(const std::string& path, const std::string& content) {
    std::ofstream f(path, std::ios::binary);
    f << content;
}

inline std::string read_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

// CSV with one numeric column named "x".
inline std::string csv_of(const std::vector<double>& values) {
    std::string out = "x\n";
    char buf[64];
    for (double v : values) {
        std::snprintf(buf, sizeof buf, "%.17g\n", v);
        out += buf;
    }
    return out;
}

inline std::vector<double> pareto_rows(std::size_t n, std::uint64_t seed) {
    std::mt19937_64 g(seed);
    std::vector<double> v(n);
    for (auto& x : v) x = 1.0 / u01(g);
    return v;
}

} // namespace support
