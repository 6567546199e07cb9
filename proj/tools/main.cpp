#include "evtail/detector.hpp"
#include "evtail/distributions.hpp"
#include "evtail/errors.hpp"
#include "evtail/estimators.hpp"
#include "evtail/sample.hpp"
#include "evtail/study.hpp"

#include "csv_input.hpp"
#include "emit.hpp"

#include "CLI11.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace {

using namespace evtail;
using cli::fmt17;
using cli::JsonWriter;
using cli::SvgPlot;

struct InputFlags {
    std::string input;
    std::string column;
    double dither = 0.01;
    std::uint64_t seed = 1;
    std::string output = "-";
};

struct DetectFlags {
    std::size_t k = 0;
    std::size_t k_star = 0;
    long long k0_star = -1; // -1: derive from the k0c * kstar^k0exp rule
    double k0c = 7.0;
    double k0exp = 1.0 / 3.0;
    std::size_t regimes = 1;
    double a = 1.2;
    double q = 0.05;
    std::optional<double> xi;
    std::string tail = "both";
    std::string transform = "auto";
};

void add_input_flags(CLI::App* cmd, InputFlags& in) {
    cmd->add_option("--input", in.input, "CSV file with a header row")->required();
    cmd->add_option("--column", in.column, "name of the column to analyze")->required();
    cmd->add_option("--dither", in.dither, "half-width of tie-breaking uniform noise")
        ->capture_default_str();
    cmd->add_option("--seed", in.seed, "master seed")->capture_default_str();
    cmd->add_option("--output", in.output, "output path, - for stdout")
        ->capture_default_str();
}

void add_detect_flags(CLI::App* cmd, DetectFlags& d) {
    cmd->add_option("--k", d.k, "test depth k")->required();
    cmd->add_option("--kstar", d.k_star, "estimation depth k*")->required();
    cmd->add_option("--k0star", d.k0_star,
                    "scan bound; default floor(k0c * kstar^k0exp) clamped to k-2");
    cmd->add_option("--k0c", d.k0c, "constant of the default k0star rule")
        ->capture_default_str();
    cmd->add_option("--k0exp", d.k0exp, "exponent of the default k0star rule")
        ->capture_default_str();
    cmd->add_option("--regimes", d.regimes, "max outlier regimes to report")
        ->capture_default_str();
    cmd->add_option("--a", d.a, "schedule decay base")->capture_default_str();
    cmd->add_option("--q", d.q, "overall significance budget")->capture_default_str();
    cmd->add_option("--xi", d.xi, "tail index override (skip estimation)");
    cmd->add_option("--tail", d.tail, "which tails to test")
        ->check(CLI::IsMember({"both", "upper", "lower"}))
        ->capture_default_str();
    cmd->add_option("--transform", d.transform, "lower-tail mapping")
        ->check(CLI::IsMember({"auto", "reciprocal", "negate"}))
        ->capture_default_str();
}

std::size_t resolve_k0star(const DetectFlags& d) {
    if (d.k0_star >= 0) return static_cast<std::size_t>(d.k0_star);
    double raw = d.k0c * std::pow(static_cast<double>(d.k_star), d.k0exp);
    if (!std::isfinite(raw) || raw < 0.0)
        throw config_error("k0star rule gave a non-usable value; set --k0star explicitly");
    auto v = static_cast<long long>(std::floor(raw));
    long long cap = static_cast<long long>(d.k) - 2;
    if (cap < 0) cap = 0;
    if (v > cap) v = cap;
    return static_cast<std::size_t>(v);
}

DetectorConfig make_config(const DetectFlags& d) {
    DetectorConfig cfg;
    cfg.k = d.k;
    cfg.k_star = d.k_star;
    cfg.k0_star = resolve_k0star(d);
    cfg.max_regimes = d.regimes;
    cfg.a = d.a;
    cfg.q = d.q;
    cfg.xi_override = d.xi;
    return cfg;
}

LowerTransform parse_transform(const std::string& s) {
    if (s == "reciprocal") return LowerTransform::Reciprocal;
    if (s == "negate") return LowerTransform::Negate;
    return LowerTransform::Auto;
}

void write_output(const std::string& path, const std::string& text) {
    if (path == "-") {
        std::fwrite(text.data(), 1, text.size(), stdout);
        return;
    }
    std::ofstream f(path, std::ios::binary);
    if (!f) throw input_error("cannot open output file: " + path);
    f << text;
    if (!f) throw input_error("failed writing output file: " + path);
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

std::vector<double> parse_double_list(const std::string& text, const char* what) {
    std::vector<double> out;
    for (const std::string& cell : cli::split_csv_line(text)) {
        std::string t = cli::strip_ws(cell);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
        if (ec != std::errc() || ptr != t.data() + t.size())
            throw config_error(std::string(what) + ": '" + t + "' is not numeric");
        out.push_back(v);
    }
    return out;
}

std::vector<std::size_t> parse_size_list(const std::string& text, const char* what) {
    std::vector<std::size_t> out;
    for (double v : parse_double_list(text, what)) {
        if (v < 0 || v != std::floor(v))
            throw config_error(std::string(what) + " entries must be non-negative integers");
        out.push_back(static_cast<std::size_t>(v));
    }
    return out;
}

DistributionSpec parse_dist(const std::string& name, const std::string& params) {
    std::vector<double> p = parse_double_list(params, "--params");
    auto need = [&](std::size_t m) {
        if (p.size() != m)
            throw config_error("distribution '" + name + "' expects " + std::to_string(m) +
                               " parameters; got " + std::to_string(p.size()));
    };
    if (name == "half-t") {
        need(1);
        return DistributionSpec::half_t(p[0]);
    }
    if (name == "burr") {
        need(3);
        return DistributionSpec::burr(p[0], p[1], p[2]);
    }
    if (name == "lognormal") {
        need(2);
        return DistributionSpec::lognormal(p[0], p[1]);
    }
    if (name == "normal") {
        need(2);
        return DistributionSpec::normal(p[0], p[1]);
    }
    if (name == "weibull") {
        need(2);
        return DistributionSpec::weibull(p[0], p[1]);
    }
    if (name == "beta") {
        need(2);
        return DistributionSpec::beta(p[0], p[1]);
    }
    if (name == "reverse-burr") {
        if (p.size() == 3) return DistributionSpec::reverse_burr(p[0], p[1], p[2]);
        need(4);
        return DistributionSpec::reverse_burr(p[0], p[1], p[2], p[3]);
    }
    throw config_error("unknown distribution '" + name +
                       "' (choices: half-t, burr, lognormal, normal, weibull, beta, "
                       "reverse-burr)");
}

InjectionSpec parse_injection(const std::string& text) {
    auto colon = text.find(':');
    if (colon == std::string::npos)
        throw config_error("--inject expects kind:k0, e.g. exp:10 or scale:10");
    std::string kind = text.substr(0, colon);
    std::vector<std::size_t> k0 = parse_size_list(text.substr(colon + 1), "--inject k0");
    if (k0.size() != 1) throw config_error("--inject expects a single k0");
    InjectionSpec inj;
    inj.k0 = k0[0];
    if (kind == "exp")
        inj.kind = InjectionKind::Exponentiated;
    else if (kind == "scale")
        inj.kind = InjectionKind::Scaled;
    else
        throw config_error("--inject kind must be exp or scale; got '" + kind + "'");
    return inj;
}

void echo_config(JsonWriter& j, const InputFlags& in, const DetectFlags& d,
                 std::size_t k0star) {
    j.begin_object("config");
    j.field("input", in.input);
    j.field("column", in.column);
    j.field("k", d.k);
    j.field("kstar", d.k_star);
    j.field("k0star", k0star);
    j.field("regimes", d.regimes);
    j.field("a", d.a);
    j.field("q", d.q);
    if (d.xi) j.field("xi", *d.xi);
    j.field("tail", d.tail);
    j.field("transform", d.transform);
    j.field("dither", in.dither);
    j.field("seed", static_cast<std::size_t>(in.seed));
    j.end_object();
}

void emit_tail(JsonWriter& j, const char* key, const TailOutcome& out,
               const char* whisker_key, double whisker,
               const std::vector<std::size_t>& idx, const OrderedSample& s) {
    j.begin_object(key);
    if (out.result) {
        const DetectorResult& r = *out.result;
        j.field("ok", true);
        j.field("xi_initial", r.xi_initial);
        j.field("k0_stage0", r.k0_stage0);
        j.field("xi_hat", r.xi_hat);
        j.field("k0_stage1", r.k0_stage1);
        j.begin_array("significant");
        for (std::size_t v : r.significant) j.element(v);
        j.end_array();
        j.begin_array("regimes");
        for (const Regime& reg : r.regimes) {
            j.begin_object();
            j.field("lo", reg.lo);
            j.field("hi", reg.hi);
            j.field("score", reg.score);
            j.end_object();
        }
        j.end_array();
        j.begin_array("u_trace");
        for (double u : r.u_trace) j.element(u);
        j.end_array();
        j.field(whisker_key, whisker);
        j.begin_array("outlier_indices");
        for (std::size_t i : idx) j.element(i);
        j.end_array();
        j.begin_array("outlier_values");
        for (std::size_t i : idx) j.element(s.values()[i]);
        j.end_array();
    } else {
        j.field("ok", false);
        j.field("error", out.error);
    }
    j.end_object();
}

struct BoxRun {
    TailAdjustedBoxplot box;
    bool want_upper = true;
    bool want_lower = true;
    std::string lower_transform = "none";
};

// Runs the boxplot assembly and re-raises a typed error when every requested
// tail failed, so the process exits with the underlying error's code instead
// of reporting an all-error document as success.
BoxRun run_tails(const OrderedSample& s, const DetectFlags& d, const DetectorConfig& cfg) {
    BoxRun run;
    run.want_upper = d.tail != "lower";
    run.want_lower = d.tail != "upper";
    LowerTransform how = parse_transform(d.transform);
    run.box = tail_adjusted_boxplot(s, cfg, cfg, how);

    bool up_ok = run.box.upper.result.has_value();
    bool lo_ok = run.box.lower.result.has_value();
    bool any_ok = (run.want_upper && up_ok) || (run.want_lower && lo_ok);
    if (!any_ok) {
        if (run.want_upper) detect(s, cfg);
        detect(transform_lower(s, how), cfg);
    }
    if (run.want_lower && lo_ok)
        run.lower_transform =
            (how == LowerTransform::Reciprocal ||
             (how == LowerTransform::Auto && s.values().front() > 0.0))
                ? "reciprocal"
                : "negated";
    return run;
}

int cmd_analyze(const InputFlags& in, const DetectFlags& d) {
    OrderedSample s = OrderedSample::ingest(cli::read_csv_column(in.input, in.column),
                                            in.dither, in.seed);
    DetectorConfig cfg = make_config(d);
    BoxRun run = run_tails(s, d, cfg);

    QuartileSummary qs = run.box.quartiles;
    std::vector<bool> flags = classical_flags(s);

    JsonWriter j;
    j.begin_object();
    j.field("command", "analyze");
    echo_config(j, in, d, cfg.k0_star);
    j.begin_object("input");
    j.field("path", in.input);
    j.field("column", in.column);
    j.field("n", s.size());
    j.field("dither", in.dither);
    j.field("seed", static_cast<std::size_t>(in.seed));
    j.end_object();
    j.begin_object("quartiles");
    j.field("q1", qs.q1);
    j.field("median", qs.median);
    j.field("q3", qs.q3);
    j.field("iqr", qs.iqr);
    j.field("lower_fence", qs.lower_fence);
    j.field("upper_fence", qs.upper_fence);
    j.end_object();
    j.begin_object("classical");
    j.begin_array("low");
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i] && s.values()[i] < qs.lower_fence) j.element(i);
    j.end_array();
    j.begin_array("high");
    for (std::size_t i = 0; i < flags.size(); ++i)
        if (flags[i] && s.values()[i] > qs.upper_fence) j.element(i);
    j.end_array();
    j.end_object();
    j.field("transform_lower", run.lower_transform);
    if (run.want_upper)
        emit_tail(j, "upper", run.box.upper, "whisker_high", run.box.whisker_high,
                  run.box.upper_outliers, s);
    if (run.want_lower)
        emit_tail(j, "lower", run.box.lower, "whisker_low", run.box.whisker_low,
                  run.box.lower_outliers, s);
    j.end_object();
    write_output(in.output, j.take());
    return 0;
}

int cmd_boxplot(const InputFlags& in, const DetectFlags& d, const std::string& format) {
    OrderedSample s = OrderedSample::ingest(cli::read_csv_column(in.input, in.column),
                                            in.dither, in.seed);
    DetectorConfig cfg = make_config(d);
    BoxRun run = run_tails(s, d, cfg);
    const TailAdjustedBoxplot& box = run.box;
    const QuartileSummary& qs = box.quartiles;

    if (format == "csv") {
        std::string out = "item,value\n";
        auto row = [&](const char* k, double v) {
            out += std::string(k) + "," + fmt17(v) + "\n";
        };
        row("q1", qs.q1);
        row("median", qs.median);
        row("q3", qs.q3);
        row("iqr", qs.iqr);
        row("lower_fence", qs.lower_fence);
        row("upper_fence", qs.upper_fence);
        row("whisker_low", box.whisker_low);
        row("whisker_high", box.whisker_high);
        row("upper_ok", box.upper.result ? 1 : 0);
        row("lower_ok", box.lower.result ? 1 : 0);
        for (std::size_t i : box.upper_outliers) row("upper_outlier", s.values()[i]);
        for (std::size_t i : box.lower_outliers) row("lower_outlier", s.values()[i]);
        write_output(in.output, out);
        return 0;
    }

    const auto& v = s.values();
    SvgPlot plot(v.front(), v.back(), 0.0, 1.0);
    plot.add_rect(qs.q1, 0.35, qs.q3, 0.65, "black");
    plot.add_line(qs.median, 0.35, qs.median, 0.65, "black");
    plot.add_line(box.whisker_low, 0.5, qs.q1, 0.5, "black");
    plot.add_line(qs.q3, 0.5, box.whisker_high, 0.5, "black");
    plot.add_line(box.whisker_low, 0.42, box.whisker_low, 0.58, "black");
    plot.add_line(box.whisker_high, 0.42, box.whisker_high, 0.58, "black");
    std::vector<std::pair<double, double>> pts;
    for (std::size_t i : box.upper_outliers) pts.push_back({v[i], 0.5});
    for (std::size_t i : box.lower_outliers) pts.push_back({v[i], 0.5});
    plot.add_points(pts, "#d62728");
    write_output(in.output, plot.render(in.column, ""));
    return 0;
}

int cmd_qqplot(const InputFlags& in, const std::string& kind, const std::string& format,
               std::size_t fit_k) {
    OrderedSample s = OrderedSample::ingest(cli::read_csv_column(in.input, in.column),
                                            in.dither, in.seed);
    QQKind qk = kind == "exponential" ? QQKind::Exponential
                : kind == "pareto"    ? QQKind::Pareto
                                      : QQKind::Generalized;
    std::vector<QQPoint> pts = qq_points(s, qk);

    if (format == "csv") {
        std::string out = "x,y\n";
        for (const QQPoint& p : pts) out += fmt17(p.x) + "," + fmt17(p.y) + "\n";
        write_output(in.output, out);
        return 0;
    }

    if (fit_k == 0)
        fit_k = std::max<std::size_t>(2, std::min(pts.size(), s.size() / 10));
    if (fit_k < 2 || fit_k > pts.size())
        throw config_error("--k for the fitted line must lie in [2, " +
                           std::to_string(pts.size()) + "]");

    double xlo = pts.front().x, xhi = pts.front().x;
    double ylo = pts.front().y, yhi = pts.front().y;
    std::vector<std::pair<double, double>> draw;
    for (const QQPoint& p : pts) {
        draw.push_back({p.x, p.y});
        xlo = std::min(xlo, p.x);
        xhi = std::max(xhi, p.x);
        ylo = std::min(ylo, p.y);
        yhi = std::max(yhi, p.y);
    }

    // OLS through the deepest fit_k points (j = 1..fit_k come first).
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < fit_k; ++i) {
        sx += pts[i].x;
        sy += pts[i].y;
        sxx += pts[i].x * pts[i].x;
        sxy += pts[i].x * pts[i].y;
    }
    double m = static_cast<double>(fit_k);
    double denom = m * sxx - sx * sx;
    double slope = denom != 0.0 ? (m * sxy - sx * sy) / denom : 0.0;
    double inter = (sy - slope * sx) / m;
    double fx1 = pts[fit_k - 1].x, fx2 = pts[0].x;

    SvgPlot plot(xlo, xhi, ylo, yhi);
    plot.add_points(draw, "#1f77b4");
    plot.add_line(fx1, inter + slope * fx1, fx2, inter + slope * fx2, "#d62728");
    write_output(in.output, plot.render("theoretical quantile", in.column));
    return 0;
}

int cmd_diagnostic(const InputFlags& in, const std::string& klist, std::size_t k0max,
                   const std::string& format) {
    OrderedSample s = OrderedSample::ingest(cli::read_csv_column(in.input, in.column),
                                            in.dither, in.seed);
    std::vector<std::size_t> ks = parse_size_list(klist, "--k");
    std::vector<DiagnosticCell> cells = diagnostic_k0_series(s, ks, k0max);

    if (format == "csv") {
        std::string out = "k,k0,gh,error\n";
        for (const DiagnosticCell& c : cells) {
            out += std::to_string(c.k) + "," + std::to_string(c.k0) + ",";
            if (c.gh) out += fmt17(*c.gh);
            out += "," + csv_quote(c.error) + "\n";
        }
        write_output(in.output, out);
        return 0;
    }

    static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd",
                                   "#ff7f0e", "#8c564b"};
    double ylo = 0, yhi = 0;
    bool seen = false;
    for (const DiagnosticCell& c : cells)
        if (c.gh) {
            ylo = seen ? std::min(ylo, *c.gh) : *c.gh;
            yhi = seen ? std::max(yhi, *c.gh) : *c.gh;
            seen = true;
        }
    if (!seen) throw numeric_error("no diagnostic cell could be computed");
    SvgPlot plot(0.0, static_cast<double>(k0max), ylo, yhi);
    std::size_t ci = 0;
    for (std::size_t k : ks) {
        std::vector<std::pair<double, double>> line;
        for (const DiagnosticCell& c : cells)
            if (c.k == k && c.gh)
                line.push_back({static_cast<double>(c.k0), *c.gh});
        plot.add_polyline(line, colors[ci++ % 6]);
    }
    write_output(in.output, plot.render("k0", "generalized Hill"));
    return 0;
}

struct SimulateFlags {
    std::string dist;
    std::string params;
    std::size_t n = 1000;
    std::size_t reps = 0;
    std::string klist;
    std::string kstarlist;
    long long k0_star = -1;
    double k0c = 7.0;
    double k0exp = 1.0 / 3.0;
    double a = 1.2;
    double q = 0.05;
    std::optional<double> xi;
    std::string inject;
    std::string intensity = "1";
    unsigned threads = 1;
    std::uint64_t seed = 1;
    std::string output = "-";
};

int cmd_simulate(const SimulateFlags& f) {
    DistributionSpec dist = parse_dist(f.dist, f.params);
    std::vector<std::size_t> ks = parse_size_list(f.klist, "--k");
    std::vector<std::size_t> kstars;
    if (!f.kstarlist.empty()) kstars = parse_size_list(f.kstarlist, "--kstar");
    std::vector<double> intensities = parse_double_list(f.intensity, "--intensity");
    std::optional<InjectionSpec> inj;
    if (!f.inject.empty()) inj = parse_injection(f.inject);
    if (f.inject.empty() && f.intensity != "1")
        throw config_error("--intensity needs --inject");
    if (ks.empty()) throw config_error("--k list must not be empty");
    if (f.reps < 1) throw config_error("--reps must be at least 1");

    std::string out =
        "distribution,k,kstar,k0star,intensity,reps,type1_rate,mean_k0,sd_k0,failures\n";
    for (std::size_t k : ks) {
        std::vector<std::size_t> row_kstars = kstars.empty()
                                                  ? std::vector<std::size_t>{k}
                                                  : kstars;
        for (std::size_t kstar : row_kstars) {
            for (double intensity : intensities) {
                DetectFlags d;
                d.k = k;
                d.k_star = kstar;
                d.k0_star = f.k0_star;
                d.k0c = f.k0c;
                d.k0exp = f.k0exp;
                d.a = f.a;
                d.q = f.q;
                d.xi = f.xi;
                DetectorConfig cfg = make_config(d);
                std::optional<InjectionSpec> cell_inj = inj;
                if (cell_inj) cell_inj->intensity = intensity;
                StudyMetrics m =
                    run_study(dist, cell_inj, cfg, f.n, f.reps, f.seed, f.threads);
                out += csv_quote(dist.name()) + "," + std::to_string(k) + "," +
                       std::to_string(kstar) + "," + std::to_string(cfg.k0_star) + "," +
                       fmt17(intensity) + "," + std::to_string(f.reps) + "," +
                       fmt17(m.type1_rate) + "," + fmt17(m.mean_k0) + "," +
                       fmt17(m.sd_k0) + "," + std::to_string(m.failures) + "\n";
            }
        }
    }
    write_output(f.output, out);
    return 0;
}

std::vector<std::size_t> parse_grid(const std::string& text) {
    if (text.find(':') == std::string::npos) return parse_size_list(text, "--grid");
    std::vector<std::string> parts;
    std::string cur;
    for (char c : text) {
        if (c == ':') {
            parts.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(cur);
    if (parts.size() != 3) throw config_error("--grid expects lo:hi:step or a comma list");
    std::size_t lo = parse_size_list(parts[0], "--grid")[0];
    std::size_t hi = parse_size_list(parts[1], "--grid")[0];
    std::size_t step = parse_size_list(parts[2], "--grid")[0];
    if (step == 0 || hi < lo) throw config_error("--grid needs lo <= hi and step > 0");
    std::vector<std::size_t> out;
    for (std::size_t k = lo; k <= hi; k += step) out.push_back(k);
    return out;
}

int cmd_kopt(const std::string& dist_name, const std::string& params, std::size_t n,
             const std::string& grid, std::size_t reps, std::uint64_t seed,
             const std::string& output) {
    DistributionSpec dist = parse_dist(dist_name, params);
    KOptResult res = estimate_k_opt(dist, n, parse_grid(grid), reps, seed);
    std::string out = "k,variance,failures,skipped,selected\n";
    for (const KOptCell& c : res.cells) {
        out += std::to_string(c.k) + "," + (c.skipped ? "" : fmt17(c.variance)) + "," +
               std::to_string(c.failures) + "," + (c.skipped ? "1" : "0") + "," +
               (!c.skipped && c.k == res.k_opt ? "1" : "0") + "\n";
    }
    write_output(output, out);
    return 0;
}

std::string strip_blanks(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

// CLI11 applies a config file only on the app parse() ran on, never on a
// subcommand, so the key=value file named by --config is expanded into
// ordinary --key=value tokens up front. Explicit flags win over file entries.
std::vector<std::string> expand_config_args(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    static const char* const names[] = {"analyze",    "boxplot",  "qqplot",
                                        "diagnostic", "simulate", "kopt"};
    std::size_t at = args.size();
    for (std::size_t i = 0; i < args.size() && at == args.size(); ++i)
        for (const char* name : names)
            if (args[i] == name) at = i;
    if (at == args.size()) return args;

    std::string path;
    for (std::size_t i = at + 1; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            path = args[i].substr(9);
    }
    if (path.empty()) return args;

    std::ifstream file(path);
    if (!file) throw input_error("cannot open config file: " + path);

    std::vector<std::string> given;
    for (std::size_t i = at + 1; i < args.size(); ++i)
        if (args[i].rfind("--", 0) == 0)
            given.push_back(args[i].substr(0, args[i].find('=')));

    std::vector<std::pair<std::string, std::string>> entries;
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(file, line)) {
        ++lineno;
        std::string text = strip_blanks(line);
        if (text.empty() || text[0] == '#' || text[0] == ';' || text[0] == '[')
            continue;
        std::size_t eq = text.find('=');
        std::string key =
            eq == std::string::npos ? "" : strip_blanks(text.substr(0, eq));
        if (key.empty())
            throw config_error(path + " line " + std::to_string(lineno) +
                               ": expected key=value");
        std::string value = strip_blanks(text.substr(eq + 1));
        if (value.size() >= 2 && (value.front() == '"' || value.front() == '\'') &&
            value.back() == value.front())
            value = value.substr(1, value.size() - 2);
        auto match = std::find_if(entries.begin(), entries.end(),
                                  [&](const auto& e) { return e.first == key; });
        if (match != entries.end())
            match->second = value;
        else
            entries.emplace_back(key, value);
    }

    std::vector<std::string> extra;
    for (const auto& [key, value] : entries)
        if (std::find(given.begin(), given.end(), "--" + key) == given.end())
            extra.push_back("--" + key + "=" + value);
    args.insert(args.begin() + at + 1, extra.begin(), extra.end());
    return args;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Tail-aware outlier detection for heavy, light and bounded tails"};
    app.require_subcommand(1);

    InputFlags a_in;
    DetectFlags a_det;
    auto* analyze = app.add_subcommand("analyze", "full detection report (JSON)");
    add_input_flags(analyze, a_in);
    add_detect_flags(analyze, a_det);
    analyze->set_config("--config", "", "key=value file with this command's options");
    analyze->callback([&] { cmd_analyze(a_in, a_det); });

    InputFlags b_in;
    DetectFlags b_det;
    std::string b_format = "csv";
    auto* boxplot = app.add_subcommand("boxplot", "tail-adjusted boxplot geometry");
    add_input_flags(boxplot, b_in);
    add_detect_flags(boxplot, b_det);
    boxplot->add_option("--format", b_format, "csv or svg")
        ->check(CLI::IsMember({"csv", "svg"}))
        ->capture_default_str();
    boxplot->set_config("--config", "", "key=value file with this command's options");
    boxplot->callback([&] { cmd_boxplot(b_in, b_det, b_format); });

    InputFlags q_in;
    std::string q_kind = "pareto";
    std::string q_format = "csv";
    std::size_t q_fit_k = 0;
    auto* qqplot = app.add_subcommand("qqplot", "QQ-plot point table or SVG");
    add_input_flags(qqplot, q_in);
    qqplot->add_option("--kind", q_kind, "exponential, pareto or generalized")
        ->check(CLI::IsMember({"exponential", "pareto", "generalized"}))
        ->capture_default_str();
    qqplot->add_option("--format", q_format, "csv or svg")
        ->check(CLI::IsMember({"csv", "svg"}))
        ->capture_default_str();
    qqplot->add_option("--k", q_fit_k, "points used by the fitted line (0 = n/10)");
    qqplot->set_config("--config", "", "key=value file with this command's options");
    qqplot->callback([&] { cmd_qqplot(q_in, q_kind, q_format, q_fit_k); });

    InputFlags d_in;
    std::string d_klist;
    std::size_t d_k0max = 30;
    std::string d_format = "csv";
    auto* diag = app.add_subcommand("diagnostic", "trimmed generalized-Hill k0 series");
    add_input_flags(diag, d_in);
    diag->add_option("--k", d_klist, "comma list of k values")->required();
    diag->add_option("--k0max", d_k0max, "largest trimming level")->capture_default_str();
    diag->add_option("--format", d_format, "csv or svg")
        ->check(CLI::IsMember({"csv", "svg"}))
        ->capture_default_str();
    diag->set_config("--config", "", "key=value file with this command's options");
    diag->callback([&] { cmd_diagnostic(d_in, d_klist, d_k0max, d_format); });

    SimulateFlags s_f;
    auto* simulate = app.add_subcommand("simulate", "Monte Carlo study grid (CSV)");
    simulate->add_option("--dist", s_f.dist, "distribution family")->required();
    simulate->add_option("--params", s_f.params, "comma list of family parameters")
        ->required();
    simulate->add_option("--n", s_f.n, "sample size per replication")
        ->capture_default_str();
    simulate->add_option("--reps", s_f.reps, "replications per cell")->required();
    simulate->add_option("--k", s_f.klist, "comma list of test depths")->required();
    simulate->add_option("--kstar", s_f.kstarlist,
                         "comma list of estimation depths (default: k)");
    simulate->add_option("--k0star", s_f.k0_star,
                         "scan bound; default floor(k0c * kstar^k0exp) clamped to k-2");
    simulate->add_option("--k0c", s_f.k0c, "constant of the default k0star rule")
        ->capture_default_str();
    simulate->add_option("--k0exp", s_f.k0exp, "exponent of the default k0star rule")
        ->capture_default_str();
    simulate->add_option("--a", s_f.a, "schedule decay base")->capture_default_str();
    simulate->add_option("--q", s_f.q, "overall significance budget")
        ->capture_default_str();
    simulate->add_option("--xi", s_f.xi, "tail index override");
    simulate->add_option("--inject", s_f.inject, "outlier injection, kind:k0");
    simulate->add_option("--intensity", s_f.intensity,
                         "comma list of injection intensities")
        ->capture_default_str();
    simulate->add_option("--threads", s_f.threads, "worker threads")
        ->capture_default_str();
    simulate->add_option("--seed", s_f.seed, "master seed")->capture_default_str();
    simulate->add_option("--output", s_f.output, "output path, - for stdout")
        ->capture_default_str();
    simulate->set_config("--config", "", "key=value file with this command's options");
    simulate->callback([&] { cmd_simulate(s_f); });

    std::string ko_dist, ko_params, ko_grid, ko_output = "-";
    std::size_t ko_n = 1000, ko_reps = 0;
    std::uint64_t ko_seed = 1;
    auto* kopt = app.add_subcommand("kopt", "variance-minimizing k search (CSV)");
    kopt->add_option("--dist", ko_dist, "distribution family")->required();
    kopt->add_option("--params", ko_params, "comma list of family parameters")->required();
    kopt->add_option("--n", ko_n, "sample size per replication")->capture_default_str();
    kopt->add_option("--grid", ko_grid, "k grid: lo:hi:step or comma list")->required();
    kopt->add_option("--reps", ko_reps, "replications")->required();
    kopt->add_option("--seed", ko_seed, "master seed")->capture_default_str();
    kopt->add_option("--output", ko_output, "output path, - for stdout")
        ->capture_default_str();
    kopt->set_config("--config", "", "key=value file with this command's options");
    kopt->callback([&] { cmd_kopt(ko_dist, ko_params, ko_n, ko_grid, ko_reps, ko_seed,
                                  ko_output); });

    try {
        if (argc > 0) app.name(argv[0]);
        std::vector<std::string> args = expand_config_args(argc, argv);
        std::reverse(args.begin(), args.end());
        app.parse(std::move(args));
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 3;
    } catch (const evtail::input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const evtail::config_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
