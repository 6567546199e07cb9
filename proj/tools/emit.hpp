#pragma once

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

namespace cli {

// 17 significant digits: enough for double round trips, so replayed configs
// and re-emitted tables are bit-identical.
inline std::string fmt17(double x) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

inline std::string fmt_px(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.2f", x);
    return buf;
}

inline std::string fmt_tick(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.4g", x);
    return buf;
}

inline std::string json_escape(const std::string& s) {
    std::string out;
    out.reserve(s.size() + 8);
    for (unsigned char c : s) {
        switch (c) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\r': out += "\\r"; break;
        case '\t': out += "\\t"; break;
        default:
            if (c < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", c);
                out += buf;
            } else {
                out += static_cast<char>(c);
            }
        }
    }
    return out;
}

// Streaming JSON emitter with fixed key order and 2-space indentation;
// the output is a pure function of the emit calls.
class JsonWriter {
public:
    JsonWriter() { first_.push_back(true); }

    void begin_object() { open('{', nullptr); }
    void begin_object(const char* key) { open('{', key); }
    void end_object() { close('}'); }
    void begin_array(const char* key) { open('[', key); }
    void end_array() { close(']'); }

    void field(const char* key, const std::string& v) {
        item(key, "\"" + json_escape(v) + "\"");
    }
    void field(const char* key, const char* v) { field(key, std::string(v)); }
    void field(const char* key, double v) { item(key, num(v)); }
    void field(const char* key, std::size_t v) { item(key, std::to_string(v)); }
    void field(const char* key, bool v) { item(key, v ? "true" : "false"); }

    void element(double v) { item(nullptr, num(v)); }
    void element(std::size_t v) { item(nullptr, std::to_string(v)); }

    std::string take() {
        buf_ += "\n";
        return std::move(buf_);
    }

private:
    static std::string num(double v) {
        if (std::isnan(v)) return "\"nan\"";
        if (std::isinf(v)) return v > 0 ? "\"inf\"" : "\"-inf\"";
        return fmt17(v);
    }

    void sep() {
        if (!first_.back()) buf_ += ",";
        first_.back() = false;
        if (!buf_.empty()) buf_ += "\n";
        buf_.append(2 * (first_.size() - 1), ' ');
    }

    void open(char ch, const char* key) {
        sep();
        if (key) {
            buf_ += "\"";
            buf_ += key;
            buf_ += "\": ";
        }
        buf_ += ch;
        first_.push_back(true);
    }

    void close(char ch) {
        bool empty = first_.back();
        first_.pop_back();
        if (!empty) {
            buf_ += "\n";
            buf_.append(2 * (first_.size() - 1), ' ');
        }
        buf_ += ch;
    }

    void item(const char* key, const std::string& text) {
        sep();
        if (key) {
            buf_ += "\"";
            buf_ += key;
            buf_ += "\": ";
        }
        buf_ += text;
    }

    std::string buf_;
    std::vector<bool> first_;
};

// Minimal static SVG scatter/line canvas: fixed size, margins, five ticks per
// axis, elements rendered in insertion order.
class SvgPlot {
public:
    SvgPlot(double xlo, double xhi, double ylo, double yhi) {
        pad(xlo, xhi);
        pad(ylo, yhi);
        xlo_ = xlo;
        xhi_ = xhi;
        ylo_ = ylo;
        yhi_ = yhi;
    }

    void add_points(const std::vector<std::pair<double, double>>& pts,
                    const char* color) {
        for (const auto& p : pts)
            body_ += "  <circle cx=\"" + fmt_px(px(p.first)) + "\" cy=\"" +
                     fmt_px(py(p.second)) + "\" r=\"2\" fill=\"" + color + "\"/>\n";
    }

    void add_line(double x1, double y1, double x2, double y2, const char* color) {
        body_ += "  <line x1=\"" + fmt_px(px(x1)) + "\" y1=\"" + fmt_px(py(y1)) +
                 "\" x2=\"" + fmt_px(px(x2)) + "\" y2=\"" + fmt_px(py(y2)) +
                 "\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }

    void add_rect(double x1, double y1, double x2, double y2, const char* color) {
        double X1 = px(std::min(x1, x2)), X2 = px(std::max(x1, x2));
        double Y1 = py(std::max(y1, y2)), Y2 = py(std::min(y1, y2));
        body_ += "  <rect x=\"" + fmt_px(X1) + "\" y=\"" + fmt_px(Y1) + "\" width=\"" +
                 fmt_px(X2 - X1) + "\" height=\"" + fmt_px(Y2 - Y1) +
                 "\" fill=\"none\" stroke=\"" + color + "\" stroke-width=\"1.5\"/>\n";
    }

    void add_polyline(const std::vector<std::pair<double, double>>& pts,
                      const char* color) {
        if (pts.empty()) return;
        body_ += "  <polyline fill=\"none\" stroke=\"" + std::string(color) +
                 "\" stroke-width=\"1.5\" points=\"";
        for (std::size_t i = 0; i < pts.size(); ++i) {
            if (i) body_ += " ";
            body_ += fmt_px(px(pts[i].first)) + "," + fmt_px(py(pts[i].second));
        }
        body_ += "\"/>\n";
    }

    std::string render(const std::string& xlabel, const std::string& ylabel) const {
        std::string out;
        out += "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"480\" "
               "viewBox=\"0 0 640 480\">\n";
        out += "  <rect x=\"0\" y=\"0\" width=\"640\" height=\"480\" fill=\"white\"/>\n";
        // axes
        out += axis_line(ML, 480.0 - MB, 640.0 - MR, 480.0 - MB);
        out += axis_line(ML, MT, ML, 480.0 - MB);
        // ticks and labels
        for (int i = 0; i <= 4; ++i) {
            double fx = xlo_ + (xhi_ - xlo_) * i / 4.0;
            double X = px(fx);
            out += axis_line(X, 480.0 - MB, X, 480.0 - MB + 5);
            out += "  <text x=\"" + fmt_px(X) + "\" y=\"" + fmt_px(480.0 - MB + 18) +
                   "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"middle\">" +
                   fmt_tick(fx) + "</text>\n";
            double fy = ylo_ + (yhi_ - ylo_) * i / 4.0;
            double Y = py(fy);
            out += axis_line(ML - 5, Y, ML, Y);
            out += "  <text x=\"" + fmt_px(ML - 8) + "\" y=\"" + fmt_px(Y + 4) +
                   "\" font-family=\"monospace\" font-size=\"11\" text-anchor=\"end\">" +
                   fmt_tick(fy) + "</text>\n";
        }
        out += "  <text x=\"" + fmt_px(ML + (640.0 - ML - MR) / 2) +
               "\" y=\"472\" font-family=\"monospace\" font-size=\"12\" "
               "text-anchor=\"middle\">" +
               xlabel + "</text>\n";
        out += "  <text x=\"14\" y=\"" + fmt_px(MT + (480.0 - MT - MB) / 2) +
               "\" font-family=\"monospace\" font-size=\"12\" text-anchor=\"middle\" "
               "transform=\"rotate(-90 14 " +
               fmt_px(MT + (480.0 - MT - MB) / 2) + ")\">" + ylabel + "</text>\n";
        out += body_;
        out += "</svg>\n";
        return out;
    }

private:
    static constexpr double ML = 64, MR = 16, MT = 16, MB = 48;

    static void pad(double& lo, double& hi) {
        if (!(hi > lo)) {
            double w = std::max(1.0, std::abs(lo));
            lo -= 0.5 * w;
            hi += 0.5 * w;
        } else {
            double w = hi - lo;
            lo -= 0.05 * w;
            hi += 0.05 * w;
        }
    }

    static std::string axis_line(double x1, double y1, double x2, double y2) {
        return "  <line x1=\"" + fmt_px(x1) + "\" y1=\"" + fmt_px(y1) + "\" x2=\"" +
               fmt_px(x2) + "\" y2=\"" + fmt_px(y2) +
               "\" stroke=\"black\" stroke-width=\"1\"/>\n";
    }

    double px(double x) const {
        return ML + (x - xlo_) / (xhi_ - xlo_) * (640.0 - ML - MR);
    }
    double py(double y) const {
        return 480.0 - MB - (y - ylo_) / (yhi_ - ylo_) * (480.0 - MT - MB);
    }

    double xlo_, xhi_, ylo_, yhi_;
    std::string body_;
};

} // namespace cli
