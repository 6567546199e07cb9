#pragma once

#include "evtail/errors.hpp"

#include <charconv>
#include <fstream>
#include <string>
#include <vector>

namespace cli {

inline std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            cells.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    cells.push_back(cur);
    return cells;
}

inline std::string strip_ws(const std::string& s) {
    std::size_t b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    std::size_t e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

// Reads one numeric column of a comma-separated file with a header row.
// Blank lines are skipped; every error names the offending 1-based row.
inline std::vector<double> read_csv_column(const std::string& path,
                                           const std::string& column) {
    std::ifstream f(path);
    if (!f) throw evtail::input_error("cannot open input file: " + path);

    std::string line;
    if (!std::getline(f, line)) throw evtail::input_error("empty input file: " + path);
    if (!line.empty() && line.back() == '\r') line.pop_back();

    std::vector<std::string> header = split_csv_line(line);
    std::size_t col = header.size();
    for (std::size_t i = 0; i < header.size(); ++i)
        if (strip_ws(header[i]) == column) {
            col = i;
            break;
        }
    if (col == header.size()) {
        std::string names;
        for (std::size_t i = 0; i < header.size(); ++i)
            names += (i ? ", " : "") + strip_ws(header[i]);
        throw evtail::input_error("column '" + column + "' not found in " + path +
                                  " (columns: " + names + ")");
    }

    std::vector<double> out;
    std::size_t row = 1;
    while (std::getline(f, line)) {
        ++row;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (strip_ws(line).empty()) continue;
        std::vector<std::string> cells = split_csv_line(line);
        if (col >= cells.size())
            throw evtail::input_error("row " + std::to_string(row) + ": missing column '" +
                                      column + "'");
        std::string cell = strip_ws(cells[col]);
        double v = 0.0;
        auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
        if (ec != std::errc() || ptr != cell.data() + cell.size())
            throw evtail::input_error("row " + std::to_string(row) + ": cell '" + cell +
                                      "' in column '" + column + "' is not numeric");
        out.push_back(v);
    }
    return out;
}

} // namespace cli
