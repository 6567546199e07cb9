#pragma once

#include <stdexcept>
#include <string>

namespace evtail {

// Malformed user data: non-finite values, samples too small, CSV trouble.
// The CLI maps this to exit code 2.
class input_error : public std::runtime_error {
public:
    explicit input_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Parameter or configuration violations (k out of range, a <= 1, ...).
// The CLI maps this to exit code 3.
class config_error : public std::runtime_error {
public:
    explicit config_error(const std::string& msg) : std::runtime_error(msg) {}
};

// A computation left its numeric domain, e.g. a log of a non-positive
// order statistic. The CLI maps this to exit code 4.
class numeric_error : public std::runtime_error {
public:
    explicit numeric_error(const std::string& msg) : std::runtime_error(msg) {}
};

// Tied top order statistics make a log-spacing vanish, which starves the
// generalized-Hill chain. Dithering at ingestion is the remedy.
class tie_error : public numeric_error {
public:
    explicit tie_error(const std::string& msg) : numeric_error(msg) {}
};

} // namespace evtail
