#pragma once

#include <cstdlib>
#include <iostream>
#include <stdexcept>
#include <string>

namespace illusolve {

// Bad user input: malformed files, out-of-range ids, invalid parameters.
struct input_error : std::runtime_error {
    explicit input_error(const std::string & m) : std::runtime_error(m) {}
};

// Parse failure in a text format; message carries the 1-based line number.
struct parse_error : input_error {
    int line;
    parse_error(int line_, const std::string & m)
        : input_error("line " + std::to_string(line_) + ": " + m), line(line_) {}
};

// Instance exceeds a solver's enumeration cap.
struct size_error : input_error {
    explicit size_error(const std::string & m) : input_error(m) {}
};

// Internal contract violated: infeasible mapped solution, broken invariant.
struct contract_error : std::logic_error {
    explicit contract_error(const std::string & m) : std::logic_error(m) {}
};

// Log levels: 0 = silent, 1 = warnings, 2 = info.
// Controlled by the ILLUSOLVE_LOG environment variable.
inline int log_level()
{
    static const int level = [] {
        const char * e = std::getenv("ILLUSOLVE_LOG");
        if (e == nullptr || *e == '\0')
            return 1;
        return std::atoi(e);
    }();
    return level;
}

inline void log_warn(const std::string & m)
{
    if (log_level() >= 1)
        std::cerr << "[illusolve] warning: " << m << "\n";
}

inline void log_info(const std::string & m)
{
    if (log_level() >= 2)
        std::cerr << "[illusolve] " << m << "\n";
}

} // namespace illusolve
