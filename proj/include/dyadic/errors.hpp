#ifndef DYADIC_ERRORS_HPP
#define DYADIC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace dyadic {

/// Malformed external input (files, CLI arguments). Carries source location
/// when one is known, formatted as "<path>:<line>: <message>".
class parse_error : public std::runtime_error {
public:
    explicit parse_error(const std::string& msg) : std::runtime_error(msg) {}
    parse_error(const std::string& path, int line, const std::string& msg)
        : std::runtime_error(path + ":" + std::to_string(line) + ": " + msg) {}
};

/// A computed quantity violated an invariant the algorithm guarantees.
/// Indicates a bug in this library, not bad input.
class internal_error : public std::logic_error {
public:
    explicit internal_error(const std::string& msg) : std::logic_error(msg) {}
};

/// A structurally well-formed object failed a mathematical validity check
/// (e.g. an atom that is not an atom).
class validation_error : public std::runtime_error {
public:
    explicit validation_error(const std::string& msg) : std::runtime_error(msg) {}
};

} // namespace dyadic

#endif
