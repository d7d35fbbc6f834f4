#ifndef HOLTERISK_ERRORS_HPP
#define HOLTERISK_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace holterisk {

// Base class for everything thrown by this library.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Malformed input file or inconsistent data (bad CSV, bad labels, ...).
class FormatError : public Error {
public:
    explicit FormatError(const std::string& msg) : Error(msg) {}
};

// Bad configuration value or invalid argument from the caller.
class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(msg) {}
};

// A quantity cannot be computed because the data is too short/sparse.
class InsufficientDataError : public Error {
public:
    explicit InsufficientDataError(const std::string& msg) : Error(msg) {}
};

// Numeric or protocol failure inside selection/training/evaluation.
class PipelineError : public Error {
public:
    explicit PipelineError(const std::string& msg) : Error(msg) {}
};

} // namespace holterisk

#endif
