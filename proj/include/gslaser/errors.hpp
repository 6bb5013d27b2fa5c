#pragma once

#include <stdexcept>
#include <string>

namespace gslaser {

// Error categories map 1:1 onto CLI exit codes (config=1, numerical=2, io=3).
enum class ErrorCategory { config = 1, numerical = 2, io = 3 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), category_(cat) {}

    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

class ConfigError : public Error {
public:
    explicit ConfigError(const std::string& msg) : Error(ErrorCategory::config, msg) {}
};

class NumericalError : public Error {
public:
    explicit NumericalError(const std::string& msg) : Error(ErrorCategory::numerical, msg) {}
};

class IoError : public Error {
public:
    explicit IoError(const std::string& msg) : Error(ErrorCategory::io, msg) {}
};

} // namespace gslaser
