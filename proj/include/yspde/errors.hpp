#pragma once

#include <stdexcept>
#include <string>

namespace yspde {

/// Error categories map onto CLI exit codes: config=2, numerical=3, io=4.
enum class ErrorCategory { Config = 2, Numerical = 3, Io = 4 };

class Error : public std::runtime_error {
public:
    Error(ErrorCategory cat, const std::string& msg)
        : std::runtime_error(msg), category_(cat) {}
    ErrorCategory category() const { return category_; }

private:
    ErrorCategory category_;
};

struct ConfigError : Error {
    explicit ConfigError(const std::string& msg) : Error(ErrorCategory::Config, msg) {}
};

struct NumericalError : Error {
    explicit NumericalError(const std::string& msg) : Error(ErrorCategory::Numerical, msg) {}
};

struct IoError : Error {
    explicit IoError(const std::string& msg) : Error(ErrorCategory::Io, msg) {}
};

}  // namespace yspde
