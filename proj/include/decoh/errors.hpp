#pragma once

#include <stdexcept>
#include <string>

namespace decoh {

// Exit-code contract of the CLI: 0 ok, 2 config/validation, 3 accuracy, 4 I/O.
enum class ExitCode : int { ok = 0, config = 2, accuracy = 3, io = 4 };

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual ExitCode exit_code() const noexcept { return ExitCode::accuracy; }
};

// Bad parameters, schema violations, unmet preconditions.
class ValidationError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::config; }
};

class ConfigError : public ValidationError {
public:
    ConfigError(const std::string& path, const std::string& what)
        : ValidationError(path + ": " + what), path_(path) {}
    const std::string& path() const noexcept { return path_; }

private:
    std::string path_;
};

class DimensionError : public ValidationError {
public:
    using ValidationError::ValidationError;
};

// Grid too coarse for some phase; the message names the axis and the requirement.
class ResolutionError : public Error {
public:
    using Error::Error;
};

// Field content reaches the edge of the periodic box.
class DomainError : public Error {
public:
    using Error::Error;
};

// Measured drift or residual above tolerance.
class AccuracyError : public Error {
public:
    using Error::Error;
};

class NumericalRangeError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
    ExitCode exit_code() const noexcept override { return ExitCode::io; }
};

}  // namespace decoh
