#pragma once

#include <stdexcept>
#include <string>

namespace risnoma {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
public:
    using Error::Error;
};

// Iterative evaluation did not converge within its budget.
class NumericFailure : public Error {
public:
    NumericFailure(const std::string& what, double partial, long terms)
        : Error(what + " (partial=" + std::to_string(partial) + ", terms=" + std::to_string(terms) + ")"),
          partial_(partial), terms_(terms) {}
    double partial() const noexcept { return partial_; }
    long terms() const noexcept { return terms_; }

private:
    double partial_;
    long terms_;
};

// Configuration rejected. line() is 0 when the problem is not tied to a line.
class ConfigError : public Error {
public:
    ConfigError(const std::string& what, int line = 0, std::string field = {})
        : Error(what), line_(line), field_(std::move(field)) {}
    int line() const noexcept { return line_; }
    const std::string& field() const noexcept { return field_; }

private:
    int line_;
    std::string field_;
};

class NotFoundError : public Error {
public:
    using Error::Error;
};

} // namespace risnoma
