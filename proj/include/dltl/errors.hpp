#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace dltl {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
    virtual int exit_code() const { return 2; }
    virtual const char* kind() const { return "error"; }
};

class ParseError : public Error {
public:
    ParseError(const std::string& msg, std::size_t line, std::size_t col)
        : Error(msg + " at " + std::to_string(line) + ":" + std::to_string(col)),
          line(line), col(col), detail(msg) {}
    const char* kind() const override { return "parse"; }
    std::size_t line, col;
    std::string detail;
};

class ValidationError : public Error {
public:
    using Error::Error;
    const char* kind() const override { return "validation"; }
};

class InvariantViolation : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 3; }
    const char* kind() const override { return "invariant"; }
};

class BudgetExceeded : public Error {
public:
    using Error::Error;
    int exit_code() const override { return 4; }
    const char* kind() const override { return "budget"; }
};

}  // namespace dltl
