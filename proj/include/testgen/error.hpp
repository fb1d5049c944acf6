#pragma once

#include <stdexcept>
#include <string>

namespace testgen {

// Base for all tool-specific failures. Subclasses carry no extra state unless
// a caller needs it for recovery (line/column for parse errors).
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& what) : std::runtime_error(what) {}
};

class SyntaxError : public Error {
public:
    SyntaxError(const std::string& message, int line, int column)
        : Error(message + " (line " + std::to_string(line) + ", column " +
                std::to_string(column) + ")"),
          line_(line),
          column_(column) {}

    int line() const { return line_; }
    int column() const { return column_; }

private:
    int line_;
    int column_;
};

class ConfigError : public Error {
public:
    using Error::Error;
};

class IoError : public Error {
public:
    using Error::Error;
};

// Prompt assembly: the focal slot alone does not fit the token budget.
class BudgetExceededError : public Error {
public:
    using Error::Error;
};

class EmptyPlanError : public Error {
public:
    using Error::Error;
};

class EmptyUncoveredError : public Error {
public:
    using Error::Error;
};

// Gateway failures.
class TransportError : public Error {
public:
    using Error::Error;
};

class AuthError : public Error {
public:
    using Error::Error;
};

// Prompt rejected by the provider as too large.
class BudgetError : public Error {
public:
    using Error::Error;
};

class ReplayMissError : public Error {
public:
    using Error::Error;
};

// Sanitizer could not extract any parseable test content.
class UnsalvageableError : public Error {
public:
    using Error::Error;
};

class NotATestFileError : public Error {
public:
    using Error::Error;
};

}  // namespace testgen
