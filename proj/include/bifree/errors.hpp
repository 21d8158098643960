#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace bifree {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Non-invertible constant terms, non-germ substitutions, exhausted precision.
class ArithmeticError : public Error {
public:
    using Error::Error;
};

// Malformed measure files, words, or CLI input.
class ParseError : public Error {
public:
    using Error::Error;
};

// Two derivations of the same quantity disagree. Always a bug, never a tolerance issue.
class ConsistencyError : public Error {
public:
    using Error::Error;
};

enum class Precondition {
    zero_first_moment_a,
    zero_first_moment_b,
    zero_mixed_moment,
    not_factoring,
    word_too_long,
};

const char* to_string(Precondition p);

// A standing hypothesis of an operation fails for the given input.
// `failures` names each failed condition, e.g. "phi(a1)=0".
class PreconditionError : public Error {
public:
    PreconditionError(Precondition kind, std::vector<std::string> failures);

    Precondition kind() const noexcept { return kind_; }
    const std::vector<std::string>& failures() const noexcept { return failures_; }

private:
    Precondition kind_;
    std::vector<std::string> failures_;
};

} // namespace bifree
