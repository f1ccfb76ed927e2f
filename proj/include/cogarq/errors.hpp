#pragma once

#include <stdexcept>
#include <string>

namespace cogarq {

/// Bad user-supplied configuration (unknown metric, negative epsilon, ...).
class ConfigError : public std::invalid_argument {
public:
    explicit ConfigError(const std::string& what) : std::invalid_argument(what) {}
};

/// A value that was required to satisfy a type invariant did not.
class InvariantError : public std::logic_error {
public:
    explicit InvariantError(const std::string& what) : std::logic_error(what) {}
};

/// Problem size exceeds what an exhaustive method is willing to do.
class BudgetError : public std::length_error {
public:
    explicit BudgetError(const std::string& what) : std::length_error(what) {}
};

/// f(lo) and f(hi) do not straddle zero.
class BracketError : public std::domain_error {
public:
    explicit BracketError(const std::string& what) : std::domain_error(what) {}
};

/// An optimization problem has no feasible point.
class InfeasibleError : public std::runtime_error {
public:
    explicit InfeasibleError(const std::string& what) : std::runtime_error(what) {}
};

/// A numerical routine failed to converge or produced an unusable result.
class NumericalError : public std::runtime_error {
public:
    explicit NumericalError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace cogarq
