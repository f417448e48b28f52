#pragma once

#include <stdexcept>
#include <string>

namespace orlicz {

/// Argument outside the mathematical domain of an operation (negative s, NaN, empty set).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// A node index that does not support the requested stencil.
class IndexError : public std::out_of_range {
public:
    using std::out_of_range::out_of_range;
};

/// Problem data that violates a stated precondition (e.g. boundary data below the obstacle).
class ValidationError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Sampling could not decide a question (classification with a non-monotone tail, exhausted s-grid).
class InconclusiveError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace orlicz
