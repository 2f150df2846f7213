#pragma once

#include <stdexcept>
#include <string>

namespace otto {

/// Input outside the physical domain of an operation (negative temperature,
/// zero frequency, ...).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Characteristic function evaluated on (or numerically at) a pole.
class PoleError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

class UnsupportedOrderError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Fock truncation too small for the requested accuracy. Carries the
/// truncation the caller should retry with.
class TruncationError : public std::runtime_error {
public:
    TruncationError(const std::string& what, int suggested_n_max)
        : std::runtime_error(what), suggested_n_max_(suggested_n_max) {}

    int suggested_n_max() const noexcept { return suggested_n_max_; }

private:
    int suggested_n_max_;
};

}  // namespace otto
