#ifndef BETALPP_ERRORS_HPP
#define BETALPP_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace betalpp {

/// A parameter lies outside the domain of a law or function (e.g. shape <= 0).
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

/// Caller misuse: malformed ranges, empty inputs, dimension mismatches.
class UsageError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// An iterative numeric routine failed to converge. Carries the last bracket.
class NumericFailure : public std::runtime_error {
public:
    NumericFailure(const std::string& what, double lo, double hi)
        : std::runtime_error(what), lo_(lo), hi_(hi) {}

    double bracket_lo() const noexcept { return lo_; }
    double bracket_hi() const noexcept { return hi_; }

private:
    double lo_;
    double hi_;
};

} // namespace betalpp

#endif // BETALPP_ERRORS_HPP
