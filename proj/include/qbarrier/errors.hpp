#ifndef QBARRIER_ERRORS_HPP
#define QBARRIER_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace qbarrier {

// Base class for all library errors.
class Error : public std::runtime_error {
public:
    explicit Error(const std::string& msg) : std::runtime_error(msg) {}
};

// Argument outside the supported domain (negative index, y >= 1, ...).
class DomainError : public Error {
public:
    explicit DomainError(const std::string& msg) : Error(msg) {}
};

// A truncated sum failed its tail-mass certificate.
class TruncationError : public Error {
public:
    explicit TruncationError(const std::string& msg) : Error(msg) {}
};

// An iterative scheme failed to reach its accuracy target.
class ConvergenceError : public Error {
public:
    explicit ConvergenceError(const std::string& msg) : Error(msg) {}
};

// A retained sideband has k_n^2 <= 0, violating the high-energy regime.
class EvanescentModeError : public Error {
public:
    explicit EvanescentModeError(const std::string& msg) : Error(msg) {}
};

// The requested quantity is degenerate for these parameters (e.g. a flat
// posterior at zero coupling); flagged instead of fabricated.
class DegenerateError : public Error {
public:
    explicit DegenerateError(const std::string& msg) : Error(msg) {}
};

// Parameters outside the validity regime of an asymptotic result.
class RegimeError : public Error {
public:
    explicit RegimeError(const std::string& msg) : Error(msg) {}
};

} // namespace qbarrier

#endif
