#ifndef QBARRIER_SPECFUN_HPP
#define QBARRIER_SPECFUN_HPP


#include "qbarrier/errors.hpp"

namespace qbarrier::specfun {

/// Value plus a heuristic (term-magnitude based) absolute error bound.
/// The bound is an engineering estimate for desk-scale validation, not a
/// rigorous interval.
struct EvalReport {
    double value = 0.0;
    double abs_error_bound = 0.0;
};

// ln(n!). Exact integer factorial below 21, long-double lgamma above;
// near correctly rounded over the supported range n <= 1e6.
double log_factorial(int n);
EvalReport log_factorial_report(int n);

// Generalized Laguerre polynomial L_n^alpha(x) for integer alpha.
//
// alpha >= 0 uses the three-term recurrence in the degree (stable for the
// oscillatory regime this library works in). A negative upper index is
// supported for alpha = -m with m <= n through
//   L_n^{-m}(x) = (-x)^m ((n-m)!/n!) L_{n-m}^m(x),
// which is exactly the regime the transition amplitudes need.
// Throws DomainError for n < 0 or alpha < -n.
double laguerre(int n, int alpha, double x);
EvalReport laguerre_report(int n, int alpha, double x);

// Bessel function of the first kind J_n(x), integer order, |x| <= 1e4.
//
// Computed by backward (Miller) recurrence normalized through
// J_0 + 2*sum J_{2k} = 1. The recurrence start depends only on (|n|, |x|),
// so a value never depends on what else is evaluated around it, and
// J_{-n}(x) = (-1)^n J_n(x) holds as an exact sign flip.
// Throws DomainError when |x| exceeds the supported range.
double bessel_j(int n, double x);
EvalReport bessel_j_report(int n, double x);

} // namespace qbarrier::specfun

#endif
