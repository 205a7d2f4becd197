#include "qbarrier/specfun.hpp"

#include "qbarrier/errors.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

namespace qbarrier::specfun {

namespace {

constexpr double kEps = std::numeric_limits<double>::epsilon();

// n! is exactly representable in a 64-bit double up to n = 20; beyond that
// the log-gamma route is the accurate one.
constexpr int kExactFactorialMax = 20;

double exact_factorial(int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k)
        f *= k;
    return f;
}

} // namespace

EvalReport log_factorial_report(int n) {
    if (n < 0)
        throw DomainError("log_factorial: n must be >= 0");
    if (n <= 1)
        return {0.0, 0.0};
    if (n <= kExactFactorialMax) {
        const double v = static_cast<double>(std::log(static_cast<long double>(exact_factorial(n))));
        return {v, 2.0 * kEps * v};
    }
    const double v = static_cast<double>(std::lgamma(static_cast<long double>(n) + 1.0L));
    // Long-double lgamma is good to ~1e-18 relative; the dominant error is the
    // final rounding to double.
    return {v, 2.0 * kEps * v};
}

double log_factorial(int n) {
    return log_factorial_report(n).value;
}

EvalReport laguerre_report(int n, int alpha, double x) {
    if (n < 0)
        throw DomainError("laguerre: degree must be >= 0");
    if (alpha < -n)
        throw DomainError("laguerre: upper index below -degree is outside the polynomial family");
    if (!std::isfinite(x))
        throw DomainError("laguerre: argument must be finite");

    if (alpha < 0) {
        // L_n^{-m}(x) = (-x)^m ((n-m)!/n!) L_{n-m}^{m}(x), valid for 0 < m <= n.
        const int m = -alpha;
        if (x == 0.0)
            return {0.0, 0.0};
        const EvalReport inner = laguerre_report(n - m, m, x);
        const double log_ratio = log_factorial(n - m) - log_factorial(n);
        const double log_scale = log_ratio + m * std::log(std::fabs(x));
        const double sign = (x > 0.0 && (m % 2 != 0)) ? -1.0 : 1.0;
        const double scale = sign * std::exp(log_scale);
        const double value = scale * inner.value;
        const double bound = std::fabs(scale) * inner.abs_error_bound +
                             std::fabs(value) * kEps * (std::fabs(log_scale) + 4.0);
        return {value, bound};
    }

    if (n == 0)
        return {1.0, 0.0};
    // Long-double accumulators: in the oscillatory region the intermediates
    // can exceed the final value by orders of magnitude, and the extra
    // precision keeps the relative error well inside the reported bound.
    const long double xl = x;
    long double lkm1 = 1.0L;
    long double lk = 1.0L + alpha - xl;
    double maxabs = std::max(1.0, std::fabs(static_cast<double>(lk)));
    for (int k = 1; k < n; ++k) {
        const long double lkp1 =
            ((2.0L * k + 1.0L + alpha - xl) * lk - (k + alpha) * lkm1) / (k + 1.0L);
        lkm1 = lk;
        lk = lkp1;
        maxabs = std::max(maxabs, std::fabs(static_cast<double>(lk)));
    }
    return {static_cast<double>(lk), (4.0 * n + 8.0) * kEps * maxabs};
}

double laguerre(int n, int alpha, double x) {
    return laguerre_report(n, alpha, x).value;
}

namespace {

// First terms of the ascending series, in log space so large orders underflow
// cleanly instead of tripping the recurrence on a near-zero argument.
EvalReport bessel_tiny_x(int n, double x) {
    if (x == 0.0)
        return {n == 0 ? 1.0 : 0.0, 0.0};
    const double t = 0.25 * x * x;
    const double lv = n * std::log(0.5 * x) - log_factorial(n);
    if (lv < -740.0)
        return {0.0, 1e-300};
    const double lead = std::exp(lv);
    const double value = lead * (1.0 - t / (n + 1.0));
    return {value, std::fabs(lead) * (t * t + 4.0 * kEps) + 1e-300};
}

// Backward (Miller) recurrence normalised by J_0 + 2*sum_{k even} J_k = 1.
// Fills out[0..n_max] for x > 0 and reports the step count for error bounds.
int miller_row(int n_max, double x, std::vector<double>& out) {
    const double m = std::max(static_cast<double>(n_max), std::ceil(x));
    const int start = static_cast<int>(m) + static_cast<int>(std::ceil(12.0 * std::sqrt(m + 1.0))) + 14;
    out.assign(n_max + 1, 0.0);
    double fkp1 = 0.0;
    double fk = 1e-30;
    double sum = 0.0;
    for (int k = start; k >= 1; --k) {
        const double fkm1 = (2.0 * k / x) * fk - fkp1;
        fkp1 = fk;
        fk = fkm1;
        const int cur = k - 1;
        if (cur <= n_max)
            out[cur] = fk;
        if (cur % 2 == 0)
            sum += (cur == 0) ? fk : 2.0 * fk;
        if (std::fabs(fk) > 1e250) {
            const double scale = 1e-250;
            fk *= scale;
            fkp1 *= scale;
            sum *= scale;
            for (double& v : out)
                v *= scale;
        }
    }
    for (double& v : out)
        v /= sum;
    return start;
}

} // namespace

EvalReport bessel_j_report(int n, double x) {
    if (!std::isfinite(x))
        throw DomainError("bessel_j: argument must be finite");
    if (std::fabs(x) > 1e4)
        throw DomainError("bessel_j: |x| above 1e4 is outside the supported range");
    // J_{-n}(x) = (-1)^n J_n(x) and J_n(-x) = (-1)^n J_n(x): fold both signs
    // out exactly before evaluating.
    double parity = 1.0;
    if (n < 0) {
        n = -n;
        if (n % 2 != 0)
            parity = -parity;
    }
    if (x < 0.0) {
        x = -x;
        if (n % 2 != 0)
            parity = -parity;
    }
    if (x < 1e-8) {
        EvalReport r = bessel_tiny_x(n, x);
        r.value *= parity;
        return r;
    }
    std::vector<double> row;
    const int steps = miller_row(n, x, row);
    const double value = parity * row[n];
    return {value, kEps * (steps + 8.0) * (1.0 + std::fabs(value))};
}

double bessel_j(int n, double x) {
    return bessel_j_report(n, x).value;
}

} // namespace qbarrier::specfun
