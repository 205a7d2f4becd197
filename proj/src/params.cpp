#include "qbarrier/params.hpp"

#include <cmath>
#include <limits>

namespace qbarrier {

namespace {
constexpr double kEps = std::numeric_limits<double>::epsilon();
}

void validate(const ModelParams& p) {
    if (!(p.lambda_bar >= 0.0) || !std::isfinite(p.lambda_bar))
        throw DomainError("ModelParams: lambda_bar must be finite and >= 0");
    if (!(p.omega_tau >= 0.0) || !std::isfinite(p.omega_tau))
        throw DomainError("ModelParams: omega_tau must be finite and >= 0");
    if (!(p.e0_ratio > 0.0) || !std::isfinite(p.e0_ratio))
        throw DomainError("ModelParams: e0_ratio must be finite and > 0");
    if (!std::isfinite(p.phi) || !std::isfinite(p.phi_alpha))
        throw DomainError("ModelParams: phases must be finite");
}

double half_transit_sine(double omega_tau) {
    const double s = std::sin(0.5 * omega_tau);
    // Residue of sin at an intended multiple of 2*pi: representation error of
    // the input plus libm noise, both O(eps * omega_tau).
    const double snap = 16.0 * kEps * std::max(1.0, omega_tau);
    return std::fabs(s) < snap ? 0.0 : s;
}

bool at_resonance(double omega_tau) {
    return half_transit_sine(omega_tau) == 0.0;
}

double coupling_strength(const ModelParams& p) {
    return 2.0 * p.lambda_bar * half_transit_sine(p.omega_tau);
}

double lambda_bar_for_coupling(double cap_lambda, double omega_tau) {
    if (!(cap_lambda >= 0.0) || !std::isfinite(cap_lambda))
        throw DomainError("cap_lambda must be finite and >= 0");
    if (cap_lambda == 0.0)
        return 0.0;
    const double s = half_transit_sine(omega_tau);
    if (s == 0.0)
        throw DomainError(
            "omega_tau is a multiple of 2*pi: Lambda is pinned to 0 there and "
            "cannot be prescribed");
    return cap_lambda / (2.0 * s);
}

} // namespace qbarrier
