#ifndef QBARRIER_PARAMS_HPP
#define QBARRIER_PARAMS_HPP

#include "qbarrier/errors.hpp"

namespace qbarrier {

/// Dimensionless configuration of the driven-barrier problem.
///
/// `lambda_bar` is the coupling in units of the photon energy: lambda/(hbar*omega)
/// in the quantized treatment, V/(hbar*omega) when read by the classical module.
/// `e0_ratio` is the incident kinetic energy E0/(hbar*omega); the default keeps
/// every desk-scale sideband propagating.
struct ModelParams {
    double lambda_bar = 0.0;  // coupling / photon energy, >= 0
    double omega_tau = 0.0;   // transit phase omega*tau, radians, >= 0
    double phi = 0.0;         // classical drive phase, radians
    double phi_alpha = 0.0;   // coherent-state phase, radians
    double e0_ratio = 1e6;    // E0 / (hbar*omega), > 0
};

// Throws DomainError if a field violates its invariant.
void validate(const ModelParams& p);

// sin(omega_tau/2), snapped to exactly 0 when omega_tau sits within an ulp
// of a multiple of 2*pi. The snap makes the resonance condition exact in
// floating point: an input formed as l*(2*pi) must yield zero coupling, not
// a ~1e-16 residue that leaks into every off-diagonal amplitude.
double half_transit_sine(double omega_tau);

// True iff omega_tau is a (snapped) multiple of 2*pi.
bool at_resonance(double omega_tau);

// Coupling strength Lambda = 2 * lambda_bar * sin(omega_tau/2).
// Lambda == 0 exactly at resonance or zero coupling.
double coupling_strength(const ModelParams& p);

// Solves lambda_bar from a requested Lambda at fixed omega_tau.
// Throws DomainError at resonance, where no finite lambda_bar exists.
double lambda_bar_for_coupling(double cap_lambda, double omega_tau);

} // namespace qbarrier

#endif
