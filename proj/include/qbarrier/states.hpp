#ifndef QBARRIER_STATES_HPP
#define QBARRIER_STATES_HPP

#include "qbarrier/params.hpp"
#include "qbarrier/classical.hpp"
#include "qbarrier/quantized.hpp"

#include <complex>
#include <variant>
#include <vector>

namespace qbarrier::states {

struct Fock {
    int n0 = 0;
};

struct Thermal {
    double y = 0.0; // Boltzmann weight exp(-hbar*omega/(kB*T)), in [0, 1)
};

struct Coherent {
    double alpha_abs = 0.0;  // |alpha| >= 0
    double phi_alpha = 0.0;  // radians, folded to [0, 2*pi) on use
};

using FieldStateSpec = std::variant<Fock, Thermal, Coherent>;

/// Label of the position-conditioned coherent field state after the transit:
/// xi(x) = alpha + Lambda*exp(i*phi_lambda(x)).
struct CoherentLabel {
    std::complex<double> xi;
    double x_over_period = 0.0; // position in units of 2*pi*v0/omega
    double phi_lambda = 0.0;    // radians in [0, 2*pi)
};

struct DetectorPositions {
    double x_plus = 0.0;  // in units of the period; conditional mean (|alpha|+Lambda)^2
    double x_minus = 0.0; // antipodal point; conditional mean (|alpha|-Lambda)^2
};

/// Posterior density over the particle position within one period, given a
/// detected photon number. Uniform grid, density normalized to integrate to 1.
struct PositionPosterior {
    std::vector<double> x_over_period;
    std::vector<double> density;
    int n_detect = 0;
};

/// Poisson law with mean Lambda^2: the final photon distribution for a field
/// that started in the vacuum.
quantized::PhotonDistribution vacuum_distribution(const ModelParams& p,
                                                  double tail_tol = 1e-12);

/// Closed-form final distribution for a thermal input with Boltzmann weight y.
/// Throws DomainError unless 0 <= y < 1; y below 1e-12 dispatches to the
/// vacuum law, the analytic limit of the closed form.
quantized::PhotonDistribution thermal_distribution(const ModelParams& p, double y,
                                                   double tail_tol = 1e-12);

/// Position-dependent displacement phase omega_tau/2 - 2*pi*x_over_period - pi/2,
/// folded to [0, 2*pi). The fold acts on x_over_period first, so shifting x by
/// a whole period reproduces the same value exactly.
double phi_lambda(const ModelParams& p, double x_over_period);

CoherentLabel coherent_output_label(const ModelParams& p, const Coherent& state,
                                    double x_over_period);

/// Phase of the conditional field amplitude that multiplies |xi(x)>:
/// exp(i*Lambda*|alpha|*sin(phi_lambda(x) - phi_alpha)).
std::complex<double> coherent_amplitude_prefactor(const ModelParams& p,
                                                  const Coherent& state,
                                                  double x_over_period);

/// Position-independent phase exp(i*lambda_bar^2*omega_tau) *
/// exp(-i*lambda_bar^2*sin(omega_tau)) of the transmitted state.
std::complex<double> coherent_global_phase(const ModelParams& p);

/// Positions where the displacement aligns with (x_plus) and opposes (x_minus)
/// the input amplitude, half a period apart.
DetectorPositions detector_positions(const ModelParams& p, const Coherent& state);

/// Conditional photon distribution at position x: Poisson with mean |xi(x)|^2.
quantized::PhotonDistribution conditional_distribution(const ModelParams& p,
                                                       const Coherent& state,
                                                       double x_over_period,
                                                       double tail_tol = 1e-12);

/// Bayesian inversion of the conditional law: p(x | n_detect) over one period
/// with a flat prior. Throws DegenerateError at Lambda = 0, where the posterior
/// carries no position information.
PositionPosterior detector_correlation(const ModelParams& p, const Coherent& state,
                                       int n_detect, int grid_points = 1024);

/// Purity Tr(rho^2) of the reduced field state, the double quadrature of
/// exp(-|xi(x) - xi(x')|^2) over one period in each variable. Throws
/// ConvergenceError if doubling quad_points moves the result by more than
/// 1e-8, DomainError if quad_points < 64.
double coherent_field_purity(const ModelParams& p, const Coherent& state,
                             int quad_points = 256);

/// High-photon limit of the coherent treatment: the particle spectrum becomes
/// the classical sideband law with effective drive v_bar = lambda_bar*|alpha|
/// and drive phase -phi_alpha. Throws RegimeError if alpha_abs < 20*Lambda.
classical::SidebandSpectrum classical_limit_spectrum(const ModelParams& p,
                                                     const Coherent& state,
                                                     double tail_tol = 1e-12);

} // namespace qbarrier::states

#endif
