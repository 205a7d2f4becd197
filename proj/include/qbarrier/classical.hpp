#ifndef QBARRIER_CLASSICAL_HPP
#define QBARRIER_CLASSICAL_HPP

#include "qbarrier/params.hpp"

#include <complex>
#include <vector>

namespace qbarrier::classical {

/// Transmitted plane-wave decomposition of a classically driven barrier:
/// amplitude c_n on the energy sideband E0 + n*hbar*omega for n in
/// [n_min, n_max], plus the wave-vector ratio k_n/k_0 of each sideband.
struct SidebandSpectrum {
    int n_min = 0;
    int n_max = 0;
    std::vector<std::complex<double>> amplitudes; // index i holds n = n_min + i
    std::vector<double> k_ratio;                  // same indexing
    double tail_bound = 0.0;                      // probability mass outside the window

    std::complex<double> amplitude(int n) const;
    double probability(int n) const; // |c_n|^2, 0 outside the window
    double total_probability() const;
    double mean_shift() const; // sum of n*|c_n|^2 over the window
};

struct DriveIndex {
    double beta = 0.0; // modulation index 2*v_bar*sin(omega_tau/2)
    double eta = 0.0;  // sideband phase step phi + omega_tau/2 + pi/2
};

/// The drive parameters that fix the spectrum: c_n = J_n(beta)*exp(-i*n*eta).
/// ModelParams::lambda_bar plays the role of the classical drive ratio
/// V/(hbar*omega) here.
DriveIndex beta_eta(const ModelParams& p);

/// Sideband amplitudes over a window grown until the discarded mass is below
/// tail_tol, with k_ratio_n = sqrt(1 + n/e0_ratio).
///
/// Throws EvanescentModeError if any retained sideband has k_n^2 <= 0 and
/// DomainError if tail_tol is outside (0, 1).
SidebandSpectrum classical_spectrum(const ModelParams& p, double tail_tol = 1e-12);

} // namespace qbarrier::classical

#endif
