#ifndef QBARRIER_QUANTIZED_HPP
#define QBARRIER_QUANTIZED_HPP

#include "qbarrier/params.hpp"

#include <complex>
#include <vector>

namespace qbarrier::quantized {

enum class Route { Analytic, Algebraic, Oracle };

/// Complex transition amplitudes t[n0][n] for the field going from n0 to n
/// photons during one transit, on the truncated grid n0 <= n0_max, n <= n_max.
struct TransitionMatrix {
    int n0_max = 0;
    int n_max = 0;
    double lambda_bar = 0.0;
    double omega_tau = 0.0;
    Route route = Route::Analytic;
    std::vector<std::complex<double>> t; // row-major, (n0_max+1) x (n_max+1)

    std::complex<double> operator()(int n0, int n) const;
    double row_norm(int n0) const; // sum over n of |t|^2
};

/// Photon-number weights with a certificate for the truncated tail.
struct PhotonDistribution {
    std::vector<double> p;   // p[n] for n = 0..p.size()-1
    double tail_bound = 0.0; // upper bound on the discarded mass

    double sum() const;
    double mean() const;
};

struct FinalEnergies {
    double particle = 0.0; // units of hbar*omega
    double field = 0.0;    // units of hbar*omega
};

struct LargeN0Probability {
    double value = 0.0;
    bool in_asymptotic_regime = false; // n0 >= 100*lambda_bar^2
};

/// Matrix element <m|D(a)|n> of the displacement operator D(a) =
/// exp(a*adag - a*a) for real a, via the closed Laguerre form. Real-valued
/// for real a; returned as complex to match the amplitudes it feeds.
std::complex<double> displacement_element(int m, int n, double a);

/// Transition amplitude as the coherent sum over intermediate Fock states q
/// up to q_max, including the global phase exp(i*lambda_bar^2*omega_tau).
/// Throws TruncationError when the displacement columns hold more than 1e-14
/// of their mass beyond q_max.
std::complex<double> t_algebraic(int n0, int n, const ModelParams& p, int q_max);

/// Same sum with q_max chosen automatically and grown until the tail-mass
/// certificate passes.
std::complex<double> t_algebraic(int n0, int n, const ModelParams& p);

/// Closed-form amplitude e^{iPhi} sqrt(n0!/n!) e^{-Lambda^2/2} Lambda^{n-n0}
/// L_{n0}^{n-n0}(Lambda^2), factorial ratios and the Lambda power merged in
/// log space. At Lambda = 0 the off-diagonals are exactly zero.
std::complex<double> t_analytic(int n0, int n, const ModelParams& p);

/// |t_analytic|^2, evaluated so that probability(n0, n) and probability(n, n0)
/// are the same floating-point number.
double probability(int n0, int n, const ModelParams& p);

/// Row n0 of the probability matrix with a tail bound from the unitarity
/// defect. Throws EvanescentModeError if a retained final photon number
/// leaves the particle with k^2 <= 0.
PhotonDistribution distribution_from(int n0, const ModelParams& p, double tail_tol = 1e-12);

/// Final particle and field energies (e0_ratio - Lambda^2, n0 + Lambda^2 + 1/2)
/// in units of hbar*omega. Cross-checks the field value against the first
/// moment of distribution_from. Throws DomainError if e0_ratio <= Lambda^2.
FinalEnergies final_energies(int n0, const ModelParams& p);

/// Signed absorption-emission imbalance P(n0 -> n0+q) - P(n0 -> n0-q).
/// Throws DomainError if q > n0.
double asymmetry(int n0, int q, const ModelParams& p);

/// Asymptotic transition probability J_q(2*Lambda*sqrt(n0))^2 for large n0,
/// flagged when n0 is below the regime gate.
LargeN0Probability large_n0_probability(int n0, int q, const ModelParams& p);

/// Entanglement entropy -sum p ln p of the particle-field state after the
/// transit, with the convention 0*ln(0) = 0. The Schmidt weights are the
/// transition probabilities because distinct photon losses map to distinct
/// particle wave vectors.
double entanglement_entropy(int n0, const ModelParams& p, double tail_tol = 1e-12);

/// Amplitudes for all n0 <= n0_max, n <= n_max through the requested route.
/// The entries are bitwise identical to the corresponding single-element
/// calls.
TransitionMatrix build_transition_matrix(int n0_max, int n_max, const ModelParams& p,
                                         Route route);

} // namespace qbarrier::quantized

#endif
