#ifndef QBARRIER_ORACLE_HPP
#define QBARRIER_ORACLE_HPP

#include "qbarrier/params.hpp"

#include <Eigen/Dense>

#include <complex>

namespace qbarrier::oracle {

enum class OperatorKind { Annihilation, Creation, Number, Displacement, Evolution };

/// Dense matrix of a bosonic operator in the Fock basis |0>..|dim-1>. The top
/// rows and columns of any truncated operator are corrupted by the cut; all
/// certificates therefore evaluate an inner block only.
struct TruncatedOperator {
    OperatorKind kind = OperatorKind::Annihilation;
    int dim = 0;
    Eigen::MatrixXcd entries;
};

struct Ladder {
    TruncatedOperator a;    // annihilation, entries[m][n] = sqrt(n)*delta_{m,n-1}
    TruncatedOperator adag; // creation, the conjugate transpose
};

/// Annihilation and creation matrices. Throws DomainError if dim < 2 or
/// dim > 512 (dense desk-scale cap).
Ladder build_ladder(int dim);

/// Matrix exponential by Pade approximation with scaling and squaring.
/// Throws ConvergenceError if the result is not finite.
Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m);

/// Displacement matrix exp(a*(adag - a)) for real a, built through expm with
/// no closed-form shortcuts.
TruncatedOperator build_displacement(int dim, double a);

/// Diagonal phase evolution exp(-i*omega_tau*N).
TruncatedOperator build_evolution(int dim, double omega_tau);

/// Transition amplitude as the operator sandwich
///   exp(i*lambda_bar^2*omega_tau) * exp(i*n*omega_tau)
///     * <n| D(lambda_bar)^dagger exp(-i*omega_tau*N) D(lambda_bar) |n0>,
/// certified by recomputing at dim + 16 and requiring agreement within 1e-10.
/// Throws TruncationError if the certificate fails or dim is too small for
/// (n0, n) plus the required margin.
std::complex<double> t_oracle(int n0, int n, const ModelParams& p, int dim);

/// t_oracle with the dimension chosen from (n0, n, lambda_bar).
std::complex<double> t_oracle(int n0, int n, const ModelParams& p);

/// Certified sandwich matrix covering n0, n <= n_max in one pair of matrix
/// exponentials; entry (n0, n) equals t_oracle(n0, n) to the certificate
/// tolerance.
Eigen::MatrixXcd certified_oracle_block(const ModelParams& p, int n_max);

} // namespace qbarrier::oracle

#endif
