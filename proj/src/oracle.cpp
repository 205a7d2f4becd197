#include "qbarrier/oracle.hpp"

#include <Eigen/LU>

#include <cmath>
#include <complex>

namespace qbarrier::oracle {

namespace {

constexpr int kMaxDim = 512;
constexpr int kCertifyStep = 16;

void require_dim(int dim) {
    if (dim < 2)
        throw DomainError("oracle: dim must be >= 2");
    if (dim > kMaxDim)
        throw DomainError("oracle: dim above " + std::to_string(kMaxDim) +
                          " exceeds the dense desk-scale cap");
}

int margin_for(double lambda_bar) {
    return static_cast<int>(std::ceil(40.0 * (lambda_bar + 1.0)));
}

// D^dag exp(-i*omega_tau*N) D without phase prefactors; the matrix every
// amplitude of one parameter set is read from.
Eigen::MatrixXcd sandwich(const ModelParams& p, int dim) {
    const TruncatedOperator disp = build_displacement(dim, p.lambda_bar);
    const TruncatedOperator evo = build_evolution(dim, p.omega_tau);
    return disp.entries.adjoint() * evo.entries * disp.entries;
}

std::complex<double> phased_element(const Eigen::MatrixXcd& s, int n0, int n,
                                    const ModelParams& p) {
    const double lb2 = p.lambda_bar * p.lambda_bar;
    return std::polar(1.0, lb2 * p.omega_tau) * std::polar(1.0, n * p.omega_tau) *
           s(n, n0);
}

} // namespace

Ladder build_ladder(int dim) {
    require_dim(dim);
    Ladder l;
    l.a.kind = OperatorKind::Annihilation;
    l.a.dim = dim;
    l.a.entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 1; n < dim; ++n)
        l.a.entries(n - 1, n) = std::sqrt(static_cast<double>(n));
    l.adag.kind = OperatorKind::Creation;
    l.adag.dim = dim;
    l.adag.entries = l.a.entries.adjoint();
    return l;
}

Eigen::MatrixXcd expm(const Eigen::MatrixXcd& m) {
    if (m.rows() != m.cols())
        throw DomainError("expm: matrix must be square");
    if (!m.allFinite())
        throw ConvergenceError("expm: input has non-finite entries");

    // Pade order 13 with scaling and squaring; theta is the largest 1-norm
    // for which the order-13 approximant meets double-precision backward
    // error.
    static const double theta13 = 5.371920351148152;
    static const double b[] = {64764752532480000.0, 32382376266240000.0, 7771770303897600.0,
                               1187353796428800.0,  129060195264000.0,   10559470521600.0,
                               670442572800.0,      33522128640.0,       1323241920.0,
                               40840800.0,          960960.0,            16380.0,
                               182.0,               1.0};

    const double norm1 = m.cwiseAbs().colwise().sum().maxCoeff();
    int squarings = 0;
    if (norm1 > theta13) {
        squarings = static_cast<int>(std::ceil(std::log2(norm1 / theta13)));
        if (squarings > 60)
            throw ConvergenceError("expm: matrix norm too large to scale");
    }

    const Eigen::MatrixXcd a = m / std::pow(2.0, squarings);
    const long n = a.rows();
    const Eigen::MatrixXcd id = Eigen::MatrixXcd::Identity(n, n);
    const Eigen::MatrixXcd a2 = a * a;
    const Eigen::MatrixXcd a4 = a2 * a2;
    const Eigen::MatrixXcd a6 = a2 * a4;
    const Eigen::MatrixXcd u =
        a * (a6 * (b[13] * a6 + b[11] * a4 + b[9] * a2) + b[7] * a6 + b[5] * a4 +
             b[3] * a2 + b[1] * id);
    const Eigen::MatrixXcd v = a6 * (b[12] * a6 + b[10] * a4 + b[8] * a2) + b[6] * a6 +
                               b[4] * a4 + b[2] * a2 + b[0] * id;

    Eigen::MatrixXcd r = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < squarings; ++i)
        r = r * r;
    if (!r.allFinite())
        throw ConvergenceError("expm: result has non-finite entries");
    return r;
}

TruncatedOperator build_displacement(int dim, double a) {
    require_dim(dim);
    const Ladder l = build_ladder(dim);
    TruncatedOperator d;
    d.kind = OperatorKind::Displacement;
    d.dim = dim;
    d.entries = expm(a * (l.adag.entries - l.a.entries));
    return d;
}

TruncatedOperator build_evolution(int dim, double omega_tau) {
    require_dim(dim);
    TruncatedOperator e;
    e.kind = OperatorKind::Evolution;
    e.dim = dim;
    e.entries = Eigen::MatrixXcd::Zero(dim, dim);
    for (int n = 0; n < dim; ++n)
        e.entries(n, n) = std::polar(1.0, -omega_tau * n);
    return e;
}

std::complex<double> t_oracle(int n0, int n, const ModelParams& p, int dim) {
    if (n0 < 0 || n < 0)
        throw DomainError("t_oracle: photon numbers must be >= 0");
    validate(p);
    if (dim < std::max(n0, n) + margin_for(p.lambda_bar))
        throw TruncationError("t_oracle: dim leaves no truncation margin above max(n0, n)");
    require_dim(dim + kCertifyStep);

    const std::complex<double> coarse = phased_element(sandwich(p, dim), n0, n, p);
    const std::complex<double> fine =
        phased_element(sandwich(p, dim + kCertifyStep), n0, n, p);
    if (std::abs(fine - coarse) >= 1e-10)
        throw TruncationError("t_oracle: value moved by >= 1e-10 under dim + " +
                              std::to_string(kCertifyStep));
    return fine;
}

std::complex<double> t_oracle(int n0, int n, const ModelParams& p) {
    return t_oracle(n0, n, p, std::max(n0, n) + margin_for(p.lambda_bar));
}

Eigen::MatrixXcd certified_oracle_block(const ModelParams& p, int n_max) {
    if (n_max < 0)
        throw DomainError("certified_oracle_block: n_max must be >= 0");
    validate(p);
    const int dim = n_max + margin_for(p.lambda_bar);
    require_dim(dim + kCertifyStep);

    const Eigen::MatrixXcd coarse = sandwich(p, dim);
    const Eigen::MatrixXcd fine = sandwich(p, dim + kCertifyStep);

    Eigen::MatrixXcd block(n_max + 1, n_max + 1);
    double worst = 0.0;
    for (int n0 = 0; n0 <= n_max; ++n0) {
        for (int n = 0; n <= n_max; ++n) {
            const std::complex<double> a = phased_element(coarse, n0, n, p);
            const std::complex<double> b = phased_element(fine, n0, n, p);
            worst = std::max(worst, std::abs(b - a));
            block(n0, n) = b;
        }
    }
    if (worst >= 1e-10)
        throw TruncationError("certified_oracle_block: an entry moved by >= 1e-10 under dim + " +
                              std::to_string(kCertifyStep));
    return block;
}

} // namespace qbarrier::oracle
