#include "qbarrier/quantized.hpp"

#include "qbarrier/oracle.hpp"
#include "qbarrier/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qbarrier::quantized {

namespace {

struct KahanSum {
    double s = 0.0;
    double c = 0.0;
    void add(double x) {
        const double y = x - c;
        const double t = s + y;
        c = (t - s) - y;
        s = t;
    }
};

void require_index(int v, const char* what) {
    if (v < 0)
        throw DomainError(std::string(what) + " must be >= 0");
}

// Sign and log magnitude of L_n^alpha(x), alpha >= 0, by the same three-term
// recurrence specfun::laguerre uses, renormalized by powers of two. Degrees
// where the polynomial value overflows a double still yield a usable log
// magnitude for the fused amplitude below.
struct SignedLog {
    double log_abs = 0.0;
    double sign = 0.0; // 0 marks an exact zero
};

SignedLog laguerre_signed_log(int n, int alpha, double x) {
    if (n == 0)
        return {0.0, 1.0};
    const long double xl = x;
    long double lkm1 = 1.0L;
    long double lk = 1.0L + alpha - xl;
    int scale2 = 0;
    for (int k = 1; k < n; ++k) {
        const long double lkp1 =
            ((2.0L * k + 1.0L + alpha - xl) * lk - (k + alpha) * lkm1) / (k + 1.0L);
        lkm1 = lk;
        lk = lkp1;
        const long double mag = std::max(std::fabs(lk), std::fabs(lkm1));
        if (mag > 0x1p+2048L) {
            lk *= 0x1p-2048L;
            lkm1 *= 0x1p-2048L;
            scale2 += 2048;
        } else if (mag > 0.0L && mag < 0x1p-2048L) {
            lk *= 0x1p+2048L;
            lkm1 *= 0x1p+2048L;
            scale2 -= 2048;
        }
    }
    if (lk == 0.0L)
        return {0.0, 0.0};
    return {static_cast<double>(std::log(std::fabs(lk))) + scale2 * std::numbers::ln2,
            lk > 0.0L ? 1.0 : -1.0};
}

// Signed modulus r of the transition amplitude, t = e^{iPhi} * r. The printed
// form sqrt(n0!/n!) Lambda^{n-n0} e^{-Lambda^2/2} L_{n0}^{n-n0}(Lambda^2) is
// evaluated with the negative-upper-index Laguerre identity folded in, so all
// powers, factorial ratios and the polynomial magnitude merge into a single
// exponential and the result is manifestly symmetric in |r| under n0 <-> n
// exchange.
double t_real_reduced(int n0, int n, double cap) {
    if (cap == 0.0)
        return n == n0 ? 1.0 : 0.0;
    const int lo = std::min(n0, n);
    const int hi = std::max(n0, n);
    const int a = hi - lo;
    const double x = cap * cap;
    const SignedLog ell = laguerre_signed_log(lo, a, x);
    if (ell.sign == 0.0)
        return 0.0;
    const double log_mag = 0.5 * (specfun::log_factorial(lo) - specfun::log_factorial(hi)) +
                           a * std::log(std::fabs(cap)) - 0.5 * x + ell.log_abs;
    double sign = ell.sign;
    if (a % 2 != 0) {
        // Lambda^{n-n0} contributes sign(Lambda)^{|n-n0|} for absorption and,
        // through the identity, an extra (-1)^{|n-n0|} for emission.
        if (cap < 0.0)
            sign = -sign;
        if (n < n0)
            sign = -sign;
    }
    return sign * std::exp(log_mag);
}

double transition_phase(int n0, int n, const ModelParams& p) {
    const double lb2 = p.lambda_bar * p.lambda_bar;
    return lb2 * (p.omega_tau - std::sin(p.omega_tau)) +
           (n - n0) * (0.5 * p.omega_tau - 0.5 * std::numbers::pi);
}

constexpr int kMaxDistributionWindow = 200000;

} // namespace

std::complex<double> TransitionMatrix::operator()(int n0, int n) const {
    if (n0 < 0 || n0 > n0_max || n < 0 || n > n_max)
        throw DomainError("TransitionMatrix: index outside the stored grid");
    return t[static_cast<std::size_t>(n0) * (n_max + 1) + n];
}

double TransitionMatrix::row_norm(int n0) const {
    KahanSum s;
    for (int n = 0; n <= n_max; ++n)
        s.add(std::norm((*this)(n0, n)));
    return s.s;
}

double PhotonDistribution::sum() const {
    KahanSum s;
    for (double v : p)
        s.add(v);
    return s.s;
}

double PhotonDistribution::mean() const {
    KahanSum s;
    for (std::size_t n = 0; n < p.size(); ++n)
        s.add(static_cast<double>(n) * p[n]);
    return s.s;
}

std::complex<double> displacement_element(int m, int n, double a) {
    require_index(m, "displacement_element: m");
    require_index(n, "displacement_element: n");
    if (a == 0.0)
        return {m == n ? 1.0 : 0.0, 0.0};
    const int lo = std::min(m, n);
    const int hi = std::max(m, n);
    const int d = hi - lo;
    const double x = a * a;
    const double ell = specfun::laguerre(lo, d, x);
    if (ell == 0.0)
        return {0.0, 0.0};
    const double log_mag = 0.5 * (specfun::log_factorial(lo) - specfun::log_factorial(hi)) +
                           d * std::log(std::fabs(a)) - 0.5 * x +
                           std::log(std::fabs(ell));
    double sign = ell > 0.0 ? 1.0 : -1.0;
    if (d % 2 != 0) {
        // a^{m-n} for m > n; <m|D(a)|n> = (-1)^{n-m} <n|D(a)|m> below the
        // diagonal, which combines to sign(-a)^{n-m}.
        if ((m > n && a < 0.0) || (m < n && a > 0.0))
            sign = -sign;
    }
    return {sign * std::exp(log_mag), 0.0};
}

std::complex<double> t_algebraic(int n0, int n, const ModelParams& p, int q_max) {
    require_index(n0, "t_algebraic: n0");
    require_index(n, "t_algebraic: n");
    validate(p);
    if (q_max < std::max(n0, n))
        throw TruncationError("t_algebraic: q_max below max(n0, n) cannot hold the columns");

    // Certify that both displacement columns live inside [0, q_max]: the
    // discarded mass is measured through the column-norm defect.
    KahanSum norm0;
    KahanSum norm1;
    KahanSum acc_re;
    KahanSum acc_im;
    for (int q = 0; q <= q_max; ++q) {
        const double dq_n0 = displacement_element(q, n0, p.lambda_bar).real();
        const double dq_n = displacement_element(q, n, p.lambda_bar).real();
        norm0.add(dq_n0 * dq_n0);
        norm1.add(dq_n * dq_n);
        // <n|D^dag|q> = conj(<q|D|n>), real for real coupling.
        const std::complex<double> term =
            dq_n * dq_n0 * std::polar(1.0, -(q - n) * p.omega_tau);
        acc_re.add(term.real());
        acc_im.add(term.imag());
    }
    if (norm0.s < 1.0 - 1e-14 || norm1.s < 1.0 - 1e-14)
        throw TruncationError("t_algebraic: displacement-column tail mass above 1e-14 at q_max = " +
                              std::to_string(q_max));
    const std::complex<double> acc{acc_re.s, acc_im.s};
    const double lb2 = p.lambda_bar * p.lambda_bar;
    return std::polar(1.0, lb2 * p.omega_tau) * acc;
}

std::complex<double> t_algebraic(int n0, int n, const ModelParams& p) {
    int q_max = std::max(n0, n) + static_cast<int>(std::ceil(40.0 * (p.lambda_bar + 1.0)));
    for (int attempt = 0; attempt < 4; ++attempt) {
        try {
            return t_algebraic(n0, n, p, q_max);
        } catch (const TruncationError&) {
            q_max += q_max / 2 + 16;
        }
    }
    return t_algebraic(n0, n, p, q_max);
}

std::complex<double> t_analytic(int n0, int n, const ModelParams& p) {
    require_index(n0, "t_analytic: n0");
    require_index(n, "t_analytic: n");
    validate(p);
    const double r = t_real_reduced(n0, n, coupling_strength(p));
    if (r == 0.0)
        return {0.0, 0.0}; // off-diagonals vanish exactly at zero coupling
    const double phase = transition_phase(n0, n, p);
    return {r * std::cos(phase), r * std::sin(phase)};
}

double probability(int n0, int n, const ModelParams& p) {
    require_index(n0, "probability: n0");
    require_index(n, "probability: n");
    validate(p);
    const double r = t_real_reduced(n0, n, coupling_strength(p));
    return r * r;
}

PhotonDistribution distribution_from(int n0, const ModelParams& p, double tail_tol) {
    require_index(n0, "distribution_from: n0");
    validate(p);
    if (!(tail_tol > 0.0) || !(tail_tol < 1.0))
        throw DomainError("distribution_from: tail_tol must lie in (0, 1)");

    const double cap = coupling_strength(p);
    const double cap2 = cap * cap;
    // Mean n0 + Lambda^2, variance Lambda^2(2 n0 + 1): start six sigma out.
    const double sigma = std::sqrt(cap2 * (2.0 * n0 + 1.0) + 1.0);
    int hi = n0 + static_cast<int>(std::ceil(cap2 + 6.0 * sigma)) + 10;

    PhotonDistribution dist;
    KahanSum total;
    int computed_to = -1;
    while (true) {
        dist.p.resize(static_cast<std::size_t>(hi) + 1);
        for (int n = computed_to + 1; n <= hi; ++n) {
            const double k2 = 1.0 + (n0 - n) / p.e0_ratio;
            if (k2 <= 0.0)
                throw EvanescentModeError(
                    "distribution_from: final photon number n = " + std::to_string(n) +
                    " leaves the particle evanescent at e0_ratio = " +
                    std::to_string(p.e0_ratio));
            const double r = t_real_reduced(n0, n, cap);
            dist.p[static_cast<std::size_t>(n)] = r * r;
            total.add(r * r);
        }
        computed_to = hi;
        const double tail = std::max(0.0, 1.0 - total.s);
        if (tail <= tail_tol) {
            dist.tail_bound = tail;
            return dist;
        }
        if (hi >= kMaxDistributionWindow)
            throw TruncationError("distribution_from: window exceeded " +
                                  std::to_string(kMaxDistributionWindow) +
                                  " without meeting the tail tolerance");
        hi += 16;
    }
}

FinalEnergies final_energies(int n0, const ModelParams& p) {
    require_index(n0, "final_energies: n0");
    validate(p);
    const double cap = coupling_strength(p);
    const double cap2 = cap * cap;
    if (p.e0_ratio <= cap2)
        throw DomainError("final_energies: e0_ratio <= Lambda^2 leaves the particle evanescent");

    FinalEnergies e;
    e.particle = p.e0_ratio - cap2;
    // The field energy is total minus particle, so conservation holds exactly
    // in floating point; the difference from composing n0 + Lambda^2 + 1/2
    // directly is below one ulp.
    const double total = (p.e0_ratio + n0) + 0.5;
    e.field = total - e.particle;

    const PhotonDistribution dist = distribution_from(n0, p, 1e-12);
    const double moment_field = dist.mean() + 0.5;
    if (std::fabs(e.field - moment_field) > 1e-8 * std::max(1.0, std::fabs(e.field)))
        throw ConvergenceError("final_energies: closed-form field energy disagrees with the "
                               "distribution moment beyond 1e-8");
    return e;
}

double asymmetry(int n0, int q, const ModelParams& p) {
    require_index(n0, "asymmetry: n0");
    require_index(q, "asymmetry: q");
    if (q > n0)
        throw DomainError("asymmetry: q > n0 has no emission branch");
    if (q == 0)
        return 0.0;
    return probability(n0, n0 + q, p) - probability(n0, n0 - q, p);
}

LargeN0Probability large_n0_probability(int n0, int q, const ModelParams& p) {
    require_index(n0, "large_n0_probability: n0");
    require_index(q, "large_n0_probability: q");
    validate(p);
    const double cap = std::fabs(coupling_strength(p));
    const double x = 2.0 * cap * std::sqrt(static_cast<double>(n0));
    const double j = specfun::bessel_j(q, x);
    LargeN0Probability result;
    result.value = j * j;
    result.in_asymptotic_regime =
        static_cast<double>(n0) >= 100.0 * p.lambda_bar * p.lambda_bar;
    return result;
}

double entanglement_entropy(int n0, const ModelParams& p, double tail_tol) {
    const PhotonDistribution dist = distribution_from(n0, p, tail_tol);
    KahanSum s;
    for (double v : dist.p)
        if (v > 0.0)
            s.add(-v * std::log(v));
    return s.s;
}

TransitionMatrix build_transition_matrix(int n0_max, int n_max, const ModelParams& p,
                                         Route route) {
    require_index(n0_max, "build_transition_matrix: n0_max");
    require_index(n_max, "build_transition_matrix: n_max");
    validate(p);

    TransitionMatrix tm;
    tm.n0_max = n0_max;
    tm.n_max = n_max;
    tm.lambda_bar = p.lambda_bar;
    tm.omega_tau = p.omega_tau;
    tm.route = route;
    tm.t.resize(static_cast<std::size_t>(n0_max + 1) * (n_max + 1));

    if (route == Route::Oracle) {
        const Eigen::MatrixXcd block =
            oracle::certified_oracle_block(p, std::max(n0_max, n_max));
        for (int n0 = 0; n0 <= n0_max; ++n0)
            for (int n = 0; n <= n_max; ++n)
                tm.t[static_cast<std::size_t>(n0) * (n_max + 1) + n] = block(n0, n);
        return tm;
    }

    for (int n0 = 0; n0 <= n0_max; ++n0)
        for (int n = 0; n <= n_max; ++n)
            tm.t[static_cast<std::size_t>(n0) * (n_max + 1) + n] =
                route == Route::Analytic ? t_analytic(n0, n, p) : t_algebraic(n0, n, p);
    return tm;
}

} // namespace qbarrier::quantized
