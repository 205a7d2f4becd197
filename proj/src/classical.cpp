#include "qbarrier/classical.hpp"

#include "qbarrier/specfun.hpp"

#include <cmath>
#include <numbers>

namespace qbarrier::classical {

namespace {

// Compensated accumulation; the window sums feed 1e-12 certificates.
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

constexpr int kMaxWindow = 20000;

} // namespace

std::complex<double> SidebandSpectrum::amplitude(int n) const {
    if (n < n_min || n > n_max)
        return {0.0, 0.0};
    return amplitudes[static_cast<std::size_t>(n - n_min)];
}

double SidebandSpectrum::probability(int n) const {
    return std::norm(amplitude(n));
}

double SidebandSpectrum::total_probability() const {
    KahanSum s;
    for (const auto& c : amplitudes)
        s.add(std::norm(c));
    return s.s;
}

double SidebandSpectrum::mean_shift() const {
    KahanSum s;
    for (int n = n_min; n <= n_max; ++n)
        s.add(n * std::norm(amplitudes[static_cast<std::size_t>(n - n_min)]));
    return s.s;
}

DriveIndex beta_eta(const ModelParams& p) {
    validate(p);
    return {2.0 * p.lambda_bar * half_transit_sine(p.omega_tau),
            p.phi + 0.5 * p.omega_tau + 0.5 * std::numbers::pi};
}

SidebandSpectrum classical_spectrum(const ModelParams& p, double tail_tol) {
    validate(p);
    if (!(tail_tol > 0.0) || !(tail_tol < 1.0))
        throw DomainError("classical_spectrum: tail_tol must lie in (0, 1)");

    const auto [beta, eta] = beta_eta(p);

    SidebandSpectrum spec;
    if (beta == 0.0) {
        // Resonance or zero drive: the wave passes unaltered, exactly.
        spec.n_min = spec.n_max = 0;
        spec.amplitudes = {{1.0, 0.0}};
        spec.k_ratio = {1.0};
        spec.tail_bound = 0.0;
        return spec;
    }

    const double abs_beta = std::fabs(beta);
    int window = static_cast<int>(std::ceil(abs_beta)) + 10;
    // Each order is evaluated on its own, so growing the window appends new
    // entries without touching the ones already computed.
    std::vector<double> row;
    KahanSum captured;
    double tail = 1.0;
    while (true) {
        for (int n = static_cast<int>(row.size()); n <= window; ++n) {
            const double jn = specfun::bessel_j(n, beta);
            row.push_back(jn);
            captured.add((n == 0 ? 1.0 : 2.0) * jn * jn);
        }
        tail = std::max(0.0, 1.0 - captured.s);
        if (tail <= tail_tol)
            break;
        if (window >= kMaxWindow)
            throw TruncationError("classical_spectrum: sideband window exceeded " +
                                  std::to_string(kMaxWindow) +
                                  " without meeting the tail tolerance");
        window += 8;
    }

    spec.n_min = -window;
    spec.n_max = window;
    spec.tail_bound = tail;
    spec.amplitudes.resize(static_cast<std::size_t>(2 * window + 1));
    spec.k_ratio.resize(static_cast<std::size_t>(2 * window + 1));
    for (int n = -window; n <= window; ++n) {
        double jn = row[std::abs(n)];
        if (n < 0 && (n % 2 != 0))
            jn = -jn; // J_{-n} = (-1)^n J_n, exact sign flip
        const std::size_t i = static_cast<std::size_t>(n + window);
        spec.amplitudes[i] = jn * std::polar(1.0, -n * eta);
        const double ksq = 1.0 + n / p.e0_ratio;
        if (ksq <= 0.0)
            throw EvanescentModeError(
                "classical_spectrum: sideband n = " + std::to_string(n) +
                " has k^2 <= 0 at e0_ratio = " + std::to_string(p.e0_ratio));
        spec.k_ratio[i] = std::sqrt(ksq);
    }
    return spec;
}

} // namespace qbarrier::classical
