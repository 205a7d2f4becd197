#include "qbarrier/states.hpp"

#include "qbarrier/specfun.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

namespace qbarrier::states {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kTwoPi = 2.0 * std::numbers::pi;

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

void check_tail_tol(double tail_tol, const char* who) {
    if (!(tail_tol > 0.0) || !(tail_tol < 1.0))
        throw DomainError(std::string(who) + ": tail_tol must lie in (0, 1)");
}

// Poisson law with the window grown until the captured mass certifies the
// tail. Weights are assembled in log space so large means cannot overflow a
// factorial.
quantized::PhotonDistribution poisson_distribution(double mu, double tail_tol) {
    quantized::PhotonDistribution dist;
    if (mu == 0.0) {
        dist.p = {1.0};
        dist.tail_bound = 0.0;
        return dist;
    }
    const double log_mu = std::log(mu);
    int hi = static_cast<int>(std::ceil(mu + 6.0 * std::sqrt(mu) + 10.0));
    KahanSum total;
    int computed_to = -1;
    while (true) {
        dist.p.resize(static_cast<std::size_t>(hi) + 1);
        for (int n = computed_to + 1; n <= hi; ++n) {
            const double v = std::exp(n * log_mu - mu - specfun::log_factorial(n));
            dist.p[static_cast<std::size_t>(n)] = v;
            total.add(v);
        }
        computed_to = hi;
        const double tail = std::max(0.0, 1.0 - total.s);
        if (tail <= tail_tol) {
            dist.tail_bound = tail;
            return dist;
        }
        if (hi >= 200000)
            throw TruncationError("poisson window exceeded 200000 entries");
        hi += 16;
    }
}

double fold_unit(double x) {
    const double f = x - std::floor(x);
    return f < 1.0 ? f : 0.0; // floor rounding can land exactly on 1
}

std::complex<double> alpha_of(const Coherent& state) {
    if (state.alpha_abs < 0.0)
        throw DomainError("coherent state: alpha_abs must be >= 0");
    return std::polar(state.alpha_abs, state.phi_alpha);
}

} // namespace

quantized::PhotonDistribution vacuum_distribution(const ModelParams& p, double tail_tol) {
    validate(p);
    check_tail_tol(tail_tol, "vacuum_distribution");
    const double cap = coupling_strength(p);
    return poisson_distribution(cap * cap, tail_tol);
}

quantized::PhotonDistribution thermal_distribution(const ModelParams& p, double y,
                                                   double tail_tol) {
    validate(p);
    check_tail_tol(tail_tol, "thermal_distribution");
    if (!(y >= 0.0) || !(y < 1.0))
        throw DomainError("thermal_distribution: y must lie in [0, 1)");
    if (y < 1e-12)
        return vacuum_distribution(p, tail_tol); // analytic limit of the closed form

    const double cap2 = std::pow(coupling_strength(p), 2);
    const double one_minus_y = 1.0 - y;
    const double arg = -cap2 * one_minus_y * one_minus_y / y; // Laguerre argument, <= 0
    const double log_y = std::log(y);
    const double log_prefactor = -cap2 * one_minus_y + std::log(one_minus_y);

    quantized::PhotonDistribution dist;
    const double mean = y / one_minus_y + cap2;
    int hi = static_cast<int>(std::ceil(mean + 6.0 * std::sqrt(mean + 1.0))) + 10;

    // L_n(arg) follows the ordinary-Laguerre three-term recurrence; arg <= 0
    // keeps every term positive, so the running pair never cancels.
    KahanSum total;
    double lkm1 = 0.0;
    double lk = 1.0;
    int computed_to = -1;
    while (true) {
        dist.p.resize(static_cast<std::size_t>(hi) + 1);
        for (int n = computed_to + 1; n <= hi; ++n) {
            if (n > 0) {
                const double lkp1 =
                    ((2.0 * n - 1.0 - arg) * lk - (n - 1.0) * lkm1) / n;
                lkm1 = lk;
                lk = lkp1;
            }
            if (!std::isfinite(lk))
                throw TruncationError(
                    "thermal_distribution: Laguerre magnitude overflowed; the "
                    "(Lambda, y) combination is outside desk scale");
            const double v = std::exp(log_prefactor + n * log_y) * lk;
            dist.p[static_cast<std::size_t>(n)] = v;
            total.add(v);
        }
        computed_to = hi;
        const double tail = std::max(0.0, 1.0 - total.s);
        if (tail <= tail_tol) {
            dist.tail_bound = tail;
            break;
        }
        if (hi >= 20000)
            throw TruncationError("thermal_distribution: window exceeded 20000 entries");
        hi += 32;
    }

    // Spot-check the closed form against the Fock-mixture route at three
    // representative photon numbers.
    const int geo_cut =
        static_cast<int>(std::ceil(std::log(1e-12 * one_minus_y) / log_y)) + 1;
    const int samples[] = {0, std::min<int>(static_cast<int>(mean), computed_to),
                           std::min<int>(static_cast<int>(std::ceil(mean + 3.0 * std::sqrt(mean + 1.0))),
                                         computed_to)};
    for (int n : samples) {
        KahanSum mix;
        double weight = one_minus_y;
        for (int n0 = 0; n0 <= geo_cut; ++n0) {
            mix.add(weight * quantized::probability(n0, n, p));
            weight *= y;
        }
        if (std::fabs(mix.s - dist.p[static_cast<std::size_t>(n)]) > 1e-8)
            throw ConvergenceError(
                "thermal_distribution: closed form and Fock mixture disagree beyond 1e-8");
    }
    return dist;
}

double phi_lambda(const ModelParams& p, double x_over_period) {
    validate(p);
    const double raw = 0.5 * p.omega_tau - kTwoPi * fold_unit(x_over_period) - 0.5 * kPi;
    double folded = std::fmod(raw, kTwoPi);
    if (folded < 0.0)
        folded += kTwoPi;
    return folded < kTwoPi ? folded : 0.0;
}

CoherentLabel coherent_output_label(const ModelParams& p, const Coherent& state,
                                    double x_over_period) {
    const double phase = phi_lambda(p, x_over_period);
    CoherentLabel label;
    label.x_over_period = fold_unit(x_over_period);
    label.phi_lambda = phase;
    label.xi = alpha_of(state) + coupling_strength(p) * std::polar(1.0, phase);
    return label;
}

std::complex<double> coherent_amplitude_prefactor(const ModelParams& p,
                                                  const Coherent& state,
                                                  double x_over_period) {
    const double phase = phi_lambda(p, x_over_period);
    const double cap = coupling_strength(p);
    return std::polar(1.0, cap * state.alpha_abs * std::sin(phase - state.phi_alpha));
}

std::complex<double> coherent_global_phase(const ModelParams& p) {
    validate(p);
    const double lb2 = p.lambda_bar * p.lambda_bar;
    return std::polar(1.0, lb2 * p.omega_tau) *
           std::polar(1.0, -lb2 * std::sin(p.omega_tau));
}

DetectorPositions detector_positions(const ModelParams& p, const Coherent& state) {
    validate(p);
    // phi_lambda(x+) = phi_alpha modulo 2*pi; x- sits half a period away, where
    // the displacement opposes the input amplitude.
    DetectorPositions d;
    d.x_plus = fold_unit((0.5 * p.omega_tau - 0.5 * kPi - state.phi_alpha) / kTwoPi);
    d.x_minus = fold_unit(d.x_plus + 0.5);
    return d;
}

quantized::PhotonDistribution conditional_distribution(const ModelParams& p,
                                                       const Coherent& state,
                                                       double x_over_period,
                                                       double tail_tol) {
    validate(p);
    check_tail_tol(tail_tol, "conditional_distribution");
    const CoherentLabel label = coherent_output_label(p, state, x_over_period);
    return poisson_distribution(std::norm(label.xi), tail_tol);
}

PositionPosterior detector_correlation(const ModelParams& p, const Coherent& state,
                                       int n_detect, int grid_points) {
    validate(p);
    if (n_detect < 0)
        throw DomainError("detector_correlation: n_detect must be >= 0");
    if (grid_points < 2)
        throw DomainError("detector_correlation: grid_points must be >= 2");
    if (coupling_strength(p) == 0.0)
        throw DegenerateError(
            "detector_correlation: the posterior is flat at zero coupling and carries "
            "no position information");

    PositionPosterior post;
    post.n_detect = n_detect;
    post.x_over_period.resize(static_cast<std::size_t>(grid_points));
    post.density.resize(static_cast<std::size_t>(grid_points));

    // Log-likelihood of a Poisson count at each position; n! is a constant
    // over x and drops out of the normalization.
    std::vector<double> log_like(static_cast<std::size_t>(grid_points));
    double max_ll = -std::numeric_limits<double>::infinity();
    for (int j = 0; j < grid_points; ++j) {
        const double x = static_cast<double>(j) / grid_points;
        post.x_over_period[static_cast<std::size_t>(j)] = x;
        const double mu = std::norm(coherent_output_label(p, state, x).xi);
        double ll;
        if (mu == 0.0)
            ll = n_detect == 0 ? 0.0 : -std::numeric_limits<double>::infinity();
        else
            ll = n_detect * std::log(mu) - mu;
        log_like[static_cast<std::size_t>(j)] = ll;
        max_ll = std::max(max_ll, ll);
    }
    if (!std::isfinite(max_ll))
        throw DegenerateError("detector_correlation: the likelihood vanished on the whole grid");

    KahanSum total;
    for (int j = 0; j < grid_points; ++j) {
        const double w = std::exp(log_like[static_cast<std::size_t>(j)] - max_ll);
        post.density[static_cast<std::size_t>(j)] = w;
        total.add(w);
    }
    const double dx = 1.0 / grid_points;
    const double scale = 1.0 / (total.s * dx);
    for (double& v : post.density)
        v *= scale;
    return post;
}

double coherent_field_purity(const ModelParams& p, const Coherent& state,
                             int quad_points) {
    validate(p);
    alpha_of(state); // validates alpha_abs
    if (quad_points < 64)
        throw DomainError("coherent_field_purity: quad_points must be >= 64");

    const double cap = coupling_strength(p);
    // |xi(x) - xi(x')|^2 = 2 Lambda^2 (1 - cos(phi(x) - phi(x'))); alpha and
    // every x-independent phase cancel from the overlap magnitude.
    const auto resolve = [&](int q) {
        KahanSum sum;
        for (int i = 0; i < q; ++i) {
            const double ti = kTwoPi * i / q;
            for (int j = 0; j < q; ++j) {
                const double tj = kTwoPi * j / q;
                sum.add(std::exp(-2.0 * cap * cap * (1.0 - std::cos(ti - tj))));
            }
        }
        return sum.s / (static_cast<double>(q) * static_cast<double>(q));
    };

    const double coarse = resolve(quad_points);
    const double fine = resolve(2 * quad_points);
    if (std::fabs(fine - coarse) > 1e-8)
        throw ConvergenceError(
            "coherent_field_purity: doubling the quadrature moved the result by more "
            "than 1e-8");
    return fine;
}

classical::SidebandSpectrum classical_limit_spectrum(const ModelParams& p,
                                                     const Coherent& state,
                                                     double tail_tol) {
    validate(p);
    check_tail_tol(tail_tol, "classical_limit_spectrum");
    const double cap = std::fabs(coupling_strength(p));
    if (state.alpha_abs < 20.0 * cap)
        throw RegimeError("classical_limit_spectrum: |alpha| < 20*Lambda is outside the "
                          "high-photon regime");

    // The field drives the particle like a classical potential of strength
    // lambda_bar*|alpha| with drive phase -phi_alpha.
    ModelParams effective = p;
    effective.lambda_bar = p.lambda_bar * state.alpha_abs;
    effective.phi = -state.phi_alpha;
    return classical::classical_spectrum(effective, tail_tol);
}

} // namespace qbarrier::states
