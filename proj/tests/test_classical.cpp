#include <doctest.h>

#include "qbarrier/classical.hpp"
#include "qbarrier/errors.hpp"
#include "qbarrier/specfun.hpp"

#include "oracles.hpp"

#include <cmath>
#include <complex>
#include <numbers>

using namespace qbarrier;
using classical::beta_eta;
using classical::classical_spectrum;

namespace {

ModelParams drive(double v_bar, double omega_tau, double phi, double e0_ratio = 1e6) {
    ModelParams p;
    p.lambda_bar = v_bar;
    p.omega_tau = omega_tau;
    p.phi = phi;
    p.e0_ratio = e0_ratio;
    return p;
}

} // namespace

TEST_CASE("beta_eta direct substitutions") {
    const auto [beta, eta] = beta_eta(drive(1.0, std::numbers::pi, 0.0));
    CHECK(beta == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(eta == doctest::Approx(std::numbers::pi).epsilon(1e-15));

    const auto [b2, e2] = beta_eta(drive(0.7, 1.0, -1.0));
    CHECK(b2 == doctest::Approx(1.4 * std::sin(0.5)).epsilon(1e-15));
    CHECK(e2 == doctest::Approx(-0.5 + std::numbers::pi / 2).epsilon(1e-15));
}

TEST_CASE("beta_eta snaps the drive index to zero on resonance") {
    const auto [beta, eta] = beta_eta(drive(5.0, 2.0 * std::numbers::pi, 0.3));
    CHECK(beta == 0.0);
    CHECK(eta == doctest::Approx(0.3 + 1.5 * std::numbers::pi).epsilon(1e-15));

    const auto [b4, e4] = beta_eta(drive(2.0, 4.0 * std::numbers::pi, 0.0));
    CHECK(b4 == 0.0);
    CHECK(e4 == doctest::Approx(2.0 * std::numbers::pi + 0.5 * std::numbers::pi).epsilon(1e-15));
}

TEST_CASE("spectrum amplitudes are Bessel weights with the drive phase") {
    const ModelParams p = drive(1.0, std::numbers::pi, 0.0); // beta = 2
    const auto spec = classical_spectrum(p, 1e-12);
    const auto [beta, eta] = beta_eta(p);

    const long double j0 = oracles::bessel_series(0, 2.0L);
    CHECK(std::fabs(spec.probability(0) - static_cast<double>(j0 * j0)) < 1e-13);
    CHECK(spec.probability(0) == doctest::Approx(0.0502).epsilon(2e-3));

    for (int n = -5; n <= 5; ++n) {
        const long double j = oracles::bessel_series(std::abs(n), 2.0L);
        CHECK(std::fabs(spec.probability(n) - static_cast<double>(j * j)) < 1e-13);
        const std::complex<double> expected =
            specfun::bessel_j(n, beta) * std::polar(1.0, -n * eta);
        CHECK(std::abs(spec.amplitude(n) - expected) < 1e-15);
    }
}

TEST_CASE("spectrum is normalized with a certified tail") {
    for (double v_bar : {0.3, 1.0, 4.0}) {
        const auto spec = classical_spectrum(drive(v_bar, std::numbers::pi, 0.7), 1e-12);
        CHECK(spec.tail_bound <= 1e-12);
        CHECK(std::fabs(spec.total_probability() - 1.0) < 1e-12);
        CHECK(spec.total_probability() >= 1.0 - 1e-12);
    }
}

TEST_CASE("opposite sidebands carry identical weight as computed") {
    const auto spec = classical_spectrum(drive(1.3, 2.1, 0.4), 1e-12);
    for (int n = 1; n <= spec.n_max; ++n)
        CHECK(spec.probability(n) == spec.probability(-n));
}

TEST_CASE("mean energy shift vanishes") {
    for (double v_bar : {1.0, 3.65})
        for (double phi : {0.0, 1.1}) {
            const auto spec = classical_spectrum(drive(v_bar, 2.4, phi), 1e-13);
            CHECK(std::fabs(spec.mean_shift()) < 1e-12);
        }
}

TEST_CASE("resonance passes the wave through unaltered") {
    const auto spec = classical_spectrum(drive(5.0, 2.0 * std::numbers::pi, 0.3), 1e-12);
    CHECK(spec.n_min == 0);
    CHECK(spec.n_max == 0);
    CHECK(spec.amplitude(0) == std::complex<double>{1.0, 0.0});
    CHECK(spec.tail_bound == 0.0);
    CHECK(spec.k_ratio[0] == 1.0);
    CHECK(spec.mean_shift() == 0.0);
}

TEST_CASE("tightening the tail tolerance never changes retained amplitudes") {
    const ModelParams p = drive(9.0, std::numbers::pi, 0.2); // beta = 18, wide window
    const auto coarse = classical_spectrum(p, 1e-3);
    const auto fine = classical_spectrum(p, 1e-14);
    CHECK(fine.n_max >= coarse.n_max);
    for (int n = coarse.n_min; n <= coarse.n_max; ++n) {
        CHECK(fine.amplitude(n).real() == coarse.amplitude(n).real());
        CHECK(fine.amplitude(n).imag() == coarse.amplitude(n).imag());
    }
}

TEST_CASE("amplitude outside the window reads as zero") {
    const auto spec = classical_spectrum(drive(0.5, 1.0, 0.0), 1e-10);
    CHECK(spec.amplitude(spec.n_max + 1) == std::complex<double>{0.0, 0.0});
    CHECK(spec.probability(spec.n_min - 3) == 0.0);
}

TEST_CASE("kinematic ratios follow the sideband index") {
    const auto spec = classical_spectrum(drive(1.0, std::numbers::pi, 0.0, 100.0), 1e-12);
    for (int n = spec.n_min; n <= spec.n_max; ++n) {
        const double expected = std::sqrt(1.0 + n / 100.0);
        CHECK(spec.k_ratio[static_cast<std::size_t>(n - spec.n_min)] ==
              doctest::Approx(expected).epsilon(1e-15));
    }
}

TEST_CASE("low incident energy turns sidebands evanescent") {
    CHECK_THROWS_AS(classical_spectrum(drive(3.0, std::numbers::pi, 0.0, 5.0), 1e-12),
                    EvanescentModeError);
}

TEST_CASE("spectrum rejects bad tolerances and parameters") {
    CHECK_THROWS_AS(classical_spectrum(drive(1.0, 1.0, 0.0), 0.0), DomainError);
    CHECK_THROWS_AS(classical_spectrum(drive(1.0, 1.0, 0.0), 1.0), DomainError);
    ModelParams bad = drive(1.0, 1.0, 0.0);
    bad.e0_ratio = -2.0;
    CHECK_THROWS_AS(classical_spectrum(bad, 1e-12), DomainError);
    bad = drive(-0.5, 1.0, 0.0);
    CHECK_THROWS_AS(beta_eta(bad), DomainError);
}
