#include <doctest.h>

#include <cmath>
#include <complex>

#include "omsq/meanfield.hpp"

using namespace omsq;

namespace {

using Complex = std::complex<double>;

PhysicalParams lab_params(double P = 5e-3, double chi0 = 1e-3) {
    PhysicalParams p;
    p.omega_m = 2.0 * kPi * 20e6;
    p.omega_L = 2.5e7;
    p.delta_bar_c = 10.0;
    p.kappa1 = 100.0;
    p.kappa2 = 2000.0;
    p.gamma_m = 1e-6;
    p.g1 = 1e-4;
    p.g2 = 1e-4;
    p.eta = 1e-4;
    p.chi0_mag = chi0;
    p.P1 = P;
    p.P2 = P;
    return p;
}

// Second, literal transcription of the classical equations of motion,
// written independently of the library implementation.
std::array<Complex, 3> rhs_oracle(const MeanFieldState& s,
                                  const PhysicalParams& p) {
    const auto d = drive_amplitudes(p);
    const Complex I(0, 1);
    const double b = std::abs(s.beta);
    const double pb = b > 0 ? std::arg(s.beta) : 0.0;
    const double dc = p.delta_bar_c - 2 * p.g1 * b * std::cos(pb);
    const double dcp = 2 * p.delta_bar_c - 2 * p.g2 * b * std::cos(pb);
    const Complex chi0 = std::polar(p.chi0_mag, p.chi0_phase);
    return {
        -(I * dc + p.kappa1 / 2) * s.alpha1 + chi0 * std::conj(s.alpha1) * s.alpha2 + d.eps1,
        -(I * dcp + p.kappa2 / 2) * s.alpha2 - chi0 * 0.5 * s.alpha1 * s.alpha1 + d.eps2,
        -(I + p.gamma_m / 2) * s.beta -
            I * p.eta * (16 * std::pow(b, 3) * std::pow(std::cos(pb), 3) +
                         12 * b * std::cos(pb)) +
            I * (p.g1 * std::norm(s.alpha1) + p.g2 * std::norm(s.alpha2)),
    };
}

// Independent fixed point for chi0 = 0: with the drives real and gamma_m
// tiny, beta is real to O(gamma_m^2) and the optical amplitudes follow beta
// in closed form, leaving one scalar balance
//   b (1 + 12 eta) + 16 eta b^3 = g1 |a1(b)|^2 + g2 |a2(b)|^2,
// bracketed on a dense b grid and refined by bisection.
double beta_grid_bisection_oracle(const PhysicalParams& p) {
    const auto d = drive_amplitudes(p);
    auto forcing = [&](double b) {
        const double dc = p.delta_bar_c - 2 * p.g1 * b;
        const double dcp = 2 * p.delta_bar_c - 2 * p.g2 * b;
        const double a1sq = d.eps1 * d.eps1 /
                            (p.kappa1 * p.kappa1 / 4 + dc * dc);
        const double a2sq = d.eps2 * d.eps2 /
                            (p.kappa2 * p.kappa2 / 4 + dcp * dcp);
        return p.g1 * a1sq + p.g2 * a2sq;
    };
    auto balance = [&](double b) {
        return b * (1 + 12 * p.eta) + 16 * p.eta * b * b * b - forcing(b);
    };
    double lo = 0.0, hi = 0.0;
    const double bmax = std::cbrt(forcing(0.0) / (16 * p.eta)) * 2 + 10;
    const int n = 20000;
    for (int k = 0; k < n; ++k) {
        const double b = bmax * (k + 1) / n;
        if (balance(b) > 0) {
            hi = b;
            lo = bmax * k / n;
            break;
        }
    }
    REQUIRE(hi > 0);
    for (int it = 0; it < 200; ++it) {
        const double mid = (lo + hi) / 2;
        (balance(mid) > 0 ? hi : lo) = mid;
    }
    return (lo + hi) / 2;
}

} // namespace

TEST_CASE("classical rhs: undriven origin is a fixed point") {
    PhysicalParams p = lab_params(0.0);
    const auto f = classical_rhs({}, p);
    CHECK(std::abs(f[0]) == 0.0);
    CHECK(std::abs(f[1]) == 0.0);
    CHECK(std::abs(f[2]) == 0.0);
}

TEST_CASE("classical rhs: the drive enters the first component") {
    PhysicalParams p = lab_params();
    const auto f = classical_rhs({}, p);
    const auto d = drive_amplitudes(p);
    CHECK(f[0].real() == doctest::Approx(d.eps1));
    CHECK(f[0].imag() == 0.0);
    CHECK(f[1].real() == doctest::Approx(d.eps2));
}

TEST_CASE("classical rhs matches an independent transcription") {
    const PhysicalParams p = lab_params();
    const MeanFieldState states[] = {
        {{120.0, -40.0}, {300.0, 10.0}, {80.0, 0.5}},
        {{-5.0, 2.0}, {0.0, 0.0}, {0.0, -3.0}},
        {{1e3, 1e3}, {-2e2, 4e2}, {500.0, 1.0}},
    };
    for (const auto& s : states) {
        const auto got = classical_rhs(s, p);
        const auto want = rhs_oracle(s, p);
        for (int k = 0; k < 3; ++k) {
            const double scale = std::max(std::abs(want[k]), 1.0);
            CHECK(std::abs(got[k] - want[k]) / scale < 1e-14);
        }
    }
}

TEST_CASE("steady state: zero drive converges to the origin") {
    PhysicalParams p = lab_params(0.0);
    const MeanFieldResult r = solve_steady_state(p);
    CHECK(std::abs(r.state.alpha1) < 1e-8);
    CHECK(std::abs(r.state.alpha2) < 1e-8);
    CHECK(std::abs(r.state.beta) < 1e-8);
}

TEST_CASE("steady state: residual below tolerance at full drive") {
    const PhysicalParams p = lab_params();
    const MeanFieldResult r = solve_steady_state(p);
    const auto f = classical_rhs(r.state, p);
    const double res = std::sqrt(std::norm(f[0]) + std::norm(f[1]) + std::norm(f[2]));
    const double drive = drive_amplitudes(p).eps2;
    CHECK(res / drive < 1e-9);
}

TEST_CASE("steady state: grid+bisection oracle at chi0 = 0") {
    const PhysicalParams p = lab_params(5e-3, 0.0);
    const MeanFieldResult r = solve_steady_state(p);
    const double b_oracle = beta_grid_bisection_oracle(p);
    CHECK(std::abs(r.state.beta) == doctest::Approx(b_oracle).epsilon(1e-8));
    // optical amplitude follows beta in closed form when chi0 = 0
    const double dc = p.delta_bar_c - 2 * p.g1 * b_oracle;
    const double a1 = drive_amplitudes(p).eps1 /
                      std::hypot(p.kappa1 / 2, dc);
    CHECK(std::abs(r.state.alpha1) == doctest::Approx(a1).epsilon(1e-8));
}

TEST_CASE("steady state: linear response at weak drive") {
    PhysicalParams p = lab_params(1e-12, 0.0);
    const MeanFieldResult r = solve_steady_state(p);
    const double expect =
        drive_amplitudes(p).eps1 / std::hypot(p.kappa1 / 2, p.delta_bar_c);
    CHECK(std::abs(r.state.alpha1) == doctest::Approx(expect).epsilon(0.01));
}

TEST_CASE("steady state: laboratory drive lands in the expected window") {
    const MeanFieldResult r = solve_steady_state(lab_params());
    CHECK(std::abs(r.state.alpha1) > 1000.0);
    CHECK(std::abs(r.state.alpha1) < 4000.0);
    // the mechanical phase relaxes to ~0 (cos phi_b = 1 branch)
    CHECK(std::abs(std::arg(r.state.beta)) < 1e-3);
}

TEST_CASE("effective params: formulas at a synthetic state") {
    const PhysicalParams p = lab_params();

    // beta = 0: Lambda = 3 eta, phi_b = 0 by convention
    MeanFieldState s0;
    const EffectiveParams e0 = effective_params(s0, p);
    CHECK(e0.Lambda == doctest::Approx(3 * p.eta));
    CHECK(e0.phi_b == 0.0);

    // |beta| = 500, phi_b = 0: Lambda = 3e-4 (4 * 250000 + 1)
    MeanFieldState s1;
    s1.beta = 500.0;
    const EffectiveParams e1 = effective_params(s1, p);
    CHECK(e1.Lambda == doctest::Approx(300.0003).epsilon(1e-10));

    // |beta| = 111, phi_b = pi/6: Lambda ~ 11
    MeanFieldState s2;
    s2.beta = std::polar(111.0, kPi / 6);
    const EffectiveParams e2 = effective_params(s2, p);
    CHECK(e2.Lambda == doctest::Approx(11.08).epsilon(1e-2));

    // chi follows chi0 alpha2 with phi = arg(chi0 alpha2)/2
    MeanFieldState s3;
    s3.alpha2 = std::polar(4e4, 0.6);
    const EffectiveParams e3 = effective_params(s3, p);
    CHECK(e3.chi_mag == doctest::Approx(40.0));
    CHECK(e3.phi == doctest::Approx(0.3));
}

TEST_CASE("effective params: round trip from the solved state") {
    const PhysicalParams p = lab_params();
    const MeanFieldResult r = solve_steady_state(p);
    const EffectiveParams e = effective_params(r.state, p);
    const double b = std::abs(r.state.beta);
    const double cb = std::cos(e.phi_b);
    CHECK(e.Lambda ==
          doctest::Approx(3 * p.eta * (4 * b * b * cb * cb + 1)).epsilon(1e-14));
    CHECK(e.Lambda >= 3 * p.eta);
    CHECK(e.G1_mag == doctest::Approx(p.g1 * std::abs(r.state.alpha1)));
    CHECK(e.chi_mag == doctest::Approx(p.chi0_mag * std::abs(r.state.alpha2)));
    CHECK(e.kappa1 == p.kappa1);
    CHECK(e.n_th == p.n_th);
}
