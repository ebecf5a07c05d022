#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "omsq/linear.hpp"
#include "omsq/lyapunov.hpp"

using namespace omsq;

namespace {

EffectiveParams decoupled(double kappa1 = 3.0, double gamma_m = 0.4,
                          double n_th = 0.0) {
    EffectiveParams e;
    e.kappa1 = kappa1;
    e.gamma_m = gamma_m;
    e.n_th = n_th;
    return e;
}

// HURSB operating point with the medium on: kappa1 = 100, |chi| = 40,
// phi = pi/2, G1 = 0.1, Lambda = 10, delta_c = 10, gamma_m = 1e-6, n_th = 0.
EffectiveParams hursb_with_medium() {
    EffectiveParams e;
    e.kappa1 = 100.0;
    e.gamma_m = 1e-6;
    e.G1_mag = 0.1;
    e.phi = 0.5 * kPi;
    e.delta_c = 10.0;
    e.Lambda = 10.0;
    e.chi_mag = 40.0;
    return e;
}

} // namespace

TEST_CASE("steady covariance: decoupled vacuum is the identity over two") {
    const CovarianceResult cov = solve_steady(build_reduced(decoupled()));
    CHECK((cov.V - Eigen::MatrixXd::Identity(4, 4) / 2).cwiseAbs().maxCoeff() <
          1e-9);
    CHECK(cov.residual < 1e-9);
    CHECK_FALSE(cov.ill_conditioned);
}

TEST_CASE("steady covariance: thermal mechanical block") {
    const CovarianceResult cov =
        solve_steady(build_reduced(decoupled(3.0, 0.4, 1000.0)));
    CHECK(cov.V(2, 2) == doctest::Approx(1000.5).epsilon(1e-12));
    CHECK(cov.V(3, 3) == doctest::Approx(1000.5).epsilon(1e-12));
    CHECK(cov.V(2, 3) == doctest::Approx(0.0).epsilon(1e-9));
}

TEST_CASE("steady covariance: mechanical variance drops below zero point in "
          "the HURSB regime with the medium on") {
    // value frozen from an independent Lyapunov solve of the same model
    const CovarianceResult cov = solve_steady(build_reduced(hursb_with_medium()));
    CHECK(cov.V(2, 2) == doctest::Approx(0.150464).epsilon(1e-4));
    CHECK(cov.V(2, 2) < 0.25);
    CHECK(cov.margin == doctest::Approx(1.55413e-5).epsilon(1e-3));
}

TEST_CASE("steady covariance refuses unstable models") {
    EffectiveParams e = hursb_with_medium();
    e.phi = 0.7 * kPi; // inside the unstable band
    e.Lambda = 1.0;
    CHECK_THROWS_AS(solve_steady(build_reduced(e)), Unstable);
}

TEST_CASE("ode route: the steady state is an exact fixed point") {
    const LinearModel m = build_reduced(decoupled());
    const CovarianceResult steady = solve_steady(m);
    for (double T : {0.5, 5.0, 500.0}) {
        const CovarianceResult r = integrate_covariance(m, steady.V, T, 1e-2);
        CHECK((r.V - steady.V).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("ode route: relaxes to the steady state from a hot start") {
    const LinearModel m = build_reduced(decoupled());
    const Eigen::MatrixXd V0 = 3.0 * Eigen::MatrixXd::Identity(4, 4);
    const CovarianceResult steady = solve_steady(m);
    const CovarianceResult r =
        integrate_covariance(m, V0, 50.0 / steady.margin, 1e-2);
    CHECK((r.V - steady.V).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("ode route: matches the algebraic solve at the HURSB point") {
    const LinearModel m = build_reduced(hursb_with_medium());
    const CovarianceResult alg = solve_steady(m);
    const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
    const CovarianceResult ode = integrate_covariance(
        m, Eigen::MatrixXd::Identity(4, 4) / 2, 50.0 / alg.margin, 0.02 / normA);
    CHECK((ode.V - alg.V).cwiseAbs().maxCoeff() < 1e-6);
}

TEST_CASE("ode route: step guard") {
    const LinearModel m = build_reduced(hursb_with_medium());
    CHECK_THROWS_AS(
        integrate_covariance(m, Eigen::MatrixXd::Identity(4, 4) / 2, 1.0, 0.01),
        StepTooLarge);
}

TEST_CASE("stochastic route: vacuum within three standard errors") {
    const LinearModel m = build_reduced(decoupled());
    StochasticOptions so;
    so.seed = 7;
    so.threads = 2;
    const CovarianceResult st = sample_stochastic(m, so);
    CHECK_FALSE(st.insufficient_samples);
    for (int i = 0; i < 4; ++i)
        for (int j = i; j < 4; ++j) {
            const double target = i == j ? 0.5 : 0.0;
            CHECK(std::abs(st.V(i, j) - target) <=
                  3.0 * st.stderr_entries(i, j) + 1e-12);
        }
}

TEST_CASE("stochastic route: thermal block variance n_th + 1/2") {
    const LinearModel m = build_reduced(decoupled(3.0, 0.4, 1000.0));
    StochasticOptions so;
    so.seed = 8;
    so.threads = 2;
    // dt small enough that the Euler-Maruyama stationary bias
    // (~dt (omega^2 + gamma^2/4)/gamma relative) stays well below 3 SE
    so.dt = 1e-3;
    const CovarianceResult st = sample_stochastic(m, so);
    CHECK(std::abs(st.V(2, 2) - 1000.5) <= 3.0 * st.stderr_entries(2, 2));
    CHECK(std::abs(st.V(3, 3) - 1000.5) <= 3.0 * st.stderr_entries(3, 3));
}

TEST_CASE("stochastic route is deterministic and thread-count invariant") {
    const LinearModel m = build_reduced(decoupled());
    StochasticOptions so;
    so.seed = 11;
    so.n_traj = 64;
    const CovarianceResult a = sample_stochastic(m, so);
    const CovarianceResult b = sample_stochastic(m, so);
    so.threads = 3;
    const CovarianceResult c = sample_stochastic(m, so);
    CHECK((a.V - b.V).cwiseAbs().maxCoeff() == 0.0);
    CHECK((a.V - c.V).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("symplectic eigenvalues: vacuum and thermal references") {
    const Eigen::MatrixXd vac = Eigen::MatrixXd::Identity(4, 4) / 2;
    const auto nu = symplectic_eigenvalues(vac);
    REQUIRE(nu.size() == 2);
    CHECK(nu[0] == doctest::Approx(0.5));
    CHECK(nu[1] == doctest::Approx(0.5));

    Eigen::MatrixXd th = vac;
    th(2, 2) = th(3, 3) = 1000.5;
    const auto nu2 = symplectic_eigenvalues(th);
    CHECK(*std::max_element(nu2.begin(), nu2.end()) == doctest::Approx(1000.5));
    CHECK(*std::min_element(nu2.begin(), nu2.end()) == doctest::Approx(0.5));
}

TEST_CASE("physicality of the HURSB squeezed state") {
    const CovarianceResult cov = solve_steady(build_reduced(hursb_with_medium()));
    const auto nu = symplectic_eigenvalues(cov.V);
    for (double v : nu) CHECK(v >= 0.5 - 1e-9);
}
