#include "omsq/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "omsq/linear.hpp"
#include "omsq/lyapunov.hpp"
#include "omsq/rng.hpp"
#include "omsq/squeezing.hpp"
#include "omsq/sweep.hpp"

namespace omsq {

namespace {

double scaled_mismatch(const Eigen::MatrixXd& V1, const Eigen::MatrixXd& V2) {
    const double scale =
        std::max({V1.cwiseAbs().maxCoeff(), V2.cwiseAbs().maxCoeff(), 1e-300});
    double worst = 0.0;
    for (int i = 0; i < V1.rows(); ++i)
        for (int j = 0; j < V1.cols(); ++j)
            worst = std::max(worst, std::abs(V1(i, j) - V2(i, j)) /
                                        std::max(std::abs(V1(i, j)), 0.01 * scale));
    return worst;
}

EffectiveParams random_params_any(Rng& rng) {
    EffectiveParams e;
    e.kappa1 = 0.8 + 1.7 * rng.next_double();
    e.gamma_m = 0.2 + 0.6 * rng.next_double();
    e.G1_mag = 1.2 * rng.next_double();
    e.Lambda = 2.0 * rng.next_double();
    e.chi_mag = 0.8 * rng.next_double();
    e.phi = kPi * rng.next_double();
    e.delta_c = -4.0 + 8.0 * rng.next_double();
    e.n_th = 4.0 * rng.next_double();
    return e;
}

} // namespace

Eigen::MatrixXd em_stationary(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D,
                              double dt) {
    const int n = static_cast<int>(A.rows());
    const Eigen::MatrixXd M = Eigen::MatrixXd::Identity(n, n) + dt * A;
    Eigen::MatrixXd K = Eigen::MatrixXd::Identity(n * n, n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j)
            for (int k = 0; k < n; ++k)
                for (int l = 0; l < n; ++l)
                    K(i * n + j, k * n + l) -= M(i, k) * M(j, l);
    Eigen::VectorXd d(n * n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) d(i * n + j) = dt * D(i, j);
    const Eigen::VectorXd v = K.partialPivLu().solve(d);
    Eigen::MatrixXd V(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) V(i, j) = v(i * n + j);
    return (V + V.transpose()) / 2;
}

double em_dt_for_bias(const LinearModel& m, const Eigen::MatrixXd& V_target,
                      double margin, int n_traj, double T) {
    const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
    double dt = 0.01 / std::max(normA, 1.0);
    for (int halve = 0; halve < 4; ++halve) {
        const Eigen::MatrixXd Vem = em_stationary(m.A, m.D, dt);
        // expected per-entry standard error of the time-and-ensemble average
        // (correlation time ~ 1/(2 margin), sampling window T/2)
        const double window_factor = 2.0 / (n_traj * margin * (T / 2));
        bool ok = true;
        for (int i = 0; i < m.dim && ok; ++i)
            for (int j = i; j < m.dim && ok; ++j) {
                const double se_est = std::sqrt(
                    (V_target(i, i) * V_target(j, j) +
                     V_target(i, j) * V_target(i, j)) * window_factor);
                if (std::abs(Vem(i, j) - V_target(i, j)) > 0.3 * se_est)
                    ok = false;
            }
        if (ok) break;
        dt /= 2;
    }
    return dt;
}

EffectiveParams random_stable_params(std::uint64_t seed, std::uint64_t index) {
    Rng rng(seed, index);
    for (int attempt = 0; attempt < 1000; ++attempt) {
        EffectiveParams e = random_params_any(rng);
        const LinearModel m = build_reduced(e);
        const StabilityResult st = is_stable(m);
        if (!st.stable) continue;
        const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
        // moderate stiffness keeps the trajectory ensemble affordable and its
        // discretization bias well below the statistical error
        if (st.margin < 0.12 || normA / st.margin > 60.0) continue;
        return e;
    }
    throw Error("random_stable_params: rejection sampling failed");
}

std::vector<CheckResult> run_selftest(
    const SelftestOptions& opts,
    const std::function<void(const CheckResult&)>& report) {
    std::vector<CheckResult> results;
    auto add = [&](CheckResult r) {
        if (report) report(r);
        results.push_back(std::move(r));
    };

    // ---- vacuum baseline: decoupled model -> V = I/2, S = 0 dB
    {
        CheckResult r{"vacuum_baseline", true, ""};
        EffectiveParams e;
        e.kappa1 = 3.0;
        e.gamma_m = 0.4;
        const CovarianceResult cov = solve_steady(build_reduced(e));
        const double err =
            (cov.V - Eigen::MatrixXd::Identity(4, 4) / 2).cwiseAbs().maxCoeff();
        const double s0 = squeezing_db(cov.V, 0.0);
        r.pass = err < 1e-9 && std::abs(s0) < 1e-12;
        std::ostringstream os;
        os << "max|V - I/2| = " << err << ", S(0) = " << s0 << " dB";
        r.detail = os.str();
        add(r);
    }

    // ---- thermal mechanical block: Var = n_th + 1/2
    {
        CheckResult r{"thermal_block", true, ""};
        EffectiveParams e;
        e.kappa1 = 3.0;
        e.gamma_m = 0.4;
        e.n_th = 1000.0;
        const CovarianceResult cov = solve_steady(build_reduced(e));
        const double err = std::max(std::abs(cov.V(2, 2) - 1000.5),
                                    std::abs(cov.V(3, 3) - 1000.5));
        r.pass = err < 1e-9 * 1000.5;
        std::ostringstream os;
        os << "max|Var - (n_th + 1/2)| = " << err;
        r.detail = os.str();
        add(r);
    }

    // ---- oracle triangle: algebraic vs ODE on every draw, and the
    // trajectory ensemble on a subset (3 SE per entry)
    {
        CheckResult r{"oracle_triangle", true, ""};
        double worst_ode = 0.0;
        double worst_z = 0.0;
        int failures = 0;
        for (int k = 0; k < opts.triangle_draws; ++k) {
            const EffectiveParams e = random_stable_params(opts.seed, k);
            const LinearModel m = build_reduced(e);
            const CovarianceResult alg = solve_steady(m);
            const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
            const CovarianceResult ode = integrate_covariance(
                m, Eigen::MatrixXd::Identity(4, 4) / 2, 50.0 / alg.margin,
                0.02 / normA);
            const double mm = scaled_mismatch(alg.V, ode.V);
            worst_ode = std::max(worst_ode, mm);
            if (mm > 1e-5) ++failures;

            if (k < opts.stochastic_draws) {
                StochasticOptions so;
                so.seed = opts.seed + 1000 + k;
                so.threads = opts.threads;
                so.T = 6.0 / alg.margin;
                so.dt = em_dt_for_bias(m, alg.V, alg.margin, so.n_traj, so.T);
                const CovarianceResult st = sample_stochastic(m, so);
                for (int i = 0; i < 4; ++i)
                    for (int j = i; j < 4; ++j) {
                        const double se = st.stderr_entries(i, j);
                        if (!(se > 0.0)) continue;
                        const double z = std::abs(st.V(i, j) - alg.V(i, j)) / se;
                        worst_z = std::max(worst_z, z);
                        if (z > 3.0) ++failures;
                    }
            }
        }
        r.pass = failures == 0;
        std::ostringstream os;
        os << opts.triangle_draws << " draws (" << opts.stochastic_draws
           << " with trajectories): worst ODE mismatch " << worst_ode
           << ", worst |z| " << worst_z;
        r.detail = os.str();
        add(r);
    }

    // ---- Routh-Hurwitz vs eigenvalue stability on random drift matrices
    {
        CheckResult r{"routh_hurwitz_equivalence", true, ""};
        Rng rng(opts.seed, 77);
        int disagreements = 0, degenerate = 0, stable_count = 0;
        for (int k = 0; k < opts.routh_draws; ++k) {
            EffectiveParams e = random_params_any(rng);
            // widen the ranges: this check wants unstable models too
            e.G1_mag *= 4.0;
            e.chi_mag *= 4.0;
            const LinearModel m = build_reduced(e);
            const RouthResult rh = routh_hurwitz(m);
            if (rh.degenerate) {
                ++degenerate;
                continue;
            }
            const StabilityResult st = is_stable(m);
            if (std::abs(st.margin) < 1e-9) continue; // numerically marginal
            if (rh.stable != st.stable) ++disagreements;
            if (st.stable) ++stable_count;
        }
        r.pass = disagreements == 0;
        std::ostringstream os;
        os << opts.routh_draws << " draws: " << disagreements << " disagreements, "
           << degenerate << " degenerate skipped, " << stable_count << " stable";
        r.detail = os.str();
        add(r);
    }

    // ---- physicality: symplectic eigenvalues >= 1/2 on random stable models
    {
        CheckResult r{"symplectic_physicality", true, ""};
        double worst = 1e300;
        for (int k = 0; k < 200; ++k) {
            const EffectiveParams e = random_stable_params(opts.seed + 9, k);
            const CovarianceResult cov = solve_steady(build_reduced(e));
            const auto nu = symplectic_eigenvalues(cov.V);
            worst = std::min(worst, *std::min_element(nu.begin(), nu.end()));
        }
        r.pass = worst >= 0.5 - 1e-9;
        std::ostringstream os;
        os << "min symplectic eigenvalue over 200 models: " << worst;
        r.detail = os.str();
        add(r);
    }

    // ---- S(theta) pi-periodicity and the optimal-angle identities
    {
        CheckResult r{"squeezing_angle_identities", true, ""};
        double worst_period = 0.0, worst_heis = 1e300;
        for (int k = 0; k < 200; ++k) {
            const EffectiveParams e = random_stable_params(opts.seed + 21, k);
            const CovarianceResult cov = solve_steady(build_reduced(e));
            Rng rng(opts.seed, 500 + k);
            for (int j = 0; j < 8; ++j) {
                const double th = -kPi + 2 * kPi * rng.next_double();
                worst_period = std::max(
                    worst_period, std::abs(quadrature_variance(cov.V, th) -
                                           quadrature_variance(cov.V, th + kPi)));
            }
            const OptimalAngle opt = optimal_angle(cov.V);
            const double prod =
                quadrature_variance(cov.V, opt.theta_opt) *
                quadrature_variance(cov.V, opt.theta_opt + kPi / 2);
            worst_heis = std::min(worst_heis, prod);
        }
        r.pass = worst_period < 1e-10 && worst_heis >= 0.25 - 1e-9;
        std::ostringstream os;
        os << "max |Var(th) - Var(th+pi)| = " << worst_period
           << ", min Var(th*) Var(th*+pi/2) = " << worst_heis;
        r.detail = os.str();
        add(r);
    }

    // ---- sweep determinism and thread-count invariance
    {
        CheckResult r{"sweep_determinism", true, ""};
        SweepSpec spec = preset("fig6");
        spec.axes[0].n_points = 11;
        spec.axes[1].n_points = 11;
        spec.seed = opts.seed;
        const std::string a = run(spec, {.threads = 1}).to_csv();
        const std::string b = run(spec, {.threads = 1}).to_csv();
        const std::string c = run(spec, {.threads = 4}).to_csv();
        r.pass = (a == b) && (a == c);
        r.detail = r.pass ? "byte-identical across reruns and thread counts"
                          : "output differs between runs";
        add(r);
    }

    // ---- monotone thermal loading of the mechanical variances
    {
        CheckResult r{"thermal_monotonicity", true, ""};
        bool mono = true;
        for (int k = 0; k < 40 && mono; ++k) {
            EffectiveParams e = random_stable_params(opts.seed + 33, k);
            double prev_x = -1.0, prev_y = -1.0;
            for (double nth : {0.0, 1.0, 4.0, 16.0, 64.0}) {
                e.n_th = nth;
                const CovarianceResult cov = solve_steady(build_reduced(e));
                if (cov.V(2, 2) < prev_x - 1e-12 || cov.V(3, 3) < prev_y - 1e-12)
                    mono = false;
                prev_x = cov.V(2, 2);
                prev_y = cov.V(3, 3);
            }
        }
        r.pass = mono;
        r.detail = mono ? "Var(X_b), Var(Y_b) nondecreasing in n_th (40 models)"
                        : "found a model with decreasing variance under heating";
        add(r);
    }

    return results;
}

} // namespace omsq
