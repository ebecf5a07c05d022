// Steady-state covariance of the linear quadrature dynamics
//   dV/dt = A V + V A^T + D,  stationary:  A V + V A^T + D = 0,
// solved three independent ways: algebraically (vectorized LU over the
// independent entries of symmetric V), by integrating the matrix ODE, and by
// an Euler-Maruyama trajectory ensemble.  The three routes cross-validate
// each other; the algebraic one is the production path.

#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

#include "omsq/linear.hpp"

namespace omsq {

enum class CovarianceMethod { algebraic, ode, stochastic };

struct CovarianceResult {
    Eigen::MatrixXd V;              // symmetric, dim x dim
    double residual = 0.0;          // max-norm of A V + V A^T + D
    CovarianceMethod method = CovarianceMethod::algebraic;
    double margin = 0.0;            // stability margin of the model solved
    bool ill_conditioned = false;   // algebraic: condition estimate > 1e12
    bool insufficient_samples = false; // stochastic: relative SE > 10%
    Eigen::MatrixXd stderr_entries; // stochastic only: per-entry standard error
};

// Algebraic solve.  Throws Unstable when is_stable fails (no steady state).
CovarianceResult solve_steady(const LinearModel& m);

// Classical fixed-step 4th-order integration of dV/dt = A V + V A^T + D from
// V0 over horizon T (time in 1/omega_m, round(T/dt) steps).  The per-step RK4
// update is affine in V, so the n-step result is evaluated by composing the
// one-step map (square-and-multiply); this is exact in exact arithmetic and
// keeps stiff, long-horizon runs cheap.  Throws StepTooLarge when
// dt * ||A||_inf > 0.1.
CovarianceResult integrate_covariance(const LinearModel& m,
                                      const Eigen::MatrixXd& V0, double T,
                                      double dt);

struct StochasticOptions {
    int n_traj = 2000;
    double T = 0.0;    // 0 -> 8/margin
    double dt = 0.0;   // 0 -> 0.01 / max(||A||_inf, 1)
    std::uint64_t seed = 1;
    int threads = 1;   // trajectories are independent; result is thread-count
                       // invariant (fixed-order reduction)
};

// Euler-Maruyama ensemble for df = A f dt + B dW with B B^T = D, so the
// stationary covariance satisfies A V + V A^T + D = 0 (vacuum variance 1/2 in
// the decoupled limit fixes this normalization).  The first half of each
// trajectory is discarded; the remainder is time-and-ensemble averaged.
// Standard errors are estimated across trajectories.
CovarianceResult sample_stochastic(const LinearModel& m,
                                   const StochasticOptions& opts = {});

// Symplectic spectrum of a covariance matrix (moduli of the eigenvalues of
// Omega V, paired).  Physical states have every value >= 1/2.
std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& V);

} // namespace omsq
