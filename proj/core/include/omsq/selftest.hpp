// Built-in verification suite: the three covariance routes cross-checked on
// random stable models, the Routh-Hurwitz/eigenvalue equivalence, covariance
// physicality, squeezing-angle identities and sweep determinism.  The CLI's
// `selftest` subcommand runs this; the acceptance tests reuse pieces of it.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omsq/linear.hpp"
#include "omsq/params.hpp"

namespace omsq {

struct CheckResult {
    std::string name;
    bool pass = false;
    std::string detail;
};

struct SelftestOptions {
    int triangle_draws = 100;       // algebraic vs ODE draws
    int stochastic_draws = 24;      // subset also run through the sampler
    int routh_draws = 10000;
    std::uint64_t seed = 12345;
    int threads = 1;
};

// Random stable model generator used by the triangle checks.  Rates are drawn
// in a moderate-stiffness window so the trajectory ensemble stays affordable;
// draws outside margin/stiffness bounds are rejected and redrawn.
EffectiveParams random_stable_params(std::uint64_t seed, std::uint64_t index);

// The stationary covariance of the Euler-Maruyama chain itself (the fixed
// point of V -> (I + dt A) V (I + dt A)^T + dt D), exactly.  Its offset from
// the continuous solution is the sampler's discretization bias.
Eigen::MatrixXd em_stationary(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D,
                              double dt);

// Step size for the trajectory-ensemble cross-checks: start from the sampler
// default and halve (up to four times) until the exactly-known discretization
// bias is small against the expected statistical resolution of n_traj
// trajectories time-averaged over the second half of horizon T.
double em_dt_for_bias(const LinearModel& m, const Eigen::MatrixXd& V_target,
                      double margin, int n_traj, double T);

// Runs every check, invoking `report` (may be null) after each one.
std::vector<CheckResult> run_selftest(
    const SelftestOptions& opts,
    const std::function<void(const CheckResult&)>& report = nullptr);

} // namespace omsq
