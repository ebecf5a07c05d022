// Classical steady state (alpha1, alpha2, beta) of the driven cavity and the
// effective linearization parameters derived from it.
//
// Scaled equations of motion (omega_m = 1, dots in units of omega_m):
//   d(alpha1) = -(i Dc  + kappa1/2) alpha1 + chi0 conj(alpha1) alpha2 + eps1
//   d(alpha2) = -(i Dc' + kappa2/2) alpha2 - chi0/2 alpha1^2        + eps2
//   d(beta)   = -(i + gamma_m/2) beta
//               - i eta (16 |b|^3 cos^3(phi_b) + 12 |b| cos(phi_b))
//               + i (g1 |alpha1|^2 + g2 |alpha2|^2)
// with the detunings computed self-consistently from beta:
//   Dc  = delta_bar_c   - 2 g1 |beta| cos(phi_b)
//   Dc' = 2 delta_bar_c - 2 g2 |beta| cos(phi_b),   phi_b = arg(beta).

#pragma once

#include <array>
#include <complex>

#include "omsq/params.hpp"

namespace omsq {

struct MeanFieldState {
    std::complex<double> alpha1{0.0, 0.0};
    std::complex<double> alpha2{0.0, 0.0};
    std::complex<double> beta{0.0, 0.0};
};

// Time derivative (alpha1', alpha2', beta') at state s.
std::array<std::complex<double>, 3> classical_rhs(const MeanFieldState& s,
                                                  const PhysicalParams& p);

struct SolveOptions {
    double rel_tol = 1e-10;        // residual tolerance, relative to drive scale
    double max_horizon = 1e4;      // relaxation horizon, mechanical periods (2 pi)
    double beta_damping_boost = 0.1; // artificial damping on beta during
                                     // relaxation only; Newton removes the bias
    int newton_max_iter = 60;
    bool probe_branches = true;    // Newton from perturbed starts to flag
                                   // multistability
};

struct MeanFieldResult {
    MeanFieldState state;
    double residual = 0.0;         // norm of classical_rhs at the solution
    bool ambiguous_branch = false; // a distinct fixed point was found nearby
    int relaxation_steps = 0;
    int newton_iterations = 0;
};

// Damped time-relaxation (adaptive embedded Runge-Kutta on the three complex
// amplitudes, with boosted mechanical damping) followed by a Newton polish on
// the six real unknowns with a finite-difference Jacobian.  Relaxation picks
// the dynamically reachable branch.  Throws NoConvergence.
MeanFieldResult solve_steady_state(const PhysicalParams& p,
                                   const MeanFieldState& init = {},
                                   const SolveOptions& opts = {});

// Linearization inputs at a converged state:
//   Lambda = 3 eta (4 |beta|^2 cos^2 phi_b + 1),   G_i = g_i alpha_i,
//   chi = chi0 alpha2 with phi = arg(chi0 alpha2)/2,  phi_b = arg(beta)
// (phi_b = 0 by convention when beta = 0).
EffectiveParams effective_params(const MeanFieldState& s, const PhysicalParams& p);

} // namespace omsq
