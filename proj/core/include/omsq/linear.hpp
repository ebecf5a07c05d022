// Drift and diffusion matrices for the quadrature fluctuations, plus the two
// stability tests (eigenvalue margin and Routh-Hurwitz).
//
// Quadratures are normalized so the vacuum variance is 1/2:
//   X = (da^dag + da)/sqrt(2),  Y = i(da^dag - da)/sqrt(2).
// The reduced model orders them (X_a1, Y_a1, X_b, Y_b); the full model
// (X_a1, Y_a1, X_a2, Y_a2, X_b, Y_b).  All entries in units of omega_m.

#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "omsq/params.hpp"

namespace omsq {

struct LinearModel {
    int dim = 0; // 4 or 6
    Eigen::MatrixXd A; // drift
    Eigen::MatrixXd D; // diffusion (symmetric PSD)
    std::vector<std::string> labels;
};

// 4x4 model of the fluctuations after the fast mode a2 has been eliminated.
// Uses G1 real = |G1| (the model's phase reference makes G1 real).
LinearModel build_reduced(const EffectiveParams& e);

// 6x6 model keeping the a2 fluctuations.  Requires kappa2 > 0; the a1<->a2
// couplings are chi0*conj(alpha1) and -chi0*alpha1 so they vanish when
// chi0_mag == 0, decoupling the a2 block.  The a1 squeezing term uses chi
// (= chi_mag e^{2 i phi}) directly, not chi0*alpha2.
LinearModel build_full(const EffectiveParams& e);

struct StabilityResult {
    bool stable = false;
    double margin = 0.0; // -max Re eig(A); positive iff stable
};

// Dense eigenvalue test.  Throws EigenFailure if the eigensolver fails.
StabilityResult is_stable(const LinearModel& m);

struct RouthResult {
    bool stable = false;
    bool degenerate = false; // a leading Routh coefficient within 1e-12 of 0
    // characteristic polynomial det(sI - A) = s^4 + c[3] s^3 + ... + c[0]
    std::array<double, 4> char_poly{};
    std::array<double, 4> routh_column{}; // leading column below the first row
};

// Routh-Hurwitz sign conditions on the quartic characteristic polynomial.
// dim 4 only; kept as an independent cross-check of is_stable.
RouthResult routh_hurwitz(const LinearModel& m);

// Coefficients of det(sI - A) by the Faddeev-LeVerrier recursion,
// highest power first with leading coefficient 1 omitted:
// returns c such that p(s) = s^n + c[n-1] s^{n-1} + ... + c[0].
std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A);

} // namespace omsq
