// Mechanical squeezing metric: S_dB(theta) = -10 log10(2 Var(Z_theta)) for the
// rotated mechanical quadrature Z_theta = X_b cos(theta) + Y_b sin(theta).
// 0 dB is the vacuum level (variance 1/2); "beyond 3 dB" means variance < 1/4.

#pragma once

#include <vector>

#include <Eigen/Dense>

#include "omsq/lyapunov.hpp"

namespace omsq {

struct AnglePoint {
    double theta = 0.0;
    double variance = 0.0;
    double s_db = 0.0;
};

struct SqueezingReport {
    double theta_opt = 0.0;   // in (-pi/2, pi/2]
    double s_opt_db = 0.0;
    double var_Xb = 0.0;
    double var_Yb = 0.0;
    double cov_XbYb = 0.0;
    bool beats_3db = false;   // s_opt_db > 3
    bool degenerate = false;  // isotropic mechanical state, all angles equal
    std::vector<AnglePoint> curve; // sampled over [-pi, pi]
};

// Var(Z_theta) = V33 cos^2 + V44 sin^2 + 2 V34 sin cos (1-based indices 3,4 =
// X_b, Y_b of the 4x4 model).
double quadrature_variance(const Eigen::MatrixXd& V, double theta);

// -10 log10(2 Var); throws NonPositiveVariance for unphysical input.
double squeezing_db(const Eigen::MatrixXd& V, double theta);

struct OptimalAngle {
    double theta_opt = 0.0;
    double s_opt_db = 0.0;
    bool degenerate = false;
};

// Closed-form minimizer of the variance quadratic form, cross-checked against
// a 720-point grid scan on every call.
OptimalAngle optimal_angle(const Eigen::MatrixXd& V);

// Full report with a sampled S(theta) curve (n_curve points over [-pi, pi]).
SqueezingReport squeezing_report(const Eigen::MatrixXd& V, int n_curve = 721);

} // namespace omsq
