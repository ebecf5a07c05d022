#include "omsq/squeezing.hpp"

#include <cmath>
#include <stdexcept>

namespace omsq {

namespace {

void require_dim4(const Eigen::MatrixXd& V) {
    if (V.rows() != 4 || V.cols() != 4)
        throw std::invalid_argument("squeezing expects the 4x4 covariance "
                                    "(X_a1, Y_a1, X_b, Y_b)");
}

double wrap_half_open(double theta) {
    // into (-pi/2, pi/2]; the variance form is pi-periodic
    while (theta <= -kPi / 2) theta += kPi;
    while (theta > kPi / 2) theta -= kPi;
    return theta;
}

} // namespace

double quadrature_variance(const Eigen::MatrixXd& V, double theta) {
    require_dim4(V);
    const double c = std::cos(theta), s = std::sin(theta);
    return V(2, 2) * c * c + V(3, 3) * s * s + 2.0 * V(2, 3) * s * c;
}

double squeezing_db(const Eigen::MatrixXd& V, double theta) {
    const double var = quadrature_variance(V, theta);
    if (!(var > 0.0))
        throw NonPositiveVariance("quadrature variance " + std::to_string(var) +
                                  " is not positive");
    return -10.0 * std::log10(2.0 * var);
}

OptimalAngle optimal_angle(const Eigen::MatrixXd& V) {
    require_dim4(V);
    OptimalAngle out;

    const double a = V(2, 2), b = V(3, 3), c = V(2, 3);
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    if (std::abs(a - b) <= 1e-12 * scale && std::abs(c) <= 1e-12 * scale) {
        out.degenerate = true;
        out.theta_opt = 0.0;
        out.s_opt_db = squeezing_db(V, 0.0);
        return out;
    }

    // Var(theta) = (a+b)/2 + (a-b)/2 cos(2 theta) + c sin(2 theta);
    // extremes at theta0 = atan2(2c, a-b)/2 and theta0 + pi/2.
    const double theta0 = 0.5 * std::atan2(2.0 * c, a - b);
    double best = theta0;
    if (quadrature_variance(V, theta0 + kPi / 2) < quadrature_variance(V, theta0))
        best = theta0 + kPi / 2;
    best = wrap_half_open(best);

    // grid verification; closed form and scan must agree to grid resolution
    const int n = 720;
    double grid_best = 0.0, grid_var = quadrature_variance(V, 0.0);
    for (int k = 0; k < n; ++k) {
        const double th = -kPi / 2 + kPi * (k + 0.5) / n;
        const double v = quadrature_variance(V, th);
        if (v < grid_var) {
            grid_var = v;
            grid_best = th;
        }
    }
    const double step = kPi / n;
    double diff = std::abs(wrap_half_open(best - grid_best));
    diff = std::min(diff, kPi - diff);
    if (diff > step &&
        quadrature_variance(V, best) > grid_var + 1e-12 * scale)
        throw std::logic_error("optimal_angle: closed form disagrees with scan");

    out.theta_opt = best;
    out.s_opt_db = squeezing_db(V, best);
    return out;
}

SqueezingReport squeezing_report(const Eigen::MatrixXd& V, int n_curve) {
    SqueezingReport rep;
    const OptimalAngle opt = optimal_angle(V);
    rep.theta_opt = opt.theta_opt;
    rep.s_opt_db = opt.s_opt_db;
    rep.degenerate = opt.degenerate;
    rep.var_Xb = V(2, 2);
    rep.var_Yb = V(3, 3);
    rep.cov_XbYb = V(2, 3);
    rep.beats_3db = rep.s_opt_db > 3.0;
    rep.curve.reserve(n_curve);
    for (int k = 0; k < n_curve; ++k) {
        AnglePoint pt;
        pt.theta = -kPi + 2.0 * kPi * k / (n_curve - 1);
        pt.variance = quadrature_variance(V, pt.theta);
        pt.s_db = -10.0 * std::log10(2.0 * pt.variance);
        rep.curve.push_back(pt);
    }
    return rep;
}

} // namespace omsq
