#include "omsq/meanfield.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include <Eigen/Dense>

namespace omsq {

namespace {

using Complex = std::complex<double>;
using Vec6 = Eigen::Matrix<double, 6, 1>;

Vec6 to_vec(const MeanFieldState& s) {
    Vec6 y;
    y << s.alpha1.real(), s.alpha1.imag(), s.alpha2.real(), s.alpha2.imag(),
        s.beta.real(), s.beta.imag();
    return y;
}

MeanFieldState from_vec(const Vec6& y) {
    return {Complex(y[0], y[1]), Complex(y[2], y[3]), Complex(y[4], y[5])};
}

Vec6 rhs_vec(const Vec6& y, const PhysicalParams& p, const DriveAmplitudes& d,
             double extra_beta_damping) {
    const MeanFieldState s = from_vec(y);
    const Complex i(0.0, 1.0);
    const Complex chi0 = p.chi0();

    const double babs = std::abs(s.beta);
    const double phib = babs > 0.0 ? std::arg(s.beta) : 0.0;
    const double cb = std::cos(phib);
    const double dc = p.delta_bar_c - 2.0 * p.g1 * babs * cb;
    const double dcp = 2.0 * p.delta_bar_c - 2.0 * p.g2 * babs * cb;

    const Complex f1 = -(i * dc + p.kappa1 / 2.0) * s.alpha1 +
                       chi0 * std::conj(s.alpha1) * s.alpha2 + d.eps1;
    const Complex f2 = -(i * dcp + p.kappa2 / 2.0) * s.alpha2 -
                       chi0 / 2.0 * s.alpha1 * s.alpha1 + d.eps2;
    Complex fb = -(i + p.gamma_m / 2.0) * s.beta -
                 i * p.eta * (16.0 * babs * babs * babs * cb * cb * cb +
                              12.0 * babs * cb) +
                 i * (p.g1 * std::norm(s.alpha1) + p.g2 * std::norm(s.alpha2));
    fb -= extra_beta_damping / 2.0 * s.beta;

    Vec6 f;
    f << f1.real(), f1.imag(), f2.real(), f2.imag(), fb.real(), fb.imag();
    return f;
}

// Dormand-Prince 5(4) embedded pair.
struct Rk45Result {
    Vec6 y5;
    double err; // scaled error estimate
};

Rk45Result rk45_step(const Vec6& y, double h, const PhysicalParams& p,
                     const DriveAmplitudes& d, double boost, double scale) {
    static const double a21 = 1.0 / 5;
    static const double a31 = 3.0 / 40, a32 = 9.0 / 40;
    static const double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    static const double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187,
                        a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    static const double a61 = 9017.0 / 3168, a62 = -355.0 / 33,
                        a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                        a65 = -5103.0 / 18656;
    static const double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192,
                        b5 = -2187.0 / 6784, b6 = 11.0 / 84;
    static const double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                        e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;

    auto f = [&](const Vec6& v) { return rhs_vec(v, p, d, boost); };
    const Vec6 k1 = f(y);
    const Vec6 k2 = f(y + h * (a21 * k1));
    const Vec6 k3 = f(y + h * (a31 * k1 + a32 * k2));
    const Vec6 k4 = f(y + h * (a41 * k1 + a42 * k2 + a43 * k3));
    const Vec6 k5 = f(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4));
    const Vec6 k6 = f(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5));
    const Vec6 y5 = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
    const Vec6 k7 = f(y5);
    const Vec6 errv =
        h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
    return {y5, errv.cwiseAbs().maxCoeff() / scale};
}

} // namespace

std::array<Complex, 3> classical_rhs(const MeanFieldState& s,
                                     const PhysicalParams& p) {
    const DriveAmplitudes d = drive_amplitudes(p);
    const Vec6 f = rhs_vec(to_vec(s), p, d, 0.0);
    return {Complex(f[0], f[1]), Complex(f[2], f[3]), Complex(f[4], f[5])};
}

MeanFieldResult solve_steady_state(const PhysicalParams& p,
                                   const MeanFieldState& init,
                                   const SolveOptions& opts) {
    const DriveAmplitudes d = drive_amplitudes(p);
    const double drive_scale =
        std::max({d.eps1, d.eps2, 1.0}); // residuals measured against this

    MeanFieldResult out;

    // ---- stage 1: damped relaxation with boosted mechanical damping
    Vec6 y = to_vec(init);
    const double t_end = opts.max_horizon * 2.0 * kPi;
    double t = 0.0;
    double h = 1e-3 / std::max({p.kappa1, p.kappa2, 1.0});
    int steps = 0;
    const int max_steps = 2'000'000;
    const double boost = std::max(opts.beta_damping_boost, p.gamma_m) - p.gamma_m;

    double settle_res = std::numeric_limits<double>::infinity();
    while (t < t_end && steps < max_steps) {
        const double scale = std::max(y.cwiseAbs().maxCoeff(), drive_scale);
        const Rk45Result r = rk45_step(y, h, p, d, boost, scale);
        if (r.err <= opts.rel_tol * 10.0 || h < 1e-14) {
            y = r.y5;
            t += h;
            ++steps;
            if (steps % 64 == 0) {
                settle_res =
                    rhs_vec(y, p, d, boost).norm() / drive_scale;
                // relaxation only needs to reach the Newton basin
                if (settle_res < std::max(opts.rel_tol, 1e-6)) break;
            }
        }
        const double err = std::max(r.err, 1e-16);
        h = std::min(h * std::clamp(0.9 * std::pow(opts.rel_tol * 10.0 / err, 0.2),
                                    0.2, 5.0),
                     t_end - t);
        if (h <= 0.0) break;
    }
    out.relaxation_steps = steps;

    // ---- stage 2: Newton polish on the 6 real unknowns (true dynamics, no
    // boost); finite-difference Jacobian
    auto newton = [&](Vec6 z, int max_iter, bool& ok, int* iters) -> Vec6 {
        ok = false;
        for (int it = 0; it < max_iter; ++it) {
            const Vec6 F = rhs_vec(z, p, d, 0.0);
            const double res = F.norm() / drive_scale;
            if (iters) *iters = it;
            if (res < opts.rel_tol) {
                ok = true;
                return z;
            }
            Eigen::Matrix<double, 6, 6> J;
            for (int j = 0; j < 6; ++j) {
                const double dz =
                    std::max(1e-7 * std::abs(z[j]), 1e-9 * drive_scale);
                Vec6 zp = z;
                zp[j] += dz;
                J.col(j) = (rhs_vec(zp, p, d, 0.0) - F) / dz;
            }
            const Vec6 step = J.partialPivLu().solve(-F);
            // halving line search on the residual
            double lambda = 1.0;
            for (int ls = 0; ls < 30; ++ls) {
                const Vec6 trial = z + lambda * step;
                if (rhs_vec(trial, p, d, 0.0).norm() < F.norm() || lambda < 1e-8) {
                    z = trial;
                    break;
                }
                lambda /= 2.0;
            }
        }
        if (iters) *iters = max_iter;
        return z;
    };

    bool ok = false;
    Vec6 sol = newton(y, opts.newton_max_iter, ok, &out.newton_iterations);
    const double res = rhs_vec(sol, p, d, 0.0).norm() / drive_scale;
    if (!ok)
        throw NoConvergence("mean-field solve did not converge", res);

    out.state = from_vec(sol);
    out.residual = rhs_vec(sol, p, d, 0.0).norm();

    // ---- stage 3: probe for other reachable fixed points (multistability)
    if (opts.probe_branches) {
        const double norm_sol = std::max(sol.norm(), 1.0);
        const std::array<double, 3> scales = {0.5, 1.5, -0.25};
        for (double sfac : scales) {
            bool pok = false;
            Vec6 alt = newton(sfac * sol, opts.newton_max_iter, pok, nullptr);
            if (pok && (alt - sol).norm() > 1e-4 * norm_sol) {
                out.ambiguous_branch = true;
                break;
            }
        }
    }
    return out;
}

EffectiveParams effective_params(const MeanFieldState& s,
                                 const PhysicalParams& p) {
    EffectiveParams e;
    const double babs = std::abs(s.beta);
    e.phi_b = babs > 0.0 ? std::arg(s.beta) : 0.0;
    const double cb = std::cos(e.phi_b);
    e.delta_c = p.delta_bar_c - 2.0 * p.g1 * babs * cb;
    e.delta_c_prime = 2.0 * p.delta_bar_c - 2.0 * p.g2 * babs * cb;
    e.Lambda = 3.0 * p.eta * (4.0 * babs * babs * cb * cb + 1.0);

    const Complex G1 = p.g1 * s.alpha1;
    const Complex G2 = p.g2 * s.alpha2;
    e.G1_mag = std::abs(G1);
    e.G1_phase = e.G1_mag > 0.0 ? std::arg(G1) : 0.0;
    e.G2_mag = std::abs(G2);
    e.G2_phase = e.G2_mag > 0.0 ? std::arg(G2) : 0.0;

    const Complex chi = p.chi0() * s.alpha2;
    e.chi_mag = std::abs(chi);
    e.phi = e.chi_mag > 0.0 ? std::arg(chi) / 2.0 : 0.0;

    e.kappa1 = p.kappa1;
    e.kappa2 = p.kappa2;
    e.gamma_m = p.gamma_m;
    e.n_th = p.n_th;

    e.chi0_mag = p.chi0_mag;
    e.chi0_phase = p.chi0_phase;
    e.alpha1_mag = std::abs(s.alpha1);
    e.alpha1_phase = e.alpha1_mag > 0.0 ? std::arg(s.alpha1) : 0.0;
    return e;
}

} // namespace omsq
