#include "omsq/linear.hpp"

#include <cmath>
#include <complex>

#include <Eigen/Eigenvalues>

namespace omsq {

namespace {

using Complex = std::complex<double>;

// A term (c*do_j + d*do_j^dag) in the equation of motion for do_o maps to the
// 2x2 quadrature block  [[Re(c+d*), -Im(c+d*)], [Im(c-d*), Re(c-d*)]]
// at rows (X_o, Y_o), columns (X_j, Y_j).
void add_block(Eigen::MatrixXd& A, int row_mode, int col_mode, Complex c,
               Complex d = Complex(0.0, 0.0)) {
    const Complex u = c + std::conj(d);
    const Complex v = c - std::conj(d);
    const int r = 2 * row_mode, q = 2 * col_mode;
    A(r, q) += u.real();
    A(r, q + 1) += -u.imag();
    A(r + 1, q) += v.imag();
    A(r + 1, q + 1) += v.real();
}

} // namespace

LinearModel build_reduced(const EffectiveParams& e) {
    require_valid(e);
    const double c2 = std::cos(2.0 * e.phi);
    const double s2 = std::sin(2.0 * e.phi);
    const double chi = e.chi_mag;
    const double G1 = e.G1_mag;

    LinearModel m;
    m.dim = 4;
    m.labels = {"X_a1", "Y_a1", "X_b", "Y_b"};
    m.A = Eigen::MatrixXd::Zero(4, 4);
    m.A << chi * c2 - e.kappa1 / 2, chi * s2 + e.delta_c, 0.0, 0.0,
           chi * s2 - e.delta_c, -chi * c2 - e.kappa1 / 2, 2.0 * G1, 0.0,
           0.0, 0.0, -e.gamma_m / 2, 1.0,
           2.0 * G1, 0.0, -1.0 - 4.0 * e.Lambda, -e.gamma_m / 2;

    const double mech = e.gamma_m * (2.0 * e.n_th + 1.0) / 2;
    m.D = Eigen::Vector4d(e.kappa1 / 2, e.kappa1 / 2, mech, mech).asDiagonal();
    return m;
}

LinearModel build_full(const EffectiveParams& e) {
    require_valid(e);
    if (!(e.kappa2 > 0.0))
        throw InvalidParams({{"kappa2", "must be > 0 for the 6x6 model", e.kappa2}});

    const Complex i(0.0, 1.0);
    const Complex G1 = e.G1();
    const Complex G2 = e.G2();
    const Complex chi = e.chi();
    const Complex chi0 = e.chi0();
    const Complex a1 = e.alpha1();

    LinearModel m;
    m.dim = 6;
    m.labels = {"X_a1", "Y_a1", "X_a2", "Y_a2", "X_b", "Y_b"};
    m.A = Eigen::MatrixXd::Zero(6, 6);

    // d(da1)/dt = -(i dc + k1/2) da1 + chi da1^dag + chi0 conj(a1) da2
    //           + i G1 (db^dag + db)
    add_block(m.A, 0, 0, -(i * e.delta_c + e.kappa1 / 2.0), chi);
    add_block(m.A, 0, 1, chi0 * std::conj(a1));
    add_block(m.A, 0, 2, i * G1, i * G1);
    // d(da2)/dt = -(i dc' + k2/2) da2 - chi0 a1 da1 + i G2 (db^dag + db)
    add_block(m.A, 1, 1, -(i * e.delta_c_prime + e.kappa2 / 2.0));
    add_block(m.A, 1, 0, -chi0 * a1);
    add_block(m.A, 1, 2, i * G2, i * G2);
    // d(db)/dt = -(i + gm/2) db - 2 i Lambda (db^dag + db)
    //          + i (G1 db... ) couplings back to both optical modes
    add_block(m.A, 2, 2, -(i + e.gamma_m / 2.0) - 2.0 * i * e.Lambda,
              -2.0 * i * e.Lambda);
    add_block(m.A, 2, 0, i * std::conj(G1), i * G1);
    add_block(m.A, 2, 1, i * std::conj(G2), i * G2);

    const double mech = e.gamma_m * (2.0 * e.n_th + 1.0) / 2;
    Eigen::VectorXd d(6);
    d << e.kappa1 / 2, e.kappa1 / 2, e.kappa2 / 2, e.kappa2 / 2, mech, mech;
    m.D = d.asDiagonal();
    return m;
}

StabilityResult is_stable(const LinearModel& m) {
    Eigen::EigenSolver<Eigen::MatrixXd> es(m.A, /*computeEigenvectors=*/false);
    if (es.info() != Eigen::Success)
        throw EigenFailure("eigensolver did not converge on the drift matrix");
    StabilityResult r;
    r.margin = -es.eigenvalues().real().maxCoeff();
    r.stable = r.margin > 0.0;
    return r;
}

std::vector<double> characteristic_polynomial(const Eigen::MatrixXd& A) {
    const int n = static_cast<int>(A.rows());
    std::vector<double> c(n + 1, 0.0); // c[n] = 1 leading
    c[n] = 1.0;
    Eigen::MatrixXd M = Eigen::MatrixXd::Zero(n, n);
    for (int k = 1; k <= n; ++k) {
        M = A * M + c[n - k + 1] * Eigen::MatrixXd::Identity(n, n);
        c[n - k] = -(A * M).trace() / static_cast<double>(k);
    }
    c.pop_back(); // drop the leading 1
    return c;     // c[j] multiplies s^j
}

RouthResult routh_hurwitz(const LinearModel& m) {
    if (m.dim != 4)
        throw std::invalid_argument("routh_hurwitz requires a 4x4 model");

    const std::vector<double> c = characteristic_polynomial(m.A);
    // p(s) = s^4 + a3 s^3 + a2 s^2 + a1 s + a0
    const double a3 = c[3], a2 = c[2], a1 = c[1], a0 = c[0];

    RouthResult r;
    r.char_poly = {a0, a1, a2, a3};

    // Routh array leading column: a3, b1 = (a3 a2 - a1)/a3,
    // c1 = (b1 a1 - a3 a0)/b1, a0.
    const double b1 = (a3 * a2 - a1) / a3;
    const double c1 = (b1 * a1 - a3 * a0) / b1;
    r.routh_column = {a3, b1, c1, a0};

    constexpr double kDegenerateband = 1e-12;
    for (double lead : r.routh_column)
        if (std::abs(lead) < kDegenerateband) r.degenerate = true;

    r.stable = a3 > 0.0 && b1 > 0.0 && c1 > 0.0 && a0 > 0.0;
    return r;
}

} // namespace omsq
