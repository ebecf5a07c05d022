#include "omsq/lyapunov.hpp"

#include <algorithm>
#include <cmath>
#include <atomic>
#include <thread>

#include <Eigen/Eigenvalues>

#include "omsq/rng.hpp"

namespace omsq {

namespace {

// vech packing of symmetric matrices: pairs (i, j) with i <= j.
struct SymIndex {
    int n;
    std::vector<std::pair<int, int>> pairs;
    explicit SymIndex(int dim) : n(dim) {
        for (int i = 0; i < n; ++i)
            for (int j = i; j < n; ++j) pairs.emplace_back(i, j);
    }
    int size() const { return static_cast<int>(pairs.size()); }
    Eigen::VectorXd pack(const Eigen::MatrixXd& M) const {
        Eigen::VectorXd v(size());
        for (int k = 0; k < size(); ++k) v[k] = M(pairs[k].first, pairs[k].second);
        return v;
    }
    Eigen::MatrixXd unpack(const Eigen::VectorXd& v) const {
        Eigen::MatrixXd M(n, n);
        for (int k = 0; k < size(); ++k) {
            M(pairs[k].first, pairs[k].second) = v[k];
            M(pairs[k].second, pairs[k].first) = v[k];
        }
        return M;
    }
};

Eigen::MatrixXd lyapunov_residual(const LinearModel& m, const Eigen::MatrixXd& V) {
    return m.A * V + V * m.A.transpose() + m.D;
}

double max_abs(const Eigen::MatrixXd& M) { return M.cwiseAbs().maxCoeff(); }

// One classical RK4 step of dV/dt = A V + V A^T + D, as a function of V.
Eigen::MatrixXd rk4_step(const Eigen::MatrixXd& A, const Eigen::MatrixXd& D,
                         const Eigen::MatrixXd& V, double h) {
    auto L = [&](const Eigen::MatrixXd& W) -> Eigen::MatrixXd {
        return A * W + W * A.transpose() + D;
    };
    const Eigen::MatrixXd k1 = L(V);
    const Eigen::MatrixXd k2 = L(V + (h / 2) * k1);
    const Eigen::MatrixXd k3 = L(V + (h / 2) * k2);
    const Eigen::MatrixXd k4 = L(V + h * k3);
    Eigen::MatrixXd out = V + (h / 6) * (k1 + 2 * k2 + 2 * k3 + k4);
    return (out + out.transpose()) / 2; // keep exact symmetry each step
}

} // namespace

CovarianceResult solve_steady(const LinearModel& m) {
    const StabilityResult st = is_stable(m);
    if (!st.stable) throw Unstable(st.margin);

    const SymIndex idx(m.dim);
    const int s = idx.size(); // 10 at dim 4, 21 at dim 6

    // Columns of the operator V -> A V + V A^T over the symmetric basis.
    Eigen::MatrixXd L(s, s);
    for (int k = 0; k < s; ++k) {
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(m.dim, m.dim);
        E(idx.pairs[k].first, idx.pairs[k].second) = 1.0;
        E(idx.pairs[k].second, idx.pairs[k].first) = 1.0;
        L.col(k) = idx.pack(m.A * E + E * m.A.transpose());
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(L);
    const Eigen::VectorXd v = lu.solve(-idx.pack(m.D));

    CovarianceResult r;
    r.method = CovarianceMethod::algebraic;
    r.margin = st.margin;
    r.V = idx.unpack(v);
    r.V = (r.V + r.V.transpose()) / 2;
    r.residual = max_abs(lyapunov_residual(m, r.V));

    // cheap condition estimate at this size
    const Eigen::JacobiSVD<Eigen::MatrixXd> svd(L);
    const double smin = svd.singularValues().minCoeff();
    const double smax = svd.singularValues().maxCoeff();
    r.ill_conditioned = !(smin > 0.0) || smax / smin > 1e12;
    return r;
}

CovarianceResult integrate_covariance(const LinearModel& m,
                                      const Eigen::MatrixXd& V0, double T,
                                      double dt) {
    const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
    if (dt * normA > 0.1)
        throw StepTooLarge("dt * ||A||_inf = " + std::to_string(dt * normA) +
                           " exceeds 0.1");

    std::uint64_t n_steps = static_cast<std::uint64_t>(std::llround(T / dt));
    if (n_steps == 0) n_steps = 1;

    const SymIndex idx(m.dim);
    const int s = idx.size();

    // One RK4 step is affine on vech(V): v -> M v + q.
    Eigen::MatrixXd M(s, s);
    const Eigen::MatrixXd Z = Eigen::MatrixXd::Zero(m.dim, m.dim);
    const Eigen::VectorXd q = idx.pack(rk4_step(m.A, m.D, Z, dt));
    for (int k = 0; k < s; ++k) {
        Eigen::MatrixXd E = Eigen::MatrixXd::Zero(m.dim, m.dim);
        E(idx.pairs[k].first, idx.pairs[k].second) = 1.0;
        E(idx.pairs[k].second, idx.pairs[k].first) = 1.0;
        M.col(k) = idx.pack(rk4_step(m.A, m.D, E, dt)) - q;
    }

    // Compose the n-step map by square-and-multiply.
    Eigen::MatrixXd accM = Eigen::MatrixXd::Identity(s, s);
    Eigen::VectorXd accq = Eigen::VectorXd::Zero(s);
    Eigen::MatrixXd powM = M;
    Eigen::VectorXd powq = q;
    std::uint64_t n = n_steps;
    while (n > 0) {
        if (n & 1ULL) {
            accq = powM * accq + powq;
            accM = powM * accM;
        }
        powq = powM * powq + powq;
        powM = powM * powM;
        n >>= 1;
    }

    CovarianceResult r;
    r.method = CovarianceMethod::ode;
    try {
        r.margin = is_stable(m).margin;
    } catch (const EigenFailure&) {
        r.margin = 0.0;
    }
    r.V = idx.unpack(accM * idx.pack((V0 + V0.transpose()) / 2) + accq);
    r.residual = max_abs(lyapunov_residual(m, r.V));
    return r;
}

CovarianceResult sample_stochastic(const LinearModel& m,
                                   const StochasticOptions& opts) {
    const StabilityResult st = is_stable(m);
    if (!st.stable) throw Unstable(st.margin);

    const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
    const double dt = opts.dt > 0.0 ? opts.dt : 0.01 / std::max(normA, 1.0);
    const double T = opts.T > 0.0 ? opts.T : 8.0 / st.margin;
    const int n_traj = opts.n_traj;
    const std::uint64_t n_steps =
        std::max<std::uint64_t>(2, static_cast<std::uint64_t>(std::llround(T / dt)));
    const std::uint64_t burn = n_steps / 2; // discard the first half

    // B with B B^T = D via the PSD square root (D is diagonal in practice).
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m.D);
    if (es.info() != Eigen::Success)
        throw EigenFailure("eigensolver failed on the diffusion matrix");
    const Eigen::MatrixXd B =
        es.eigenvectors() *
        es.eigenvalues().cwiseMax(0.0).cwiseSqrt().asDiagonal() *
        es.eigenvectors().transpose();

    const int dim = m.dim;
    const Eigen::MatrixXd stepA = Eigen::MatrixXd::Identity(dim, dim) + dt * m.A;
    const Eigen::MatrixXd stepB = std::sqrt(dt) * B;
    const int s = dim * (dim + 1) / 2;
    const SymIndex idx(dim);

    // Per-trajectory time-averaged second moments, fixed slot per trajectory
    // so the reduction order (and the result) is independent of the number of
    // worker threads.
    std::vector<Eigen::VectorXd> per_traj(n_traj, Eigen::VectorXd::Zero(s));

    auto run_traj = [&](int t) {
        Rng rng(opts.seed, static_cast<std::uint64_t>(t));
        Eigen::VectorXd f = Eigen::VectorXd::Zero(dim);
        Eigen::VectorXd noise(dim);
        Eigen::MatrixXd acc = Eigen::MatrixXd::Zero(dim, dim);
        std::uint64_t kept = 0;
        for (std::uint64_t k = 0; k < n_steps; ++k) {
            for (int j = 0; j < dim; ++j) noise[j] = rng.next_normal();
            f = stepA * f + stepB * noise;
            if (k >= burn) {
                acc.noalias() += f * f.transpose();
                ++kept;
            }
        }
        per_traj[t] = idx.pack(acc / static_cast<double>(kept));
    };

    const int threads = std::max(1, opts.threads);
    if (threads == 1) {
        for (int t = 0; t < n_traj; ++t) run_traj(t);
    } else {
        std::vector<std::thread> pool;
        std::atomic<int> next{0};
        for (int w = 0; w < threads; ++w)
            pool.emplace_back([&] {
                for (int t = next.fetch_add(1); t < n_traj; t = next.fetch_add(1))
                    run_traj(t);
            });
        for (auto& th : pool) th.join();
    }

    Eigen::VectorXd mean = Eigen::VectorXd::Zero(s);
    for (int t = 0; t < n_traj; ++t) mean += per_traj[t];
    mean /= static_cast<double>(n_traj);
    Eigen::VectorXd var = Eigen::VectorXd::Zero(s);
    for (int t = 0; t < n_traj; ++t)
        var += (per_traj[t] - mean).cwiseAbs2();
    var /= static_cast<double>(n_traj > 1 ? n_traj - 1 : 1);
    const Eigen::VectorXd se = (var / static_cast<double>(n_traj)).cwiseSqrt();

    CovarianceResult r;
    r.method = CovarianceMethod::stochastic;
    r.margin = st.margin;
    r.V = idx.unpack(mean);
    r.stderr_entries = idx.unpack(se);
    r.residual = max_abs(lyapunov_residual(m, r.V));

    const double scale = std::max(r.V.cwiseAbs().maxCoeff(), 1e-12);
    for (int k = 0; k < s; ++k) {
        const double denom = std::max(std::abs(mean[k]), 0.05 * scale);
        if (se[k] / denom > 0.10) r.insufficient_samples = true;
    }
    return r;
}

std::vector<double> symplectic_eigenvalues(const Eigen::MatrixXd& V) {
    const int n = static_cast<int>(V.rows());
    Eigen::MatrixXd Omega = Eigen::MatrixXd::Zero(n, n);
    for (int k = 0; k + 1 < n; k += 2) {
        Omega(k, k + 1) = 1.0;
        Omega(k + 1, k) = -1.0;
    }
    Eigen::EigenSolver<Eigen::MatrixXd> es(Omega * V, false);
    if (es.info() != Eigen::Success)
        throw EigenFailure("eigensolver failed on Omega V");
    std::vector<double> mods(n);
    for (int k = 0; k < n; ++k) mods[k] = std::abs(es.eigenvalues()[k]);
    std::sort(mods.begin(), mods.end());
    std::vector<double> nu(n / 2);
    for (int k = 0; k < n / 2; ++k) nu[k] = (mods[2 * k] + mods[2 * k + 1]) / 2;
    return nu;
}

} // namespace omsq
