#include <benchmark/benchmark.h>

#include "omsq/linear.hpp"
#include "omsq/lyapunov.hpp"
#include "omsq/meanfield.hpp"
#include "omsq/squeezing.hpp"

using namespace omsq;

namespace {

EffectiveParams hursb_point() {
    EffectiveParams e;
    e.kappa1 = 100.0;
    e.gamma_m = 1e-6;
    e.G1_mag = 0.1;
    e.phi = kPi / 2;
    e.delta_c = 10.0;
    e.Lambda = 10.0;
    e.chi_mag = 40.0;
    return e;
}

PhysicalParams lab_point() {
    PhysicalParams p;
    p.omega_m = 2.0 * kPi * 20e6;
    p.omega_L = 2.5e7;
    p.delta_bar_c = 10.0;
    p.kappa1 = 100.0;
    p.kappa2 = 2000.0;
    p.gamma_m = 1e-6;
    p.g1 = 1e-4;
    p.g2 = 1e-4;
    p.eta = 1e-4;
    p.chi0_mag = 1e-3;
    p.P1 = 5e-3;
    p.P2 = 5e-3;
    return p;
}

void BM_BuildReduced(benchmark::State& state) {
    const EffectiveParams e = hursb_point();
    for (auto _ : state) benchmark::DoNotOptimize(build_reduced(e));
}
BENCHMARK(BM_BuildReduced);

void BM_SolveSteady4(benchmark::State& state) {
    const LinearModel m = build_reduced(hursb_point());
    for (auto _ : state) benchmark::DoNotOptimize(solve_steady(m));
}
BENCHMARK(BM_SolveSteady4);

void BM_IntegrateCovariance(benchmark::State& state) {
    const LinearModel m = build_reduced(hursb_point());
    const CovarianceResult alg = solve_steady(m);
    const double normA = m.A.cwiseAbs().rowwise().sum().maxCoeff();
    const Eigen::MatrixXd V0 = Eigen::MatrixXd::Identity(4, 4) / 2;
    for (auto _ : state)
        benchmark::DoNotOptimize(
            integrate_covariance(m, V0, 50.0 / alg.margin, 0.02 / normA));
}
BENCHMARK(BM_IntegrateCovariance);

void BM_PipelinePoint(benchmark::State& state) {
    // full per-grid-point cost: build -> stability -> covariance -> squeezing
    EffectiveParams e = hursb_point();
    for (auto _ : state) {
        const LinearModel m = build_reduced(e);
        if (is_stable(m).stable) {
            const CovarianceResult cov = solve_steady(m);
            benchmark::DoNotOptimize(optimal_angle(cov.V));
        }
    }
}
BENCHMARK(BM_PipelinePoint);

void BM_MeanFieldSolve(benchmark::State& state) {
    const PhysicalParams p = lab_point();
    for (auto _ : state) benchmark::DoNotOptimize(solve_steady_state(p));
}
BENCHMARK(BM_MeanFieldSolve);

} // namespace

BENCHMARK_MAIN();
