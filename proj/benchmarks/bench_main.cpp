#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "gratinguq/forward.hpp"
#include "gratinguq/inverse.hpp"
#include "gratinguq/presets.hpp"
#include "gratinguq/surface.hpp"
#include "gratinguq/symmetric_eigen.hpp"

using namespace gratinguq;

namespace {

void BM_ForwardSolve(benchmark::State& state)
{
    int const N = static_cast<int>(state.range(0));
    auto const pw = make_plane_wave(2.0, default_angles()[2]);
    for (auto _ : state)
        benchmark::DoNotOptimize(solve_forward(example1_profile(), pw, N, 4 * (2 * N + 1)));
}
BENCHMARK(BM_ForwardSolve)->Arg(16)->Arg(32)->Unit(benchmark::kMillisecond);

void BM_StageEvaluate(benchmark::State& state)
{
    int const k = static_cast<int>(state.range(0));
    std::vector<TraceData> traces;
    for (double theta : default_angles())
    {
        auto const rc = solve_forward(example1_profile(), make_plane_wave(k, theta), 32, 260);
        auto noise = make_stream(0);
        traces.push_back(make_trace(synthesize_measurement(rc, 2.2, 256, 0.0, noise), 8, 1e-6));
    }
    StageOperator const op(traces, k, 256);
    ProfileCoeffs const c = example1_profile().extended(std::max(k, 2));
    ProfileCoeffs const stage(
        std::vector<double>(c.coeffs().begin(), c.coeffs().begin() + 2 * k + 1));
    for (auto _ : state)
        benchmark::DoNotOptimize(op.evaluate(stage));
}
BENCHMARK(BM_StageEvaluate)->Arg(1)->Arg(2)->Arg(6)->Unit(benchmark::kMicrosecond);

void BM_JacobiEigen(benchmark::State& state)
{
    auto const n = state.range(0);
    std::mt19937_64 rng(3);
    std::normal_distribution<double> g;
    Eigen::MatrixXd X(n, n);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            X(i, j) = g(rng);
    Eigen::MatrixXd const C = X * X.transpose();
    for (auto _ : state)
        benchmark::DoNotOptimize(jacobi_eigen(C));
}
BENCHMARK(BM_JacobiEigen)->Arg(13)->Arg(25);

void BM_SampleSurface(benchmark::State& state)
{
    KLBasis const basis = build_basis({1.0 / 15, 1.0, kTwoPi}, 1e-4);
    auto rng = make_stream(1);
    for (auto _ : state)
        benchmark::DoNotOptimize(sample_surface(example1_profile(), basis, rng));
}
BENCHMARK(BM_SampleSurface);

}  // namespace
BENCHMARK_MAIN();
