#include <benchmark/benchmark.h>

#include <random>
#include <vector>

#include "qrac/bounds.hpp"
#include "qrac/linalg.hpp"
#include "qrac/rac.hpp"
#include "qrac/seesaw.hpp"
#include "qrac/strategies.hpp"

using qrac::Matrix;
using qrac::RacSetting;
namespace linalg = qrac::linalg;
namespace seesaw = qrac::seesaw;

namespace {

Matrix random_hermitian(int dim, std::mt19937_64& rng) {
    Matrix a(dim, dim);
    for (int r = 0; r < dim; ++r) {
        for (int c = 0; c < dim; ++c) a(r, c) = linalg::complex_standard_normal(rng);
    }
    return 0.5 * (a + a.adjoint());
}

} // namespace

static void BM_HermitianEig(benchmark::State& state) {
    std::mt19937_64 rng(1);
    const Matrix a = random_hermitian(static_cast<int>(state.range(0)), rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(linalg::hermitian_eig(a));
    }
}
BENCHMARK(BM_HermitianEig)->Arg(4)->Arg(8)->Arg(16);

static void BM_BoundReport(benchmark::State& state) {
    const RacSetting setting(4, 5, 6);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrac::bounds::bound_report(setting));
    }
}
BENCHMARK(BM_BoundReport);

static void BM_EvaluateAsp(benchmark::State& state) {
    const qrac::Strategy strategy = qrac::strategies::mub_strategy(3, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrac::evaluate_asp(strategy));
    }
}
BENCHMARK(BM_EvaluateAsp);

static void BM_BestResponse(benchmark::State& state) {
    const qrac::Strategy strategy = qrac::strategies::mub_strategy(3, 3);
    for (auto _ : state) {
        benchmark::DoNotOptimize(qrac::best_response_value(strategy.measurements));
    }
}
BENCHMARK(BM_BestResponse);

static void BM_MeasurementStep(benchmark::State& state) {
    const RacSetting setting(3, 3, 3);
    std::mt19937_64 rng(7);
    const std::vector<Matrix> states = seesaw::initial_states(setting, rng);
    for (auto _ : state) {
        benchmark::DoNotOptimize(seesaw::measurement_step(states, setting));
    }
}
BENCHMARK(BM_MeasurementStep);

static void BM_SeesawRestart(benchmark::State& state) {
    const RacSetting setting(2, 3, 3);
    seesaw::SeesawConfig config;
    config.restarts = 1;
    config.threads = 1;
    std::uint64_t seed = 0;
    for (auto _ : state) {
        config.master_seed = seed++;
        benchmark::DoNotOptimize(seesaw::seesaw_run(setting, config));
    }
}
BENCHMARK(BM_SeesawRestart)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
