#include <benchmark/benchmark.h>

#include "dnlslab/fourier.hpp"
#include "dnlslab/modspace.hpp"
#include "dnlslab/scattering.hpp"
#include "dnlslab/solver.hpp"

namespace {

using namespace dnlslab;

Field gaussian_field(const Grid& g, double amp) {
    Field f = zero_field(g, Space::physical);
    std::array<int, 3> idx{};
    for (std::size_t i = 0; i < f.samples.size(); ++i) {
        decode_index(g, i, idx);
        double x = g.x(idx[0]);
        f.samples[i] = amp * std::exp(-x * x);
    }
    return f;
}

void BM_FourierRoundtrip(benchmark::State& state) {
    Grid g = make_grid(1, static_cast<int>(state.range(0)), 256.0);
    Field f = gaussian_field(g, 1.0);
    for (auto _ : state) {
        Field hat = fourier_transform(f, Direction::forward);
        Field back = fourier_transform(hat, Direction::inverse);
        benchmark::DoNotOptimize(back.samples.data());
    }
}
BENCHMARK(BM_FourierRoundtrip)->Arg(1024)->Arg(4096)->Arg(16384);

void BM_StrangStep(benchmark::State& state) {
    Grid g = make_grid(1, static_cast<int>(state.range(0)), 256.0);
    Field v = gaussian_field(g, 0.1);
    ModelParams params;
    double t = 0;
    for (auto _ : state) {
        v = strang_step(v, t, 1e-3, params);
        t += 1e-3;
        benchmark::DoNotOptimize(v.samples.data());
    }
}
BENCHMARK(BM_StrangStep)->Arg(1024)->Arg(4096);

void BM_M11Norm(benchmark::State& state) {
    Grid g = make_grid(1, 4096, 256.0);
    Field f = gaussian_field(g, 0.1);
    WindowSpec w = WindowSpec::gaussian(1.0);
    TFLattice lat{static_cast<double>(state.range(0)), 0.0, -1, -1};
    for (auto _ : state) benchmark::DoNotOptimize(m11_norm(f, w, lat));
}
BENCHMARK(BM_M11Norm)->Arg(2)->Arg(4)->Arg(8);

void BM_TailIntegral(benchmark::State& state) {
    double acc = 0, t = 1.0;
    for (auto _ : state) {
        acc += tail_integral(-1.0, 2.0, t);
        t = t < 30 ? t + 1e-3 : 1.0;
    }
    benchmark::DoNotOptimize(acc);
}
BENCHMARK(BM_TailIntegral);

}  // namespace

BENCHMARK_MAIN();
