// Serial reference kernels against their OpenMP versions.

#include <benchmark/benchmark.h>

#include <cmath>
#include <vector>

#include "wlab/kernels.hpp"
#include "wlab/weights.hpp"

using namespace wlab;

namespace {

std::vector<double> bumpy(const Grid& g) {
  std::vector<double> v(static_cast<std::size_t>(g.cell_count()));
  for (std::int64_t c = 0; c < g.cell_count(); ++c) {
    const Point x = g.cell_center(c);
    double s = 1.0;
    for (int i = 0; i < g.dim(); ++i) s += std::fabs(std::sin(7.0 * x[i]));
    v[static_cast<std::size_t>(c)] = s;
  }
  return v;
}

Grid grid_for(const benchmark::State& state) {
  return Grid(RootBox::unit(static_cast<int>(state.range(0))), static_cast<int>(state.range(1)));
}

void centered_maximal(benchmark::State& state, Exec exec) {
  const Grid g = grid_for(state);
  const std::vector<double> v = bumpy(g);
  std::vector<double> out(v.size());
  for (auto _ : state) {
    kernels::centered_maximal(g, v, g.root_cube(), out, exec);
    benchmark::DoNotOptimize(out.data());
  }
}

void fractional_integral(benchmark::State& state, Exec exec) {
  const Grid g = grid_for(state);
  const std::vector<double> v = bumpy(g);
  std::vector<double> out(v.size());
  for (auto _ : state) {
    kernels::fractional_integral(g, v, 0.5, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
}

void power_masses(benchmark::State& state, Exec exec) {
  const Grid g(RootBox::centered(static_cast<int>(state.range(0)), 1.0), static_cast<int>(state.range(1)));
  std::vector<double> out(static_cast<std::size_t>(g.cell_count()));
  for (auto _ : state) {
    kernels::power_cell_masses(g, 0.25, out, exec);
    benchmark::DoNotOptimize(out.data());
  }
}

void ap_constant_bench(benchmark::State& state, Exec exec) {
  const Grid g(RootBox::centered(static_cast<int>(state.range(0)), 1.0), static_cast<int>(state.range(1)));
  const Weight w = Weight::power(g, 0.25);
  const CubeFamily fam(g, true);
  for (auto _ : state) benchmark::DoNotOptimize(ap_constant(w, 2.0, fam, exec).value);
}

}  // namespace

BENCHMARK_CAPTURE(centered_maximal, serial, Exec::Serial)->Args({1, 10})->Args({2, 5});
BENCHMARK_CAPTURE(centered_maximal, parallel, Exec::Parallel)->Args({1, 10})->Args({2, 5});
BENCHMARK_CAPTURE(fractional_integral, serial, Exec::Serial)->Args({1, 10})->Args({2, 5});
BENCHMARK_CAPTURE(fractional_integral, parallel, Exec::Parallel)->Args({1, 10})->Args({2, 5});
BENCHMARK_CAPTURE(power_masses, serial, Exec::Serial)->Args({2, 7})->Args({3, 5});
BENCHMARK_CAPTURE(power_masses, parallel, Exec::Parallel)->Args({2, 7})->Args({3, 5});
BENCHMARK_CAPTURE(ap_constant_bench, serial, Exec::Serial)->Args({1, 12})->Args({2, 6});
BENCHMARK_CAPTURE(ap_constant_bench, parallel, Exec::Parallel)->Args({1, 12})->Args({2, 6});

int main(int argc, char** argv) {
  configure_threads_from_env();
  benchmark::Initialize(&argc, argv);
  benchmark::RunSpecifiedBenchmarks();
  benchmark::Shutdown();
  return 0;
}
