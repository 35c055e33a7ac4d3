// Serial reference kernels against their OpenMP versions.

#include <random>
#include <vector>

#include <benchmark/benchmark.h>

#include "dpadmm/bench.hpp"
#include "dpadmm/kernels.hpp"

namespace {

namespace k = dpadmm::kernels;

std::vector<double> random_data(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = dist(gen);
  return v;
}

const std::vector<double> kWeights = {1.0, 0.0, -1.0};

template <auto Kernel>
void stacked_apply_add(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto u = random_data(n, 1);
  std::vector<double> out(kWeights.size() * n, 0.0);
  for (auto _ : state) {
    Kernel(kWeights, u, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(out.size()));
}

template <auto Kernel>
void stacked_adjoint(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto y = random_data(kWeights.size() * n, 2);
  std::vector<double> out(n);
  for (auto _ : state) {
    Kernel(kWeights, y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(y.size()));
}

template <auto Kernel>
void box_diag_solve(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto rhs = random_data(n, 3);
  std::vector<double> out(n);
  for (auto _ : state) {
    Kernel(rhs, 1.7, 0.5, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

template <auto Kernel>
void axpby(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto x = random_data(n, 4);
  const auto y = random_data(n, 5);
  std::vector<double> out(n);
  for (auto _ : state) {
    Kernel(0.3, x, -1.2, y, out);
    benchmark::DoNotOptimize(out.data());
  }
  state.SetItemsProcessed(state.iterations() * static_cast<long>(n));
}

// Whole solves on the three-block family; the OpenMP kernels engage above kParallelMinSize.
void solve_dp2(benchmark::State& state) {
  const auto problem = dpadmm::generate(static_cast<int>(state.range(0)), 100.0, 7).problem();
  const auto params = dpadmm::VariantConfig::dp2().params(1e-9, 100000);
  for (auto _ : state) {
    auto r = dpadmm::run(problem, dpadmm::BlockVector(problem.structure), params);
    benchmark::DoNotOptimize(r.v_norm);
  }
}

}  // namespace

#define KERNEL_PAIR(name)                                                                   \
  BENCHMARK(name<k::serial::name>)->Name(#name "/serial")->RangeMultiplier(8)->Range(1 << 10, 1 << 22); \
  BENCHMARK(name<k::parallel::name>)->Name(#name "/parallel")->RangeMultiplier(8)->Range(1 << 10, 1 << 22)

KERNEL_PAIR(stacked_apply_add);
KERNEL_PAIR(stacked_adjoint);
KERNEL_PAIR(box_diag_solve);
KERNEL_PAIR(axpby);

BENCHMARK(solve_dp2)->Arg(2560)->Arg(40960)->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
