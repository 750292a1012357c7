#include <benchmark/benchmark.h>

#include <random>

#include "nilspace/cohomology.hpp"
#include "nilspace/hk_cubes.hpp"

using namespace nilspace;

namespace {

FilteredGroup heisenberg(int m) { return FilteredGroup::lower_central(Group::heisenberg(m)); }

std::vector<CubeValues> random_cubes(const FilteredGroup& fg, int n, std::size_t count) {
  std::mt19937 rng(3);
  std::vector<CubeValues> out;
  for (std::size_t i = 0; i < count; ++i) {
    CubeValues coefficients(cube_size(n), 0);
    for (VertexIndex v = 0; v < cube_size(n); ++v) {
      const auto& level = fg.level(weight(v)).elements();
      coefficients[v] = level[rng() % level.size()];
    }
    out.push_back(multiply_out(fg.group(), coefficients));
  }
  return out;
}

void BM_Sigma(benchmark::State& state) {
  const auto g = Group::heisenberg(3);
  const int n = static_cast<int>(state.range(0));
  std::mt19937 rng(1);
  std::vector<Elem> values(cube_size(n));
  for (auto& v : values) v = static_cast<Elem>(rng() % g.order());
  for (auto _ : state) benchmark::DoNotOptimize(sigma(g, values));
}
BENCHMARK(BM_Sigma)->DenseRange(2, 8, 2);

void BM_Factorize(benchmark::State& state) {
  const auto fg = heisenberg(3);
  const auto cubes = random_cubes(fg, static_cast<int>(state.range(0)), 64);
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(factorize(fg, cubes[i++ % cubes.size()]));
}
BENCHMARK(BM_Factorize)->DenseRange(2, 6, 2);

void BM_CompleteCorner(benchmark::State& state) {
  const auto fg = heisenberg(3);
  const int n = static_cast<int>(state.range(0));
  const CornerCompleter completer(fg);
  auto corners = random_cubes(fg, n, 64);
  for (auto& c : corners) c.pop_back();
  std::size_t i = 0;
  for (auto _ : state) benchmark::DoNotOptimize(completer.complete(corners[i++ % corners.size()]));
}
BENCHMARK(BM_CompleteCorner)->DenseRange(2, 6, 2);

void BM_EnumerateCubes(benchmark::State& state) {
  const auto fg = heisenberg(2);
  const int n = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(enumerate_cubes(fg, n));
}
BENCHMARK(BM_EnumerateCubes)->DenseRange(1, 3)->Unit(benchmark::kMillisecond);

void BM_CountClasses(benchmark::State& state) {
  const auto x = degree_k_cubespace(FiniteAbelianGroup({state.range(0)}), 1);
  const FiniteAbelianGroup a({2});
  for (auto _ : state) benchmark::DoNotOptimize(count_classes(x, a, 1));
}
BENCHMARK(BM_CountClasses)->Arg(2)->Arg(3)->Arg(4)->Arg(6)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
