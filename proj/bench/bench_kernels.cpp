// Serial reference kernels against their OpenMP counterparts.
#include <benchmark/benchmark.h>

#include <random>

#include "lapnet/dense.hpp"
#include "lapnet/kernels.hpp"
#include "lapnet/laplacian.hpp"
#include "lapnet/semigroup.hpp"

using namespace lapnet;
namespace k = lapnet::kernels;

namespace {

std::vector<double> random_reals(std::size_t n) {
  std::mt19937 rng(1);
  std::uniform_real_distribution<double> d(-1.0, 1.0);
  std::vector<double> v(n);
  for (auto& x : v) x = d(rng);
  return v;
}

CsrMatrix lattice(int extent) {
  auto g = GraphSystem::lattice(3, extent);
  return assemble_matrix(g, Window::whole(g), Boundary::induced).csr();
}

Exec exec_of(const benchmark::State& state) { return state.range(1) ? Exec::parallel : Exec::serial; }

void BM_Spmv(benchmark::State& state) {
  auto a = lattice(int(state.range(0)));
  auto x = random_reals(a.cols);
  std::vector<double> y(a.rows);
  const Exec ex = exec_of(state);
  for (auto _ : state) {
    k::spmv(ex, a, x, y);
    benchmark::DoNotOptimize(y.data());
  }
  state.SetItemsProcessed(state.iterations() * std::int64_t(a.nnz()));
}
BENCHMARK(BM_Spmv)->ArgsProduct({{16, 32, 64}, {0, 1}});

void BM_Dot(benchmark::State& state) {
  auto x = random_reals(std::size_t(state.range(0)));
  auto y = random_reals(std::size_t(state.range(0)));
  const Exec ex = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(k::dot(ex, x, y));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Dot)->ArgsProduct({{1 << 12, 1 << 16, 1 << 20}, {0, 1}});

void BM_DftAxis(benchmark::State& state) {
  const std::size_t n = std::size_t(state.range(0));
  std::vector<std::complex<double>> data(n * n * n, 1.0);
  const Exec ex = exec_of(state);
  for (auto _ : state) {
    k::dft_axis(ex, data, n, 1, false);
    benchmark::DoNotOptimize(data.data());
  }
}
BENCHMARK(BM_DftAxis)->ArgsProduct({{16, 32}, {0, 1}});

void BM_Jacobi(benchmark::State& state) {
  auto g = GraphSystem::cyclic(int(state.range(0)));
  auto m = assemble_matrix(g, Window::whole(g), Boundary::induced).dense();
  JacobiOptions opts;
  opts.exec = exec_of(state);
  for (auto _ : state) benchmark::DoNotOptimize(jacobi_eigh(m, opts).values.data());
}
BENCHMARK(BM_Jacobi)->ArgsProduct({{64, 128}, {0, 1}})->Unit(benchmark::kMillisecond);

void BM_ChebyshevHeat(benchmark::State& state) {
  auto g = GraphSystem::lattice(2, int(state.range(0)));
  auto w = Window::whole(g);
  HeatOptions opts;
  opts.exec = exec_of(state);
  HeatSemigroup S(assemble_matrix(g, w, Boundary::induced), opts);
  auto v = VertexField::dirac(w, 0);
  for (auto _ : state) benchmark::DoNotOptimize(S.apply(2.0, v).values().data());
}
BENCHMARK(BM_ChebyshevHeat)->ArgsProduct({{64, 128}, {0, 1}})->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
