// Serial reference vs OpenMP dispatch for the per-alpha and per-sample kernels.

#include <benchmark/benchmark.h>

#include "sympick/cp_feasibility.hpp"
#include "sympick/kernel_lab.hpp"
#include "sympick/kernels.hpp"
#include "sympick/random.hpp"

namespace {

using namespace sympick;

NodeSet random_nodes(int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(symmetrize(random_disk_point(rng, 0.8), random_disk_point(rng, 0.8)));
  return NodeSet(std::move(pts));
}

std::vector<Matrix> random_blocks(int count, int n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Matrix> out;
  for (int m = 0; m < count; ++m) {
    const Matrix g = random_gaussian_matrix(rng, n, n);
    out.push_back(g + g.adjoint());
  }
  return out;
}

kernels::Exec exec_of(const benchmark::State& st) {
  return st.range(1) ? kernels::Exec::Parallel : kernels::Exec::Serial;
}

void BM_ProjectBlocks(benchmark::State& st) {
  const auto base = random_blocks(193, static_cast<int>(st.range(0)), 7);
  for (auto _ : st) {
    auto blocks = base;
    benchmark::DoNotOptimize(kernels::project_blocks(blocks, exec_of(st)));
  }
}

void BM_ConstrainedMinEigs(benchmark::State& st) {
  const NodeSet nodes = random_nodes(static_cast<int>(st.range(0)), 3);
  const auto coeffs = coefficient_matrices(AlphaGrid::standard(), nodes);
  const Matrix k = Matrix::Identity(nodes.size(), nodes.size());
  for (auto _ : st) benchmark::DoNotOptimize(kernels::constrained_min_eigs(k, coeffs, exec_of(st)));
}

void BM_TorusMaxModulus(benchmark::State& st) {
  Rng rng(11);
  const Matrix coeff = random_gaussian_matrix(rng, 5, 5);
  for (auto _ : st)
    benchmark::DoNotOptimize(kernels::torus_max_modulus(coeff, static_cast<int>(st.range(0)), exec_of(st)));
}

void BM_Solve(benchmark::State& st) {
  const NodeSet nodes = random_nodes(static_cast<int>(st.range(0)), 5);
  const int n = nodes.size();
  Rng rng(13);
  Vector w(n);
  for (int i = 0; i < n; ++i) w(i) = 0.3 * random_disk_point(rng);
  const FeasibilityTarget target(nodes, Matrix::Ones(n, n) - w * w.adjoint());
  SolveOptions opts;
  opts.exec = exec_of(st);
  const AlphaGrid grid = AlphaGrid::standard();
  for (auto _ : st) benchmark::DoNotOptimize(solve(target, grid, opts));
}

}  // namespace

BENCHMARK(BM_ProjectBlocks)->ArgsProduct({{4, 8, 16}, {0, 1}});
BENCHMARK(BM_ConstrainedMinEigs)->ArgsProduct({{4, 8, 16}, {0, 1}});
BENCHMARK(BM_TorusMaxModulus)->ArgsProduct({{128, 512}, {0, 1}});
BENCHMARK(BM_Solve)->ArgsProduct({{3, 6}, {0, 1}})->Unit(benchmark::kMillisecond);

BENCHMARK_MAIN();
