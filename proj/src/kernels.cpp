#include "sympick/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#ifdef SYMPICK_HAVE_OPENMP
#include <omp.h>
#endif

#include "sympick/hermitian.hpp"

namespace sympick::kernels {

namespace {

// Below this many (block rows)^3 * count the fork/join costs more than it saves.
constexpr double kParallelWorkFloor = 2.0e4;

RowMax torus_row_max(const Matrix& coeff, int n, int row) {
  const double h = 2.0 * std::numbers::pi / n;
  const Complex z1 = std::polar(1.0, row * h);
  RowMax best{0.0, 0};
  for (int c = 0; c < n; ++c) {
    const Complex z2 = std::polar(1.0, c * h);
    const double v = std::abs(eval_poly(coeff, z1 + z2, z1 * z2));
    if (v > best.value) best = {v, c};
  }
  return best;
}

double block_work(const std::vector<Matrix>& blocks) {
  if (blocks.empty()) return 0.0;
  const double n = static_cast<double>(blocks.front().rows());
  return n * n * n * static_cast<double>(blocks.size());
}

}  // namespace

Complex eval_poly(const Matrix& coeff, Complex s, Complex p) {
  // Horner in p for each power of s, then Horner in s.
  Complex acc{0.0, 0.0};
  for (Eigen::Index a = coeff.rows() - 1; a >= 0; --a) {
    Complex inner{0.0, 0.0};
    for (Eigen::Index b = coeff.cols() - 1; b >= 0; --b) inner = inner * p + coeff(a, b);
    acc = acc * s + inner;
  }
  return acc;
}

Exec default_exec() {
#ifdef SYMPICK_HAVE_OPENMP
  return Exec::Parallel;
#else
  return Exec::Serial;
#endif
}

int max_threads() {
#ifdef SYMPICK_HAVE_OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

std::vector<double> project_blocks(std::vector<Matrix>& blocks, Exec exec) {
  const int m = static_cast<int>(blocks.size());
  std::vector<double> lowest(blocks.size(), 0.0);
  if (exec == Exec::Serial) {
    for (int i = 0; i < m; ++i) lowest[i] = psd_project_inplace(blocks[i]);
    return lowest;
  }
  const bool worth_it = block_work(blocks) > kParallelWorkFloor;
#pragma omp parallel for schedule(static) if (worth_it)
  for (int i = 0; i < m; ++i) lowest[i] = psd_project_inplace(blocks[i]);
  return lowest;
}

std::vector<double> constrained_min_eigs(const Matrix& k, const std::vector<Matrix>& c, Exec exec) {
  const int m = static_cast<int>(c.size());
  std::vector<double> out(c.size(), 0.0);
  if (exec == Exec::Serial) {
    for (int i = 0; i < m; ++i) out[i] = min_eigenvalue(c[i].cwiseProduct(k));
    return out;
  }
  const double n = static_cast<double>(k.rows());
  const bool worth_it = n * n * n * m > kParallelWorkFloor;
#pragma omp parallel for schedule(static) if (worth_it)
  for (int i = 0; i < m; ++i) out[i] = min_eigenvalue(c[i].cwiseProduct(k));
  return out;
}

std::vector<double> map_indexed(int n, const std::function<double(int)>& f, Exec exec) {
  std::vector<double> out(static_cast<std::size_t>(std::max(0, n)), 0.0);
  if (exec == Exec::Serial) {
    for (int i = 0; i < n; ++i) out[i] = f(i);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 16)
  for (int i = 0; i < n; ++i) out[i] = f(i);
  return out;
}

std::vector<RowMax> torus_row_maxima(const Matrix& coeff, int n, Exec exec) {
  std::vector<RowMax> rows(static_cast<std::size_t>(std::max(0, n)));
  if (exec == Exec::Serial) {
    for (int r = 0; r < n; ++r) rows[r] = torus_row_max(coeff, n, r);
  } else {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) rows[r] = torus_row_max(coeff, n, r);
  }
  return rows;
}

double torus_max_modulus(const Matrix& coeff, int n, Exec exec) {
  double best = 0.0;
  for (const RowMax& r : torus_row_maxima(coeff, n, exec)) best = std::max(best, r.value);
  return best;
}

}  // namespace sympick::kernels
