#include <gtest/gtest.h>

#include "sympick/kernel_lab.hpp"
#include "sympick/kernels.hpp"
#include "sympick/random.hpp"

using namespace sympick;
using kernels::Exec;

namespace {

NodeSet random_nodes(Rng& rng, int n, double r = 0.8) {
  std::vector<GPoint> pts;
  for (int i = 0; i < n; ++i) pts.push_back(symmetrize(random_disk_point(rng, r), random_disk_point(rng, r)));
  return NodeSet(std::move(pts));
}

}  // namespace

TEST(Kernels, ProjectBlocksSerialMatchesParallel) {
  Rng rng(1);
  std::vector<Matrix> a;
  for (int m = 0; m < 60; ++m) {
    const Matrix g = random_gaussian_matrix(rng, 5, 5);
    a.push_back(g + g.adjoint());
  }
  std::vector<Matrix> b = a;
  const auto ea = kernels::project_blocks(a, Exec::Serial);
  const auto eb = kernels::project_blocks(b, Exec::Parallel);
  ASSERT_EQ(ea.size(), eb.size());
  for (std::size_t m = 0; m < a.size(); ++m) {
    EXPECT_EQ(ea[m], eb[m]);
    EXPECT_TRUE(a[m] == b[m]);
  }
}

TEST(Kernels, ConstrainedMinEigsSerialMatchesParallel) {
  Rng rng(2);
  const NodeSet nodes = random_nodes(rng, 6);
  const auto coeffs = coefficient_matrices(AlphaGrid::standard(), nodes);
  const Matrix g = random_gaussian_matrix(rng, 6, 6);
  const Matrix k = g * g.adjoint();
  EXPECT_EQ(kernels::constrained_min_eigs(k, coeffs, Exec::Serial),
            kernels::constrained_min_eigs(k, coeffs, Exec::Parallel));
}

TEST(Kernels, MapIndexedPreservesOrder) {
  const auto v = kernels::map_indexed(
      100, [](int i) { return static_cast<double>(i * i); }, Exec::Parallel);
  for (int i = 0; i < 100; ++i) EXPECT_EQ(v[static_cast<std::size_t>(i)], static_cast<double>(i * i));
}

TEST(Kernels, TorusMaxSerialMatchesParallel) {
  Rng rng(3);
  const Matrix c = random_gaussian_matrix(rng, 4, 3);
  EXPECT_EQ(kernels::torus_max_modulus(c, 128, Exec::Serial), kernels::torus_max_modulus(c, 128, Exec::Parallel));
  const auto a = kernels::torus_row_maxima(c, 64, Exec::Serial);
  const auto b = kernels::torus_row_maxima(c, 64, Exec::Parallel);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].value, b[i].value);
    EXPECT_EQ(a[i].col, b[i].col);
  }
}

TEST(Kernels, TorusMaxOfCoordinateS) {
  Matrix c = Matrix::Zero(2, 1);
  c(1, 0) = 1.0;  // xi = s
  EXPECT_NEAR(kernels::torus_max_modulus(c, 64), 2.0, 1e-12);
}

TEST(Kernels, EvalPolyHorner) {
  Matrix c = Matrix::Zero(3, 2);
  c(0, 0) = 1.0;
  c(2, 1) = Complex(0.0, 2.0);  // 1 + 2i s^2 p
  const Complex s(0.3, -0.1), p(0.2, 0.4);
  EXPECT_NEAR(std::abs(kernels::eval_poly(c, s, p) - (1.0 + Complex(0, 2) * s * s * p)), 0.0, 1e-15);
}

TEST(Kernels, SerialWrappersAreSerial) {
  Rng rng(4);
  std::vector<Matrix> a{random_gaussian_matrix(rng, 3, 3)};
  a[0] = a[0] + a[0].adjoint();
  std::vector<Matrix> b = a;
  EXPECT_EQ(kernels::serial::project_blocks(a), kernels::project_blocks(b, Exec::Serial));
}
