#pragma once

// Seeded generators shared by the library and the tests.

#include <cmath>
#include <cstdint>
#include <numbers>
#include <random>

#include "sympick/types.hpp"

namespace sympick {

using Rng = std::mt19937_64;

inline Complex random_normal_complex(Rng& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  const double re = n(rng);
  const double im = n(rng);
  return {re / std::numbers::sqrt2, im / std::numbers::sqrt2};
}

/// Uniform on the disk of radius r_max (area measure).
inline Complex random_disk_point(Rng& rng, double r_max = 1.0) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const double r = r_max * std::sqrt(u(rng));
  const double t = 2.0 * std::numbers::pi * u(rng);
  return std::polar(r, t);
}

inline Complex random_unimodular(Rng& rng) {
  std::uniform_real_distribution<double> u(0.0, 2.0 * std::numbers::pi);
  return std::polar(1.0, u(rng));
}

inline Matrix random_gaussian_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index j = 0; j < cols; ++j)
    for (Eigen::Index i = 0; i < rows; ++i) m(i, j) = random_normal_complex(rng);
  return m;
}

/// Haar-distributed unitary via QR of a Gaussian matrix with phase fix.
inline Matrix random_unitary(Rng& rng, Eigen::Index n) {
  const Matrix g = random_gaussian_matrix(rng, n, n);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(n, n);
  const Matrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (Eigen::Index k = 0; k < n; ++k) {
    const double a = std::abs(r(k, k));
    if (a > 0.0) q.col(k) *= r(k, k) / a;
  }
  return q;
}

}  // namespace sympick
