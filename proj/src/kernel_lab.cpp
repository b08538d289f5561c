#include "sympick/kernel_lab.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "sympick/hermitian.hpp"
#include "sympick/kernels.hpp"
#include "sympick/random.hpp"

namespace sympick {

NodeSet::NodeSet(std::vector<GPoint> points) : points_(std::move(points)) {
  for (std::size_t i = 0; i < points_.size(); ++i) {
    require_member(points_[i], "node " + std::to_string(i));
    for (std::size_t j = 0; j < i; ++j) {
      const double gap = std::abs(points_[i].s - points_[j].s) + std::abs(points_[i].p - points_[j].p);
      require(gap > 1e-12, "nodes " + std::to_string(j) + " and " + std::to_string(i) + " coincide");
    }
  }
}

NodeSet NodeSet::subset(const std::vector<int>& indices) const {
  std::vector<GPoint> pts;
  pts.reserve(indices.size());
  for (int i : indices) {
    require(i >= 0 && i < size(), "node index out of range");
    pts.push_back(points_[static_cast<std::size_t>(i)]);
  }
  return NodeSet(std::move(pts));
}

AlphaGrid AlphaGrid::standard(int boundary, int radii, int angles, bool zero) {
  require(boundary >= 0 && radii >= 0 && angles >= 0, "grid counts must be non-negative");
  AlphaGrid g;
  for (int k = 0; k < boundary; ++k)
    g.alphas.push_back(std::polar(1.0, 2.0 * std::numbers::pi * k / boundary));
  if (zero) g.alphas.emplace_back(0.0, 0.0);
  for (int r = 1; r <= radii && angles > 0; ++r) {
    const double radius = static_cast<double>(r) / (radii + 1);
    // Offset by half a step so interior rays interleave with the boundary ones.
    for (int k = 0; k < angles; ++k)
      g.alphas.push_back(std::polar(radius, 2.0 * std::numbers::pi * (k + 0.5) / angles));
  }
  g.validate();
  return g;
}

AlphaGrid AlphaGrid::circle(int n) { return standard(n, 0, 0, false); }

AlphaGrid AlphaGrid::from_alphas(std::vector<Complex> alphas) {
  AlphaGrid g;
  g.alphas = std::move(alphas);
  g.validate();
  return g;
}

void AlphaGrid::validate() const {
  require(!alphas.empty(), "alpha grid is empty");
  require(weights.empty() || weights.size() == alphas.size(), "alpha grid weights/alphas size mismatch");
  for (std::size_t i = 0; i < alphas.size(); ++i) {
    require(std::abs(alphas[i]) <= 1.0 + 1e-14, "alpha outside the closed disk");
    for (std::size_t j = 0; j < i; ++j)
      require(std::abs(alphas[i] - alphas[j]) > 1e-14, "alpha grid has duplicate points");
  }
  for (double w : weights) require(w > 0.0, "alpha grid weights must be positive");
}

Matrix phi_table(const AlphaGrid& grid, const NodeSet& nodes) {
  Matrix t(grid.size(), nodes.size());
  for (int m = 0; m < grid.size(); ++m)
    for (int i = 0; i < nodes.size(); ++i) t(m, i) = phi(grid.alphas[static_cast<std::size_t>(m)], nodes[i]);
  return t;
}

Matrix coefficient_matrix(Complex alpha, const NodeSet& nodes) {
  const int n = nodes.size();
  Vector f(n);
  for (int i = 0; i < n; ++i) f(i) = phi(alpha, nodes[i]);
  return Matrix::Ones(n, n) - f * f.adjoint();
}

std::vector<Matrix> coefficient_matrices(const AlphaGrid& grid, const NodeSet& nodes) {
  std::vector<Matrix> out;
  out.reserve(grid.alphas.size());
  for (Complex a : grid.alphas) out.push_back(coefficient_matrix(a, nodes));
  return out;
}

Matrix expand_blocks(const Matrix& c, int block) {
  if (block == 1) return c;
  Matrix out(c.rows() * block, c.cols() * block);
  for (Eigen::Index i = 0; i < c.rows(); ++i)
    for (Eigen::Index j = 0; j < c.cols(); ++j)
      out.block(i * block, j * block, block, block).setConstant(c(i, j));
  return out;
}

namespace {

void check_kernel_shape(const KernelMatrix& k) {
  require(k.block >= 1, "kernel block size must be positive");
  require(k.k.rows() == k.k.cols(), "kernel matrix must be square");
  require(k.k.rows() == static_cast<Eigen::Index>(k.nodes.size()) * k.block,
          "kernel matrix size does not match nodes x block");
}

double constrained_min_eig(const KernelMatrix& k, Complex alpha) {
  return min_eigenvalue(expand_blocks(coefficient_matrix(alpha, k.nodes), k.block).cwiseProduct(k.k));
}

}  // namespace

AdmissibilityReport admissibility_check(const KernelMatrix& k, const AlphaGrid& grid, double tol) {
  require(!grid.alphas.empty(), "admissibility_check: grid is empty");
  check_kernel_shape(k);
  std::vector<Matrix> coeffs;
  coeffs.reserve(grid.alphas.size());
  for (const Matrix& c : coefficient_matrices(grid, k.nodes)) coeffs.push_back(expand_blocks(c, k.block));
  const std::vector<double> eigs = kernels::constrained_min_eigs(k.k, coeffs);

  AdmissibilityReport r;
  r.worst_min_eig = std::numeric_limits<double>::infinity();
  for (std::size_t m = 0; m < eigs.size(); ++m) {
    r.min_eig_per_alpha.emplace_back(grid.alphas[m], eigs[m]);
    if (eigs[m] < r.worst_min_eig) {
      r.worst_min_eig = eigs[m];
      r.worst_alpha = grid.alphas[m];
    }
  }
  r.is_admissible_on_grid = r.worst_min_eig >= -tol;
  return r;
}

std::pair<Complex, double> refine_worst_alpha(const KernelMatrix& k, const AdmissibilityReport& report) {
  Complex best_alpha = report.worst_alpha;
  double best = constrained_min_eig(k, best_alpha);
  const double theta0 = std::arg(best_alpha);
  // Radial probes along the worst ray, then a golden-section search in angle
  // on the circle (min over a small bracket around the worst ray).
  for (double r : {0.25, 0.5, 0.75, 1.0}) {
    const Complex a = std::polar(r, theta0);
    const double v = constrained_min_eig(k, a);
    if (v < best) {
      best = v;
      best_alpha = a;
    }
  }
  const double radius = std::max(std::abs(best_alpha), 1e-3);
  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double lo = theta0 - 0.2;
  double hi = theta0 + 0.2;
  double c = hi - inv_phi * (hi - lo);
  double d = lo + inv_phi * (hi - lo);
  double fc = constrained_min_eig(k, std::polar(radius, c));
  double fd = constrained_min_eig(k, std::polar(radius, d));
  for (int it = 0; it < 60 && hi - lo > 1e-10; ++it) {
    if (fc < fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - inv_phi * (hi - lo);
      fc = constrained_min_eig(k, std::polar(radius, c));
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + inv_phi * (hi - lo);
      fd = constrained_min_eig(k, std::polar(radius, d));
    }
  }
  const Complex a = std::polar(radius, 0.5 * (lo + hi));
  const double v = constrained_min_eig(k, a);
  if (v < best) {
    best = v;
    best_alpha = a;
  }
  return {best_alpha, best};
}

KernelMatrix make_b_kernel(Complex alpha, const NodeSet& nodes, int block) {
  require(std::abs(alpha) <= 1.0 + 1e-14, "make_b_kernel: |alpha| must be <= 1");
  require(block >= 1, "make_b_kernel: block must be positive");
  const Matrix c = coefficient_matrix(alpha, nodes);
  const Matrix b = c.cwiseInverse();
  KernelMatrix k{nodes, block, Matrix()};
  k.k = expand_blocks(b, block);
  for (Eigen::Index i = 0; i < k.k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.k.cols(); ++j)
      if ((i % block) != (j % block)) k.k(i, j) = 0.0;
  return k;
}

KernelMatrix make_d_kernel(Complex alpha, const NodeSet& nodes, const std::vector<Vector>& u) {
  require(static_cast<int>(u.size()) == nodes.size(), "make_d_kernel: need one vector per node");
  require(!u.empty(), "make_d_kernel: empty node set");
  const Eigen::Index d = u.front().size();
  require(d >= 1, "make_d_kernel: zero-dimensional vectors");
  for (const Vector& v : u) require(v.size() == d, "make_d_kernel: dimension mismatch");
  const Matrix c = coefficient_matrix(alpha, nodes);
  const int n = nodes.size();
  KernelMatrix k{nodes, static_cast<int>(d), Matrix(n * d, n * d)};
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      k.k.block(i * d, j * d, d, d) = (u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(j)].adjoint()) / c(i, j);
  return k;
}

void shift_to_admissible(Matrix& k, int block, const std::vector<Matrix>& coeffs) {
  // lambda_min(C o K + t C o I) >= lambda_min(C o K) + t min_i C_ii.
  double t = 0.0;
  const int n = static_cast<int>(k.rows()) / block;
  std::vector<Matrix> expanded;
  expanded.reserve(coeffs.size());
  for (const Matrix& c : coeffs) expanded.push_back(expand_blocks(c, block));
  const std::vector<double> eigs = kernels::constrained_min_eigs(k, expanded);
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    double floor = std::numeric_limits<double>::infinity();
    for (int i = 0; i < n; ++i) floor = std::min(floor, coeffs[m](i, i).real());
    if (eigs[m] < 0.0) t = std::max(t, -eigs[m] / floor);
  }
  if (t > 0.0) {
    const double scale = std::max(1.0, k.diagonal().real().cwiseAbs().maxCoeff());
    k.diagonal().array() += t * (1.0 + 1e-9) + 1e-13 * scale;
  }
}

KernelMatrix random_admissible_kernel(const NodeSet& nodes, const AlphaGrid& grid, std::uint64_t seed,
                                      int iters, int block) {
  grid.validate();
  require(!nodes.empty(), "random_admissible_kernel: empty node set");
  require(block >= 1, "random_admissible_kernel: block must be positive");
  Rng rng(seed);
  const Eigen::Index dim = static_cast<Eigen::Index>(nodes.size()) * block;
  const Matrix g = random_gaussian_matrix(rng, dim, dim);
  Matrix k = g * g.adjoint() / static_cast<double>(dim);

  const std::vector<Matrix> coeffs = coefficient_matrices(grid, nodes);
  std::vector<Matrix> expanded;
  expanded.reserve(coeffs.size());
  for (const Matrix& c : coeffs) expanded.push_back(expand_blocks(c, block));

  for (int it = 0; it < iters; ++it) {
    psd_project_inplace(k);
    for (Eigen::Index i = 0; i < dim; ++i) k(i, i) = std::max(k(i, i).real(), 1.0);
    for (const Matrix& c : expanded) {
      Matrix ck = c.cwiseProduct(k);
      ck = 0.5 * (ck + ck.adjoint()).eval();
      psd_project_inplace(ck);
      k = ck.cwiseQuotient(c);
      k = 0.5 * (k + k.adjoint()).eval();
    }
  }
  for (Eigen::Index i = 0; i < dim; ++i) k(i, i) = std::max(k(i, i).real(), 1.0);
  shift_to_admissible(k, block, coeffs);
  if (!all_finite(k)) throw NumericalError("random_admissible_kernel: generation failed");

  KernelMatrix out{nodes, block, k};
  if (!admissibility_check(out, grid, 1e-8).is_admissible_on_grid)
    throw NumericalError("random_admissible_kernel: generation failed");
  return out;
}

Matrix grammian_normalize(const KernelMatrix& k) {
  check_kernel_shape(k);
  const int n = k.nodes.size();
  const int d = k.block;
  if (d == 1) {
    RealVector inv_sqrt(n);
    for (int i = 0; i < n; ++i) {
      const double kii = k.k(i, i).real();
      if (!(kii > 1e-300)) throw InputError("grammian_normalize: not a kernel (weak kernel only)");
      inv_sqrt(i) = 1.0 / std::sqrt(kii);
    }
    Matrix g = inv_sqrt.asDiagonal() * k.k * inv_sqrt.asDiagonal();
    g.diagonal().setOnes();
    return g;
  }
  std::vector<Matrix> factors;
  for (int i = 0; i < n; ++i) {
    const Matrix kii = k.k.block(i * d, i * d, d, d);
    Eigen::SelfAdjointEigenSolver<Matrix> es(kii);
    if (!(es.eigenvalues()(0) > 1e-300)) throw InputError("grammian_normalize: not a kernel (weak kernel only)");
    factors.push_back(es.eigenvectors() * es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                      es.eigenvectors().adjoint());
  }
  Matrix g(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.block(i * d, j * d, d, d) = factors[static_cast<std::size_t>(i)] * k.k.block(i * d, j * d, d, d) *
                                    factors[static_cast<std::size_t>(j)];
  return 0.5 * (g + g.adjoint());
}

}  // namespace sympick
