#include "sympick/hermitian.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

namespace sympick {

bool all_finite(const Matrix& m) {
  for (Eigen::Index j = 0; j < m.cols(); ++j)
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      if (!std::isfinite(m(i, j).real()) || !std::isfinite(m(i, j).imag())) return false;
  return true;
}

HermitianMatrix::HermitianMatrix(const Matrix& m) {
  require(m.rows() == m.cols(), "Hermitian matrix must be square");
  if (!all_finite(m)) throw NumericalError("Hermitian matrix has non-finite entries");
  m_ = 0.5 * (m + m.adjoint());
}

EigenDecomposition eigh(const HermitianMatrix& h) {
  require(h.dim() >= 1, "eigh needs dim >= 1");
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h.matrix());
  if (solver.info() != Eigen::Success) throw NumericalError("eigh: no convergence");
  return {solver.eigenvalues(), solver.eigenvectors()};
}

double min_eigenvalue(const Matrix& h) {
  if (h.rows() == 0) return std::numeric_limits<double>::infinity();
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues()(0);
}

std::pair<double, Vector> min_eigenpair(const Matrix& h) {
  Eigen::SelfAdjointEigenSolver<Matrix> solver(h);
  return {solver.eigenvalues()(0), solver.eigenvectors().col(0)};
}

double psd_project_inplace(Matrix& block) {
  if (block.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Matrix> solver(block);
  const RealVector& w = solver.eigenvalues();
  const double lowest = w(0);
  if (lowest >= 0.0) return lowest;
  const Matrix& v = solver.eigenvectors();
  block.setZero();
  for (Eigen::Index k = 0; k < w.size(); ++k) {
    if (w(k) > 0.0) block.noalias() += w(k) * v.col(k) * v.col(k).adjoint();
  }
  return lowest;
}

HermitianMatrix psd_project(const HermitianMatrix& h) {
  Matrix m = h.matrix();
  psd_project_inplace(m);
  return HermitianMatrix(m);
}

Matrix gram_factor(const HermitianMatrix& h, double tol) {
  const Eigen::Index n = h.dim();
  if (n == 0) return Matrix(0, 0);
  const EigenDecomposition e = eigh(h);
  const double scale = std::max(std::abs(e.values(0)), std::abs(e.values(n - 1)));
  if (scale == 0.0) return Matrix(0, n);
  if (e.values(0) < -tol * scale) throw InputError("gram_factor: matrix is not PSD");
  const double cutoff = tol * e.values(n - 1);
  std::vector<Eigen::Index> kept;
  for (Eigen::Index k = n - 1; k >= 0; --k)
    if (e.values(k) > cutoff) kept.push_back(k);
  Matrix g(static_cast<Eigen::Index>(kept.size()), n);
  for (std::size_t r = 0; r < kept.size(); ++r) {
    const Eigen::Index k = kept[r];
    g.row(static_cast<Eigen::Index>(r)) = std::sqrt(e.values(k)) * e.vectors.col(k).adjoint();
  }
  return g;
}

namespace {

// Full unitary Q (n x n) from a Householder QR of `a`, together with the
// coordinates R (n x k) of a's columns in that basis.
std::pair<Matrix, Matrix> full_qr(const Matrix& a) {
  Eigen::HouseholderQR<Matrix> qr(a);
  Matrix q = qr.householderQ() * Matrix::Identity(a.rows(), a.rows());
  Matrix r = q.adjoint() * a;
  return {q, r};
}

}  // namespace

Matrix unitary_completion(const Matrix& x_in, const Matrix& y_in, double tol) {
  require(x_in.cols() == y_in.cols(), "unitary_completion: vector counts differ");
  const Eigen::Index n = std::max(x_in.rows(), y_in.rows());
  const Eigen::Index k = x_in.cols();
  Matrix x = Matrix::Zero(n, k);
  Matrix y = Matrix::Zero(n, k);
  x.topRows(x_in.rows()) = x_in;
  y.topRows(y_in.rows()) = y_in;

  const Matrix gx = x.adjoint() * x;
  const Matrix gy = y.adjoint() * y;
  const double mismatch = (gx - gy).norm();
  const double scale = std::max(1.0, gx.norm());
  if (mismatch > tol * scale) {
    throw NumericalError("unitary_completion: not an isometric correspondence (Gram mismatch " +
                         std::to_string(mismatch) + ")");
  }
  if (n == 0) return Matrix(0, 0);
  if (k == 0) return Matrix::Identity(n, n);

  // X = Qx Rx, Y = Qy Ry. In these bases the map is the unitary Procrustes
  // solution of Ry ~ W Rx, which reproduces the action exactly on span X
  // whenever the Gram matrices agree.
  const auto [qx, rx] = full_qr(x);
  const auto [qy, ry] = full_qr(y);
  const Matrix m = ry * rx.adjoint();
  Eigen::JacobiSVD<Matrix> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix w = svd.matrixU() * svd.matrixV().adjoint();
  return qy * w * qx.adjoint();
}

Matrix schur_oslash(const Matrix& a, int a_block, const Matrix& b, int b_block) {
  require(a_block >= 1 && b_block >= 1, "schur_oslash: block sizes must be positive");
  require(a.rows() == a.cols() && b.rows() == b.cols(), "schur_oslash: square inputs required");
  require(a.rows() % a_block == 0 && b.rows() % b_block == 0,
          "schur_oslash: dimension not divisible by block size");
  const Eigen::Index na = a.rows() / a_block;
  const Eigen::Index nb = b.rows() / b_block;
  require(na == nb, "schur_oslash: shape mismatch (different node counts)");
  const Eigen::Index blk = static_cast<Eigen::Index>(a_block) * b_block;
  Matrix out(na * blk, na * blk);
  for (Eigen::Index i = 0; i < na; ++i) {
    for (Eigen::Index j = 0; j < na; ++j) {
      for (int ar = 0; ar < a_block; ++ar)
        for (int ac = 0; ac < a_block; ++ac) {
          const Complex av = a(i * a_block + ar, j * a_block + ac);
          out.block(i * blk + ar * b_block, j * blk + ac * b_block, b_block, b_block) =
              av * b.block(i * b_block, j * b_block, b_block, b_block);
        }
    }
  }
  return out;
}

double spectral_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(m);
  return svd.singularValues()(0);
}

}  // namespace sympick
