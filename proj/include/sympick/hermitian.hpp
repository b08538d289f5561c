#pragma once

// Dense complex Hermitian linear algebra on top of Eigen.

#include "sympick/types.hpp"

namespace sympick {

/// Dense Hermitian matrix. The constructor symmetrizes its argument, so the
/// stored entries satisfy H(i,j) = conj(H(j,i)) exactly.
class HermitianMatrix {
 public:
  HermitianMatrix() = default;
  explicit HermitianMatrix(const Matrix& m);

  [[nodiscard]] Eigen::Index dim() const { return m_.rows(); }
  [[nodiscard]] const Matrix& matrix() const { return m_; }

 private:
  Matrix m_;
};

struct EigenDecomposition {
  RealVector values;  // ascending
  Matrix vectors;     // unitary, columns are eigenvectors
};

EigenDecomposition eigh(const HermitianMatrix& h);

/// Smallest eigenvalue of a Hermitian matrix; +inf for an empty matrix.
double min_eigenvalue(const Matrix& h);
/// Smallest eigenvalue and a unit eigenvector for it.
std::pair<double, Vector> min_eigenpair(const Matrix& h);

/// Frobenius-nearest PSD matrix (negative eigenvalues clipped to zero).
HermitianMatrix psd_project(const HermitianMatrix& h);
/// In-place variant on a raw block; returns the smallest eigenvalue seen
/// before clipping.
double psd_project_inplace(Matrix& block);

/// G with G^* G = H and rows = numerical rank. Eigenvalues <= tol * lambda_max
/// count as zero; an eigenvalue below -tol * ||H|| raises InputError("not PSD").
Matrix gram_factor(const HermitianMatrix& h, double tol = 1e-10);

/// Unitary V on the common ambient space with V x_i = y_i, where x_i, y_i are
/// the columns of X and Y (shorter columns are zero-padded). Requires
/// X^* X = Y^* Y within tol (relative to max(1, ||X^* X||)).
Matrix unitary_completion(const Matrix& x, const Matrix& y, double tol = 1e-8);

/// Blockwise tensor product: block (i,j) of the result is A_ij (x) B_ij, with
/// A split in a_block x a_block blocks and B in b_block x b_block blocks. With
/// both block sizes 1 this is the entrywise (Schur) product.
Matrix schur_oslash(const Matrix& a, int a_block, const Matrix& b, int b_block);

double spectral_norm(const Matrix& m);
bool all_finite(const Matrix& m);

}  // namespace sympick
