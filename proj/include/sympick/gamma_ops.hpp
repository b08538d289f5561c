#pragma once

// Commuting matrix pairs and the closed symmetrized bidisk: Gamma-unitary and
// Gamma-isometry tests, atomic models on the distinguished boundary, Toeplitz
// positivity and polynomial spectral-set probes.

#include <cstdint>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "sympick/geometry.hpp"
#include "sympick/kernels.hpp"
#include "sympick/types.hpp"

namespace sympick {

/// (first, second) plays (S, P), (T, V) or (R, U).
struct OperatorPair {
  Matrix first;
  Matrix second;
  [[nodiscard]] Eigen::Index dim() const { return first.rows(); }
  /// ||first second - second first||_F.
  [[nodiscard]] double commutator() const;
};

struct GammaCheck {
  bool passed = false;
  double isometry_defect = 0.0;  // ||X^* X - I||
  double symmetry_defect = 0.0;  // ||first - first^* second||
  double norm = 0.0;             // ||first||
  double commutator = 0.0;
  std::string reason;
};

/// Throws InputError for non-square, mismatched or non-commuting (1e-10) pairs.
GammaCheck gamma_unitary_check(const OperatorPair& pair, double tol = 1e-10);
GammaCheck gamma_isometry_check(const OperatorPair& pair, double tol = 1e-10);

/// (U1 + U2, U1 U2) for commuting unitaries.
OperatorPair symmetrized_pair(const Matrix& u1, const Matrix& u2);

/// Commuting unitaries (U1, U2) with R = U1 + U2, U = U1 U2, from a joint
/// diagonalization; at each joint eigenvalue the root of z^2 - r z + u with
/// non-negative imaginary part goes to U1.
std::pair<Matrix, Matrix> factor_gamma_unitary(const OperatorPair& pair, double tol = 1e-8);

struct AtomicMeasure {
  std::vector<BGammaPoint> atoms;
  std::vector<double> weights;
  void validate() const;
};

struct AtomicModel {
  OperatorPair pair;
  /// The constant function 1 in the weighted orthonormal basis.
  Vector cyclic_vector;
  int krylov_rank = 0;
};

/// Multiplication by s and p on L^2(mu), orthonormal basis e_k / sqrt(w_k).
AtomicModel atomic_h2_model(const AtomicMeasure& mu);

/// Rank of span{T^a V^b x : a + b <= degree} (relative threshold 1e-10).
int krylov_rank(const OperatorPair& pair, const Vector& x, int degree);

struct PositivityResult {
  bool positive = false;
  double min_eig = 0.0;
};

/// lambda_min(M M^* - delta I) for M = multiplication by Phi on the atomic
/// model, given Phi at the scaled atoms scale_point(atom_k, r).
PositivityResult toeplitz_positivity(const std::vector<Matrix>& phi_at_scaled_atoms, const AtomicMeasure& mu,
                                     double delta, double r, double tol = 1e-12);
PositivityResult toeplitz_positivity(const std::function<Matrix(const GPoint&)>& phi, const AtomicMeasure& mu,
                                     double delta, double r, double tol = 1e-12);

/// xi(s, p) = sum_{a, b} coeff(a, b) s^a p^b.
Complex eval_polynomial(const Matrix& coeff, Complex s, Complex p);
Matrix eval_polynomial(const Matrix& coeff, const OperatorPair& pair);

struct SupEstimate {
  /// Over seeded samples of G, boundary-near samples and a refined torus grid.
  double lower = 0.0;
  /// grid max / (1 - h deg) on the torus (Bernstein bound).
  double upper = 0.0;
};

SupEstimate sup_over_gamma(const Matrix& coeff, int samples, std::uint64_t seed, int torus_grid = 512,
                           kernels::Exec exec = kernels::default_exec());

struct SpectralProbeReport {
  /// max ||xi(S, P)|| / lower-bound sup: values <= 1 are consistent with a
  /// Gamma-contraction (inconclusive).
  double max_ratio = 0.0;
  /// max ||xi(S, P)|| / upper-bound sup: values > 1 + tol certify the pair is
  /// not a Gamma-contraction.
  double max_certified_ratio = 0.0;
  bool not_gamma_contraction = false;
  int worst_polynomial = -1;
  int polynomials = 0;
};

SpectralProbeReport spectral_set_probe(const OperatorPair& pair, int degree, int sample_count, std::uint64_t seed,
                                       double tol = 1e-9, int sup_samples = 10000);

/// Probe for one given polynomial.
SpectralProbeReport spectral_set_probe(const OperatorPair& pair, const Matrix& coeff, double tol = 1e-9,
                                       int sup_samples = 10000, std::uint64_t seed = 0);

}  // namespace sympick
