#pragma once

// Kernels restricted to finite node sets of G: admissibility on alpha grids,
// the b- and d-kernels, random grid-admissible kernels, normalized Grammians.

#include <cstdint>
#include <vector>

#include "sympick/geometry.hpp"
#include "sympick/types.hpp"

namespace sympick {

/// Ordered, pairwise distinct members of G.
class NodeSet {
 public:
  NodeSet() = default;
  /// Checks membership of every point and rejects duplicates (1e-12).
  explicit NodeSet(std::vector<GPoint> points);

  [[nodiscard]] int size() const { return static_cast<int>(points_.size()); }
  [[nodiscard]] bool empty() const { return points_.empty(); }
  [[nodiscard]] const GPoint& operator[](int i) const { return points_[static_cast<std::size_t>(i)]; }
  [[nodiscard]] const std::vector<GPoint>& points() const { return points_; }
  /// Subset in the given order (indices must be distinct).
  [[nodiscard]] NodeSet subset(const std::vector<int>& indices) const;

 private:
  std::vector<GPoint> points_;
};

/// Finite set of distinct alphas in the closed disk, optionally weighted.
struct AlphaGrid {
  std::vector<Complex> alphas;
  std::vector<double> weights;

  /// `boundary` points on the circle, {0} if requested, and `radii` interior
  /// circles (radius k / (radii + 1)) with `angles` points each.
  static AlphaGrid standard(int boundary = 64, int radii = 8, int angles = 16, bool zero = true);
  static AlphaGrid circle(int n);
  static AlphaGrid from_alphas(std::vector<Complex> alphas);

  [[nodiscard]] int size() const { return static_cast<int>(alphas.size()); }
  void validate() const;
};

/// Node-indexed (block) Hermitian matrix: entry block (i,j) has size block x block.
struct KernelMatrix {
  NodeSet nodes;
  int block = 1;
  Matrix k;
};

struct AdmissibilityReport {
  std::vector<std::pair<Complex, double>> min_eig_per_alpha;
  Complex worst_alpha{0.0, 0.0};
  double worst_min_eig = 0.0;
  bool is_admissible_on_grid = false;
};

/// phi(alpha_m, lambda_i) for every grid point m (rows) and node i (columns).
Matrix phi_table(const AlphaGrid& grid, const NodeSet& nodes);

/// C(i,j) = 1 - phi(alpha, lambda_i) conj(phi(alpha, lambda_j)).
Matrix coefficient_matrix(Complex alpha, const NodeSet& nodes);
std::vector<Matrix> coefficient_matrices(const AlphaGrid& grid, const NodeSet& nodes);

/// kron(c, ones(block, block)): the node-indexed coefficients laid out for
/// block matrices.
Matrix expand_blocks(const Matrix& c, int block);

/// min eigenvalue of C_alpha o K on every grid alpha.
AdmissibilityReport admissibility_check(const KernelMatrix& k, const AlphaGrid& grid,
                                        double tol = 1e-9);

/// Searches around report.worst_alpha off the grid (golden-section on the
/// circle plus radial probes) and returns the most negative (alpha, min eig).
std::pair<Complex, double> refine_worst_alpha(const KernelMatrix& k,
                                              const AdmissibilityReport& report);

KernelMatrix make_b_kernel(Complex alpha, const NodeSet& nodes, int block = 1);
KernelMatrix make_d_kernel(Complex alpha, const NodeSet& nodes, const std::vector<Vector>& u);

/// Seeded random PSD start, cyclic projections onto {PSD}, {diag >= 1} and
/// each {C_alpha o K PSD}, finished by the smallest identity shift that makes
/// every grid constraint hold.
KernelMatrix random_admissible_kernel(const NodeSet& nodes, const AlphaGrid& grid,
                                      std::uint64_t seed, int iters = 50, int block = 1);

/// Adds the smallest t * I making C_alpha o K PSD on the whole grid. The
/// identity kernel is strictly admissible, so this always succeeds.
void shift_to_admissible(Matrix& k, int block, const std::vector<Matrix>& coeffs);

/// G(i,j) = K_ij / sqrt(K_ii K_jj); block kernels use K_ii^{-1/2} K_ij K_jj^{-1/2}.
Matrix grammian_normalize(const KernelMatrix& k);

}  // namespace sympick
