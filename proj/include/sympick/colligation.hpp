#pragma once

// Unitary colligations V = [[A, B], [C, D]] over an atomic representation
// pi(h) = blockdiag(h(alpha_m) I_{mult_m}) and their transfer functions
//
//   f(s, p) = A + B pi(phi(., s, p)) (I - D pi(phi(., s, p)))^{-1} C.

#include <cstdint>
#include <vector>

#include "sympick/cp_feasibility.hpp"
#include "sympick/geometry.hpp"
#include "sympick/kernel_lab.hpp"
#include "sympick/types.hpp"

namespace sympick {

struct Colligation {
  Matrix a, b, c, d;
  AlphaGrid grid;
  std::vector<int> multiplicities;
  /// Extra state dimensions added during completion (always 0 here).
  int padding = 0;

  [[nodiscard]] Eigen::Index state_dim() const { return d.rows(); }
  [[nodiscard]] Eigen::Index out_dim() const { return a.rows(); }
  [[nodiscard]] Eigen::Index in_dim() const { return a.cols(); }
  /// alpha of every state coordinate, in order.
  [[nodiscard]] std::vector<Complex> state_alphas() const;
  [[nodiscard]] Matrix full() const;
  /// ||V^* V - I||_F.
  [[nodiscard]] double unitarity_defect() const;
  /// Validates shapes and multiplicities.
  void validate() const;
};

/// gain * (top-left out x in corner of the transfer function).
struct RealizedFunction {
  Colligation colligation;
  Eigen::Index out = 0;
  Eigen::Index in = 0;
  double gain = 1.0;
};

RealizedFunction make_realized(Colligation col, double gain = 1.0);

/// Colligation whose realized function is the constant c (external space C^2,
/// no state).
RealizedFunction constant_function(Complex c);

/// phi(alpha0, .) realized with A = 0, B = C = 1, D = 0.
RealizedFunction coordinate_function(Complex alpha0);

/// blockdiag(phi(alpha_m, point) I_{mult_m}).
Matrix representation(const Colligation& col, const GPoint& point);

/// Builds V with V [Phi_i^*; pi_i^* L(i)] = [Theta_i^*; L(i)] from a CP
/// identity Phi_i Phi_j^* - Theta_i Theta_j^* = sum_m C_m o B_m, where
/// B_m = L_m^* L_m, and returns the colligation in transfer form (V^*), so
/// that Psi(l_i) = A + B pi_i (I - D pi_i)^{-1} C satisfies Phi_i Psi(l_i) = Theta_i.
/// Phi_i is d x da, Theta_i is d x db; the realized function is da x db.
RealizedFunction lurking_isometry(const CPBlocks& blocks, const NodeSet& nodes, const std::vector<Matrix>& phi,
                                  const std::vector<Matrix>& theta, double tol = 1e-8);

struct EvalResult {
  Matrix value;
  /// Reciprocal condition estimate of I - D pi.
  double rcond = 1.0;
  bool near_boundary = false;
};

EvalResult transfer_eval_checked(const RealizedFunction& fn, const GPoint& point);
Matrix transfer_eval(const RealizedFunction& fn, const GPoint& point);

/// Seeded sample of G: symmetrize(z1, z2) with z uniform on the unit disk.
std::vector<GPoint> sample_points(int count, std::uint64_t seed);

/// Max operator norm of transfer_eval over `sample_count` seeded points.
double verify_contractivity(const RealizedFunction& fn, int sample_count, std::uint64_t seed);

}  // namespace sympick
