#pragma once

// Points of the symmetrized bidisk G = {(z1 + z2, z1 z2) : |z1|, |z2| < 1}
// and the parametrized coordinate functions phi(alpha, s, p).

#include <string>

#include "sympick/types.hpp"

namespace sympick {

/// A point (s, p) of G. Construction does not certify membership; operations
/// that need it call require_member().
struct GPoint {
  Complex s{0.0, 0.0};
  Complex p{0.0, 0.0};

  friend bool operator==(const GPoint&, const GPoint&) = default;
};

/// A point of the distinguished boundary bGamma: |p| = 1, s = conj(s) p, |s| <= 2.
struct BGammaPoint {
  Complex s{0.0, 0.0};
  Complex p{1.0, 0.0};

  /// Validates the three bGamma conditions to `tol`.
  static BGammaPoint checked(Complex s, Complex p, double tol = 1e-10);
  /// (e^{i a} + e^{i b}, e^{i(a+b)}).
  static BGammaPoint from_angles(double a, double b);
};

struct MembershipReport {
  bool is_member = false;
  /// Within tol of the unit circle: the closed-set reading would accept it.
  bool boundary = false;
  double sup_modulus = 0.0;
  Complex argmax_alpha{1.0, 0.0};
  double tolerance = 1e-10;
  std::string reason;
};

inline constexpr int kDefaultCircleGrid = 4096;
inline constexpr double kDefaultMembershipTol = 1e-10;

GPoint symmetrize(Complex z1, Complex z2);

/// phi(alpha, s, p) = (2 alpha p - s) / (2 - alpha s).
Complex phi(Complex alpha, const GPoint& point);

/// sup over |alpha| = 1 of |phi(alpha, s, p)|, by circle grid plus
/// golden-section refinement around the grid argmax.
MembershipReport membership(Complex s, Complex p, int grid_size = kDefaultCircleGrid,
                            double tol = kDefaultMembershipTol);
inline MembershipReport membership(const GPoint& x, int grid_size = kDefaultCircleGrid,
                                   double tol = kDefaultMembershipTol) {
  return membership(x.s, x.p, grid_size, tol);
}

/// Throws InputError unless `x` is a member of G.
void require_member(const GPoint& x, const std::string& what = "point");

/// (r s, r^2 p). Accepts points of the closed set (|s| <= 2) and 0 <= r < 1.
GPoint scale_point(const GPoint& x, double r);

/// Pseudo-hyperbolic distance |z - w| / |1 - conj(w) z| on the disk.
double pseudo_hyperbolic(Complex z, Complex w);

/// max over the alpha circle of the pseudo-hyperbolic distance between
/// phi(alpha, a) and phi(alpha, b).
double caratheodory_two_point(const GPoint& a, const GPoint& b,
                              int grid_size = kDefaultCircleGrid);

}  // namespace sympick
