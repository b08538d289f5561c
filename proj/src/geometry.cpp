#include "sympick/geometry.hpp"

#include <cmath>
#include <functional>
#include <limits>
#include <numbers>

namespace sympick {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kDenominatorFloor = 1e-300;

// phi without the exception: NaN when the denominator vanishes.
Complex phi_or_nan(Complex alpha, Complex s, Complex p) {
  const Complex den = 2.0 - alpha * s;
  if (std::abs(den) < kDenominatorFloor) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    return {nan, nan};
  }
  return (2.0 * alpha * p - s) / den;
}

struct CircleMax {
  double value = -std::numeric_limits<double>::infinity();
  double theta = 0.0;
};

// Grid maximum of f over [0, 2 pi), then golden-section on the bracket of
// neighbouring grid nodes. Non-finite samples are skipped.
CircleMax maximize_on_circle(const std::function<double(double)>& f, int grid_size) {
  CircleMax best;
  const double h = kTwoPi / grid_size;
  for (int k = 0; k < grid_size; ++k) {
    const double t = k * h;
    const double v = f(t);
    if (std::isfinite(v) && v > best.value) {
      best.value = v;
      best.theta = t;
    }
  }
  if (!std::isfinite(best.value)) return best;

  const double inv_phi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = best.theta - h;
  double b = best.theta + h;
  double c = b - inv_phi * (b - a);
  double d = a + inv_phi * (b - a);
  double fc = f(c);
  double fd = f(d);
  while (b - a > 1e-12) {
    if (!(fd >= fc)) {  // NaN-safe: a NaN at d moves the bracket away from it
      b = d;
      d = c;
      fd = fc;
      c = b - inv_phi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + inv_phi * (b - a);
      fd = f(d);
    }
  }
  const double t = 0.5 * (a + b);
  const double v = f(t);
  if (std::isfinite(v) && v > best.value) {
    best.value = v;
    best.theta = t;
  }
  return best;
}

}  // namespace

BGammaPoint BGammaPoint::checked(Complex s, Complex p, double tol) {
  require(std::abs(std::abs(p) - 1.0) <= tol, "bGamma point needs |p| = 1");
  require(std::abs(s - std::conj(s) * p) <= tol, "bGamma point needs s = conj(s) p");
  require(std::abs(s) <= 2.0 + tol, "bGamma point needs |s| <= 2");
  return {s, p};
}

BGammaPoint BGammaPoint::from_angles(double a, double b) {
  const Complex z1 = std::polar(1.0, a);
  const Complex z2 = std::polar(1.0, b);
  return {z1 + z2, z1 * z2};
}

GPoint symmetrize(Complex z1, Complex z2) {
  require(std::abs(z1) < 1.0 && std::abs(z2) < 1.0,
          "symmetrize needs |z1| < 1 and |z2| < 1");
  return {z1 + z2, z1 * z2};
}

Complex phi(Complex alpha, const GPoint& point) {
  const Complex den = 2.0 - alpha * point.s;
  if (std::abs(den) < kDenominatorFloor) {
    throw NumericalError("phi: vanishing denominator 2 - alpha s (corrupted input)");
  }
  return (2.0 * alpha * point.p - point.s) / den;
}

MembershipReport membership(Complex s, Complex p, int grid_size, double tol) {
  require(grid_size >= 16, "membership needs grid_size >= 16");
  require(std::isfinite(s.real()) && std::isfinite(s.imag()) && std::isfinite(p.real()) && std::isfinite(p.imag()),
          "membership needs finite coordinates");
  MembershipReport report;
  report.tolerance = tol;

  const auto modulus = [&](double t) {
    return std::abs(phi_or_nan(std::polar(1.0, t), s, p));
  };
  const CircleMax best = maximize_on_circle(modulus, grid_size);
  report.sup_modulus = std::isfinite(best.value) ? best.value : 0.0;
  report.argmax_alpha = std::polar(1.0, best.theta);

  if (std::abs(s) >= 2.0) {
    report.is_member = false;
    report.boundary = std::abs(report.sup_modulus - 1.0) <= tol;
    report.reason = "s out of range";
    return report;
  }
  report.is_member = report.sup_modulus < 1.0 - tol;
  report.boundary = std::abs(report.sup_modulus - 1.0) <= tol;
  if (!report.is_member) {
    report.reason = report.boundary ? "on the boundary band" : "sup |phi| >= 1";
  }
  return report;
}

void require_member(const GPoint& x, const std::string& what) {
  const MembershipReport r = membership(x);
  if (!r.is_member) {
    throw InputError(what + " is not in the symmetrized bidisk (" + r.reason + ")");
  }
}

GPoint scale_point(const GPoint& x, double r) {
  require(r >= 0.0 && r < 1.0, "scale_point needs 0 <= r < 1");
  require(std::abs(x.s) <= 2.0, "scale_point needs |s| <= 2");
  return {r * x.s, r * r * x.p};
}

double pseudo_hyperbolic(Complex z, Complex w) {
  const double den = std::abs(1.0 - std::conj(w) * z);
  if (den == 0.0) return 1.0;
  return std::abs(z - w) / den;
}

double caratheodory_two_point(const GPoint& a, const GPoint& b, int grid_size) {
  require_member(a, "caratheodory_two_point: first point");
  require_member(b, "caratheodory_two_point: second point");
  if (a == b) return 0.0;
  const auto distance = [&](double t) {
    const Complex alpha = std::polar(1.0, t);
    return pseudo_hyperbolic(phi(alpha, a), phi(alpha, b));
  };
  return maximize_on_circle(distance, grid_size).value;
}

}  // namespace sympick
