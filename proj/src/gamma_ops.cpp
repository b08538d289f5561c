#include "sympick/gamma_ops.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include <Eigen/Eigenvalues>

#include "sympick/hermitian.hpp"
#include "sympick/random.hpp"

namespace sympick {

double OperatorPair::commutator() const { return (first * second - second * first).norm(); }

namespace {

void require_commuting(const OperatorPair& pair) {
  require(pair.first.rows() == pair.first.cols() && pair.second.rows() == pair.second.cols(),
          "operator pair must be square");
  require(pair.first.rows() == pair.second.rows(), "operator pair dimensions differ");
  require(all_finite(pair.first) && all_finite(pair.second), "operator pair has non-finite entries");
  const double scale = std::max(1.0, pair.first.norm() * pair.second.norm());
  require(pair.commutator() <= 1e-10 * scale, "operator pair does not commute");
}

GammaCheck boundary_check(const OperatorPair& pair, double tol, const char* second_role) {
  require_commuting(pair);
  const Eigen::Index n = pair.dim();
  GammaCheck c;
  c.commutator = pair.commutator();
  c.isometry_defect = spectral_norm(pair.second.adjoint() * pair.second - Matrix::Identity(n, n));
  c.symmetry_defect = spectral_norm(pair.first - pair.first.adjoint() * pair.second);
  c.norm = spectral_norm(pair.first);
  if (c.isometry_defect > tol)
    c.reason = std::string(second_role) + " is not isometric";
  else if (c.symmetry_defect > tol)
    c.reason = "first != first^* second";
  else if (c.norm > 2.0 + tol)
    c.reason = "norm of first exceeds 2";
  c.passed = c.reason.empty();
  return c;
}

bool is_unitary(const Matrix& u, double tol) {
  return u.rows() == u.cols() && spectral_norm(u.adjoint() * u - Matrix::Identity(u.rows(), u.cols())) <= tol;
}

}  // namespace

GammaCheck gamma_unitary_check(const OperatorPair& pair, double tol) { return boundary_check(pair, tol, "U"); }

GammaCheck gamma_isometry_check(const OperatorPair& pair, double tol) { return boundary_check(pair, tol, "V"); }

OperatorPair symmetrized_pair(const Matrix& u1, const Matrix& u2) {
  require(u1.rows() == u2.rows() && u1.cols() == u2.cols(), "symmetrized_pair: shapes differ");
  require(is_unitary(u1, 1e-10) && is_unitary(u2, 1e-10), "symmetrized_pair: inputs must be unitary");
  require((u1 * u2 - u2 * u1).norm() <= 1e-10 * std::max<double>(1.0, static_cast<double>(u1.rows())),
          "symmetrized_pair: inputs must commute");
  return {u1 + u2, u1 * u2};
}

std::pair<Matrix, Matrix> factor_gamma_unitary(const OperatorPair& pair, double tol) {
  const GammaCheck check = gamma_unitary_check(pair, tol);
  require(check.passed, "factor_gamma_unitary: not a Gamma-unitary (" + check.reason + ")");
  const Eigen::Index n = pair.dim();
  // A generic combination of a commuting normal pair has a diagonal Schur form
  // whose basis diagonalizes both members.
  const Complex beta(0.5772156649, 0.3183098862);
  Eigen::ComplexSchur<Matrix> schur(pair.first + beta * pair.second);
  const Matrix q = schur.matrixU();
  const Matrix r = q.adjoint() * pair.first * q;
  const Matrix u = q.adjoint() * pair.second * q;
  const double off = (r - Matrix(r.diagonal().asDiagonal())).norm() + (u - Matrix(u.diagonal().asDiagonal())).norm();
  if (off > 1e-6 * std::max(1.0, r.norm()))
    throw NumericalError("factor_gamma_unitary: joint diagonalization failed");
  Vector z1(n), z2(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const Complex disc = std::sqrt(r(k, k) * r(k, k) - 4.0 * u(k, k));
    Complex a = 0.5 * (r(k, k) + disc);
    Complex b = 0.5 * (r(k, k) - disc);
    if (b.imag() > a.imag() || (b.imag() == a.imag() && b.real() > a.real())) std::swap(a, b);
    z1(k) = a / std::abs(a);
    z2(k) = b / std::abs(b);
  }
  return {q * z1.asDiagonal() * q.adjoint(), q * z2.asDiagonal() * q.adjoint()};
}

void AtomicMeasure::validate() const {
  require(!atoms.empty(), "atomic measure needs at least one atom");
  require(weights.size() == atoms.size(), "atomic measure: one weight per atom");
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    require(weights[k] > 0.0 && std::isfinite(weights[k]), "atomic measure weights must be positive");
    BGammaPoint::checked(atoms[k].s, atoms[k].p, 1e-9);
    for (std::size_t j = 0; j < k; ++j)
      require(std::abs(atoms[k].s - atoms[j].s) + std::abs(atoms[k].p - atoms[j].p) > 1e-12,
              "atomic measure has duplicate atoms");
  }
}

AtomicModel atomic_h2_model(const AtomicMeasure& mu) {
  mu.validate();
  const auto m = static_cast<Eigen::Index>(mu.atoms.size());
  Vector s(m), p(m), one(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    s(k) = mu.atoms[static_cast<std::size_t>(k)].s;
    p(k) = mu.atoms[static_cast<std::size_t>(k)].p;
    one(k) = std::sqrt(mu.weights[static_cast<std::size_t>(k)]);
  }
  AtomicModel model;
  model.pair = {Matrix(s.asDiagonal()), Matrix(p.asDiagonal())};
  model.cyclic_vector = one;
  model.krylov_rank = krylov_rank(model.pair, one, static_cast<int>(m));
  if (model.krylov_rank != m) throw InputError("atomic measure: polynomials do not separate the atoms");
  return model;
}

int krylov_rank(const OperatorPair& pair, const Vector& x, int degree) {
  require(x.size() == pair.dim(), "krylov_rank: vector size mismatch");
  const Eigen::Index n = pair.dim();
  const double x_norm = x.norm();
  if (x_norm == 0.0 || n == 0) return 0;
  std::vector<Vector> basis{x / x_norm};
  std::vector<Vector> frontier{basis.front()};
  for (int level = 0; level < degree && static_cast<Eigen::Index>(basis.size()) < n; ++level) {
    std::vector<Vector> next;
    for (const Vector& v : frontier) {
      for (const Matrix* op : {&pair.first, &pair.second}) {
        Vector w = (*op) * v;
        const double scale = w.norm();
        if (scale == 0.0) continue;
        for (int pass = 0; pass < 2; ++pass)
          for (const Vector& b : basis) w -= b.dot(w) * b;
        if (w.norm() > 1e-10 * scale) {
          w.normalize();
          basis.push_back(w);
          next.push_back(w);
        }
      }
    }
    if (next.empty()) break;
    frontier = std::move(next);
  }
  return static_cast<int>(basis.size());
}

PositivityResult toeplitz_positivity(const std::vector<Matrix>& phi_at_scaled_atoms, const AtomicMeasure& mu,
                                     double delta, double r, double tol) {
  mu.validate();
  require(r > 0.0 && r < 1.0, "toeplitz_positivity: r must lie in (0, 1)");
  require(phi_at_scaled_atoms.size() == mu.atoms.size(), "toeplitz_positivity: one Phi value per atom");
  PositivityResult out;
  out.min_eig = std::numeric_limits<double>::infinity();
  for (const Matrix& f : phi_at_scaled_atoms) {
    require(f.rows() == phi_at_scaled_atoms.front().rows() && f.cols() == phi_at_scaled_atoms.front().cols(),
            "toeplitz_positivity: Phi values must share one shape");
    out.min_eig = std::min(out.min_eig, min_eigenvalue(f * f.adjoint()) - delta);
  }
  out.positive = out.min_eig >= -tol;
  return out;
}

PositivityResult toeplitz_positivity(const std::function<Matrix(const GPoint&)>& phi_fn, const AtomicMeasure& mu,
                                     double delta, double r, double tol) {
  require(r > 0.0 && r < 1.0, "toeplitz_positivity: r must lie in (0, 1)");
  std::vector<Matrix> values;
  for (const BGammaPoint& a : mu.atoms) values.push_back(phi_fn(scale_point(GPoint{a.s, a.p}, r)));
  return toeplitz_positivity(values, mu, delta, r, tol);
}

Complex eval_polynomial(const Matrix& coeff, Complex s, Complex p) { return kernels::eval_poly(coeff, s, p); }

Matrix eval_polynomial(const Matrix& coeff, const OperatorPair& pair) {
  const Eigen::Index n = pair.dim();
  Matrix acc = Matrix::Zero(n, n);
  Matrix s_pow = Matrix::Identity(n, n);
  for (Eigen::Index a = 0; a < coeff.rows(); ++a) {
    Matrix term = s_pow;
    for (Eigen::Index b = 0; b < coeff.cols(); ++b) {
      if (coeff(a, b) != Complex(0.0, 0.0)) acc += coeff(a, b) * term;
      term = (term * pair.second).eval();
    }
    s_pow = (s_pow * pair.first).eval();
  }
  return acc;
}

namespace {

int poly_degree(const Matrix& coeff) {
  int deg = 0;
  for (Eigen::Index a = 0; a < coeff.rows(); ++a)
    for (Eigen::Index b = 0; b < coeff.cols(); ++b)
      if (coeff(a, b) != Complex(0.0, 0.0)) deg = std::max(deg, static_cast<int>(a + b));
  return deg;
}

double torus_value(const Matrix& coeff, double t1, double t2) {
  const Complex z1 = std::polar(1.0, t1);
  const Complex z2 = std::polar(1.0, t2);
  return std::abs(kernels::eval_poly(coeff, z1 + z2, z1 * z2));
}

// Golden-section maximization of f on [lo, hi].
template <class F>
std::pair<double, double> golden_max(F f, double lo, double hi) {
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = hi - g * (hi - lo);
  double d = lo + g * (hi - lo);
  double fc = f(c);
  double fd = f(d);
  while (hi - lo > 1e-12) {
    if (fc > fd) {
      hi = d;
      d = c;
      fd = fc;
      c = hi - g * (hi - lo);
      fc = f(c);
    } else {
      lo = c;
      c = d;
      fc = fd;
      d = lo + g * (hi - lo);
      fd = f(d);
    }
  }
  const double t = 0.5 * (lo + hi);
  return {t, f(t)};
}

}  // namespace

SupEstimate sup_over_gamma(const Matrix& coeff, int samples, std::uint64_t seed, int torus_grid,
                           kernels::Exec exec) {
  require(torus_grid >= 8, "sup_over_gamma: torus grid too small");
  SupEstimate est;
  Rng rng(seed);
  for (int i = 0; i < samples; ++i) {
    const Complex z1 = random_disk_point(rng);
    const Complex z2 = random_disk_point(rng);
    est.lower = std::max(est.lower, std::abs(kernels::eval_poly(coeff, z1 + z2, z1 * z2)));
  }
  const double edge = 1.0 - 1e-6;
  for (int i = 0; i < samples / 4; ++i) {
    const Complex z1 = edge * random_unimodular(rng);
    const Complex z2 = edge * random_unimodular(rng);
    est.lower = std::max(est.lower, std::abs(kernels::eval_poly(coeff, z1 + z2, z1 * z2)));
  }

  const std::vector<kernels::RowMax> rows = kernels::torus_row_maxima(coeff, torus_grid, exec);
  const double h = 2.0 * std::numbers::pi / torus_grid;
  double grid_max = 0.0;
  std::vector<int> order(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    order[r] = static_cast<int>(r);
    grid_max = std::max(grid_max, rows[r].value);
  }
  est.lower = std::max(est.lower, grid_max);
  const std::size_t seeds = std::min<std::size_t>(4, rows.size());
  std::partial_sort(order.begin(), order.begin() + static_cast<long>(seeds), order.end(),
                    [&](int a, int b) { return rows[static_cast<std::size_t>(a)].value > rows[static_cast<std::size_t>(b)].value; });
  for (std::size_t k = 0; k < seeds; ++k) {
    double t1 = order[k] * h;
    double t2 = rows[static_cast<std::size_t>(order[k])].col * h;
    for (int round = 0; round < 4; ++round) {
      t1 = golden_max([&](double t) { return torus_value(coeff, t, t2); }, t1 - h, t1 + h).first;
      t2 = golden_max([&](double t) { return torus_value(coeff, t1, t); }, t2 - h, t2 + h).first;
    }
    est.lower = std::max(est.lower, torus_value(coeff, t1, t2));
  }

  // |xi - xi(grid)| <= (h/2)(deg_1 + deg_2) max|xi| by Bernstein's inequality
  // in each angle; each angle degree is at most the total degree.
  const double slack = h * poly_degree(coeff);
  est.upper = slack < 1.0 ? grid_max / (1.0 - slack) : std::numeric_limits<double>::infinity();
  est.upper = std::max(est.upper, est.lower);
  return est;
}

namespace {

struct Ratios {
  double lower_ratio;
  double certified_ratio;
};

Ratios ratios_for(const OperatorPair& pair, const Matrix& coeff, int sup_samples, std::uint64_t seed,
                  kernels::Exec exec) {
  const Matrix value = eval_polynomial(coeff, pair);
  const double norm = value.size() == 1 ? std::abs(value(0, 0)) : spectral_norm(value);
  const SupEstimate sup = sup_over_gamma(coeff, sup_samples, seed, 512, exec);
  if (sup.lower == 0.0) {
    const double r = norm == 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
    return {r, r};
  }
  return {norm / sup.lower, norm / sup.upper};
}

}  // namespace

SpectralProbeReport spectral_set_probe(const OperatorPair& pair, const Matrix& coeff, double tol, int sup_samples,
                                       std::uint64_t seed) {
  require_commuting(pair);
  const Ratios r = ratios_for(pair, coeff, sup_samples, seed, kernels::default_exec());
  SpectralProbeReport rep;
  rep.max_ratio = r.lower_ratio;
  rep.max_certified_ratio = r.certified_ratio;
  rep.not_gamma_contraction = r.certified_ratio > 1.0 + tol;
  rep.worst_polynomial = 0;
  rep.polynomials = 1;
  return rep;
}

SpectralProbeReport spectral_set_probe(const OperatorPair& pair, int degree, int sample_count, std::uint64_t seed,
                                       double tol, int sup_samples) {
  require_commuting(pair);
  require(degree >= 0 && sample_count >= 0, "spectral_set_probe: degree and count must be non-negative");
  Rng rng(seed);
  std::vector<Matrix> polys;
  for (int k = 0; k < sample_count; ++k) {
    Matrix c = Matrix::Zero(degree + 1, degree + 1);
    for (int a = 0; a <= degree; ++a)
      for (int b = 0; a + b <= degree; ++b) c(a, b) = random_normal_complex(rng);
    polys.push_back(std::move(c));
  }
  std::vector<Ratios> out(polys.size());
  kernels::map_indexed(sample_count, [&](int k) {
    out[static_cast<std::size_t>(k)] =
        ratios_for(pair, polys[static_cast<std::size_t>(k)], sup_samples, seed + 1 + static_cast<std::uint64_t>(k),
                   kernels::Exec::Serial);
    return 0.0;
  });
  SpectralProbeReport rep;
  rep.polynomials = sample_count;
  for (int k = 0; k < sample_count; ++k) {
    const Ratios& r = out[static_cast<std::size_t>(k)];
    if (r.lower_ratio > rep.max_ratio) {
      rep.max_ratio = r.lower_ratio;
      rep.worst_polynomial = k;
    }
    rep.max_certified_ratio = std::max(rep.max_certified_ratio, r.certified_ratio);
  }
  rep.not_gamma_contraction = rep.max_certified_ratio > 1.0 + tol;
  return rep;
}

}  // namespace sympick
