#include "sympick/colligation.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/LU>

#include "sympick/hermitian.hpp"
#include "sympick/kernels.hpp"
#include "sympick/random.hpp"

namespace sympick {

std::vector<Complex> Colligation::state_alphas() const {
  std::vector<Complex> out;
  for (std::size_t m = 0; m < multiplicities.size(); ++m)
    for (int k = 0; k < multiplicities[m]; ++k) out.push_back(grid.alphas[m]);
  return out;
}

Matrix Colligation::full() const {
  const Eigen::Index e = a.rows();
  const Eigen::Index h = d.rows();
  Matrix v(e + h, a.cols() + h);
  v.topLeftCorner(e, a.cols()) = a;
  v.topRightCorner(e, h) = b;
  v.bottomLeftCorner(h, a.cols()) = c;
  v.bottomRightCorner(h, h) = d;
  return v;
}

double Colligation::unitarity_defect() const {
  const Matrix v = full();
  return (v.adjoint() * v - Matrix::Identity(v.cols(), v.cols())).norm();
}

void Colligation::validate() const {
  const Eigen::Index h = d.rows();
  require(d.cols() == h, "colligation: D must be square");
  require(b.rows() == a.rows() && b.cols() == h, "colligation: B has the wrong shape");
  require(c.rows() == h && c.cols() == a.cols(), "colligation: C has the wrong shape");
  require(multiplicities.size() == grid.alphas.size(), "colligation: one multiplicity per grid point");
  long total = 0;
  for (int m : multiplicities) {
    require(m >= 0, "colligation: negative multiplicity");
    total += m;
  }
  require(total == h, "colligation: multiplicities must add up to the state dimension");
}

RealizedFunction make_realized(Colligation col, double gain) {
  col.validate();
  RealizedFunction f;
  f.out = col.out_dim();
  f.in = col.in_dim();
  f.gain = gain;
  f.colligation = std::move(col);
  return f;
}

RealizedFunction constant_function(Complex c) {
  require(std::abs(c) <= 1.0, "constant_function: |c| must be <= 1");
  const double r = std::sqrt(std::max(0.0, 1.0 - std::norm(c)));
  Colligation col;
  col.a = Matrix(2, 2);
  col.a << c, r, r, -std::conj(c);
  col.b = Matrix(2, 0);
  col.c = Matrix(0, 2);
  col.d = Matrix(0, 0);
  col.grid = AlphaGrid::from_alphas({Complex(0.0, 0.0)});
  col.multiplicities = {0};
  RealizedFunction f = make_realized(std::move(col));
  f.out = 1;
  f.in = 1;
  return f;
}

RealizedFunction coordinate_function(Complex alpha0) {
  Colligation col;
  col.a = Matrix::Zero(1, 1);
  col.b = Matrix::Ones(1, 1);
  col.c = Matrix::Ones(1, 1);
  col.d = Matrix::Zero(1, 1);
  col.grid = AlphaGrid::from_alphas({alpha0});
  col.multiplicities = {1};
  return make_realized(std::move(col));
}

Matrix representation(const Colligation& col, const GPoint& point) {
  const std::vector<Complex> alphas = col.state_alphas();
  Vector diag(static_cast<Eigen::Index>(alphas.size()));
  for (std::size_t k = 0; k < alphas.size(); ++k) diag(static_cast<Eigen::Index>(k)) = phi(alphas[k], point);
  return diag.asDiagonal();
}

RealizedFunction lurking_isometry(const CPBlocks& blocks, const NodeSet& nodes, const std::vector<Matrix>& phi_i,
                                  const std::vector<Matrix>& theta_i, double tol) {
  const int n = nodes.size();
  const int d = blocks.block;
  require(n >= 1, "lurking_isometry: empty node set");
  require(static_cast<int>(phi_i.size()) == n && static_cast<int>(theta_i.size()) == n,
          "lurking_isometry: one Phi and one Theta per node");
  require(blocks.blocks.size() == blocks.grid.alphas.size(), "lurking_isometry: one block per grid point");
  const Eigen::Index da = phi_i.front().cols();
  const Eigen::Index db = theta_i.front().cols();
  for (int i = 0; i < n; ++i) {
    require(phi_i[static_cast<std::size_t>(i)].rows() == d && phi_i[static_cast<std::size_t>(i)].cols() == da,
            "lurking_isometry: Phi shape mismatch");
    require(theta_i[static_cast<std::size_t>(i)].rows() == d && theta_i[static_cast<std::size_t>(i)].cols() == db,
            "lurking_isometry: Theta shape mismatch");
  }

  // Check the identity the isometry is built from.
  Matrix j(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      j.block(i * d, k * d, d, d) =
          phi_i[static_cast<std::size_t>(i)] * phi_i[static_cast<std::size_t>(k)].adjoint() -
          theta_i[static_cast<std::size_t>(i)] * theta_i[static_cast<std::size_t>(k)].adjoint();
  const FeasibilityTarget target(nodes, j, d);
  const std::vector<Matrix> coeffs = expanded_coefficients(target, blocks.grid);
  Matrix rep = Matrix::Zero(n * d, n * d);
  for (std::size_t m = 0; m < coeffs.size(); ++m) rep += coeffs[m].cwiseProduct(blocks.blocks[m]);
  const double mismatch = (rep - target.j).norm();
  if (mismatch > tol * std::max(1.0, target.j.norm()))
    throw NumericalError("CP residual too large for synthesis (mismatch " + std::to_string(mismatch) + ")");

  std::vector<Matrix> factors;
  std::vector<int> mult;
  Eigen::Index h = 0;
  for (const Matrix& b : blocks.blocks) {
    // Solver blocks can carry round-off negative eigenvalues; clip them first.
    Matrix g = (b.size() == 0 || b.norm() == 0.0) ? Matrix(0, n * d)
                                                  : gram_factor(psd_project(HermitianMatrix(b)), 1e-12);
    mult.push_back(static_cast<int>(g.rows()));
    h += g.rows();
    factors.push_back(std::move(g));
  }

  const Eigen::Index e = std::max(da, db);
  Matrix x = Matrix::Zero(e + h, n * d);
  Matrix y = Matrix::Zero(e + h, n * d);
  for (int i = 0; i < n; ++i) {
    x.block(0, i * d, da, d) = phi_i[static_cast<std::size_t>(i)].adjoint();
    y.block(0, i * d, db, d) = theta_i[static_cast<std::size_t>(i)].adjoint();
    Eigen::Index row = e;
    for (std::size_t m = 0; m < factors.size(); ++m) {
      const Eigen::Index r = factors[m].rows();
      if (r == 0) continue;
      const Matrix li = factors[m].block(0, i * d, r, d);
      const Complex f = phi(blocks.grid.alphas[m], nodes[i]);
      x.block(row, i * d, r, d) = std::conj(f) * li;
      y.block(row, i * d, r, d) = li;
      row += r;
    }
  }

  const Matrix v1 = unitary_completion(x, y, std::max(tol, 1e-8));
  const Matrix v = v1.adjoint();
  Colligation col;
  col.a = v.topLeftCorner(e, e);
  col.b = v.topRightCorner(e, h);
  col.c = v.bottomLeftCorner(h, e);
  col.d = v.bottomRightCorner(h, h);
  col.grid = blocks.grid;
  col.multiplicities = std::move(mult);
  RealizedFunction fn = make_realized(std::move(col));
  fn.out = da;
  fn.in = db;
  return fn;
}

EvalResult transfer_eval_checked(const RealizedFunction& fn, const GPoint& point) {
  const Colligation& col = fn.colligation;
  EvalResult r;
  const Eigen::Index h = col.state_dim();
  Matrix f;
  if (h == 0) {
    f = col.a;
  } else {
    const std::vector<Complex> alphas = col.state_alphas();
    Vector pi(h);
    for (Eigen::Index k = 0; k < h; ++k) pi(k) = phi(alphas[static_cast<std::size_t>(k)], point);
    const Matrix m = Matrix::Identity(h, h) - col.d * pi.asDiagonal();
    Eigen::PartialPivLU<Matrix> lu(m);
    r.rcond = lu.rcond();
    r.near_boundary = r.rcond < 1e-12;
    f = col.a + col.b * pi.asDiagonal() * lu.solve(col.c);
  }
  r.value = fn.gain * f.topLeftCorner(fn.out, fn.in);
  return r;
}

Matrix transfer_eval(const RealizedFunction& fn, const GPoint& point) { return transfer_eval_checked(fn, point).value; }

std::vector<GPoint> sample_points(int count, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<GPoint> pts;
  pts.reserve(static_cast<std::size_t>(std::max(0, count)));
  for (int i = 0; i < count; ++i) {
    const Complex z1 = random_disk_point(rng);
    const Complex z2 = random_disk_point(rng);
    pts.push_back(symmetrize(z1, z2));
  }
  return pts;
}

double verify_contractivity(const RealizedFunction& fn, int sample_count, std::uint64_t seed) {
  const std::vector<GPoint> pts = sample_points(sample_count, seed);
  const std::vector<double> norms = kernels::map_indexed(sample_count, [&](int i) {
    const Matrix v = transfer_eval(fn, pts[static_cast<std::size_t>(i)]);
    return v.size() == 1 ? std::abs(v(0, 0)) : spectral_norm(v);
  });
  double best = 0.0;
  for (double v : norms) best = std::max(best, v);
  return best;
}

}  // namespace sympick
