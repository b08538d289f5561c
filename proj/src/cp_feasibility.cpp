#include "sympick/cp_feasibility.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>

#include <Eigen/LU>

#include "sympick/hermitian.hpp"

namespace sympick {

std::string to_string(SolveStatus s) {
  switch (s) {
    case SolveStatus::Feasible: return "Feasible";
    case SolveStatus::InfeasibleCertified: return "InfeasibleCertified";
    case SolveStatus::Unknown: return "Unknown";
  }
  return "Unknown";
}

SolveStatus solve_status_from_string(const std::string& s) {
  if (s == "Feasible") return SolveStatus::Feasible;
  if (s == "InfeasibleCertified") return SolveStatus::InfeasibleCertified;
  if (s == "Unknown") return SolveStatus::Unknown;
  throw InputError("unknown solve status '" + s + "'");
}

FeasibilityTarget::FeasibilityTarget(NodeSet nodes_in, Matrix j_in, int block_in)
    : nodes(std::move(nodes_in)), block(block_in), j(std::move(j_in)) {
  require(block >= 1, "target block size must be positive");
  require(j.rows() == j.cols(), "target J must be square");
  require(j.rows() == static_cast<Eigen::Index>(nodes.size()) * block, "target J size must be nodes x block");
  if (!all_finite(j)) throw NumericalError("target J has non-finite entries (overflow while assembling)");
  const double asym = (j - j.adjoint()).norm();
  require(asym <= 1e-9 * std::max(1.0, j.norm()), "target J is not self-adjoint");
  j = 0.5 * (j + j.adjoint()).eval();
}

std::vector<Matrix> expanded_coefficients(const FeasibilityTarget& target, const AlphaGrid& grid) {
  std::vector<Matrix> out;
  out.reserve(grid.alphas.size());
  for (const Matrix& c : coefficient_matrices(grid, target.nodes)) out.push_back(expand_blocks(c, target.block));
  return out;
}

double residual(const FeasibilityTarget& target, const CPBlocks& blocks) {
  require(blocks.blocks.size() == blocks.grid.alphas.size(), "residual: one block per grid point required");
  const std::vector<Matrix> coeffs = expanded_coefficients(target, blocks.grid);
  Matrix acc = target.j;
  double negative = 0.0;
  for (std::size_t m = 0; m < coeffs.size(); ++m) {
    const Matrix& b = blocks.blocks[m];
    require(b.rows() == target.dim() && b.cols() == target.dim(), "residual: block shape mismatch");
    acc -= coeffs[m].cwiseProduct(b);
    negative += std::max(0.0, -min_eigenvalue(0.5 * (b + b.adjoint())));
  }
  return acc.norm() + negative;
}

double certificate_violation(const FeasibilityTarget& target, const KernelMatrix& k) {
  require(k.nodes.size() == target.nodes.size(), "certificate node count mismatch");
  if (target.block == 1 && k.block == 1) return min_eigenvalue(target.j.cwiseProduct(k.k));
  return min_eigenvalue(schur_oslash(target.j, target.block, k.k, k.block));
}

bool verify_certificate(const FeasibilityTarget& target, const KernelMatrix& k, const AlphaGrid& grid,
                        double tol) {
  if (!admissibility_check(k, grid, 1e-12).is_admissible_on_grid) return false;
  if (min_eigenvalue(k.k) < -1e-12) return false;
  return certificate_violation(target, k) <= -tol;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// Everything the iteration needs about the grid, computed once.
struct Problem {
  const FeasibilityTarget& target;
  const AlphaGrid& grid;
  std::vector<Matrix> coeffs;      // expanded, n x n each
  std::vector<Matrix> node_coeffs; // N x N each, plus the all-ones matrix last
  Eigen::MatrixXd weight_m;
};

Problem make_problem(const FeasibilityTarget& target, const AlphaGrid& grid) {
  Problem p{target, grid, {}, {}, {}};
  p.node_coeffs = coefficient_matrices(grid, target.nodes);
  for (std::size_t m = 0; m < p.node_coeffs.size(); ++m) {
    for (int i = 0; i < target.nodes.size(); ++i)
      if (!(p.node_coeffs[m](i, i).real() > 0.0))
        throw InputError("grid alpha " + std::to_string(m) + " gives |phi| >= 1 at node " + std::to_string(i));
    p.coeffs.push_back(expand_blocks(p.node_coeffs[m], target.block));
  }
  p.node_coeffs.push_back(Matrix::Ones(target.nodes.size(), target.nodes.size()));
  const Eigen::Index n = target.dim();
  p.weight_m = Eigen::MatrixXd::Zero(n, n);
  for (const Matrix& c : p.coeffs) p.weight_m += c.cwiseAbs2();
  return p;
}

// Orthogonal projection onto {sum_m C_m o X_m = J}. The constraint decouples
// by entry, so the correction is X_m = Y_m - conj(C_m) o Z with
// Z = (sum_m C_m o Y_m - J) ./ sum_m |C_m|^2. Returns S = sum_m C_m o Y_m - J.
Matrix affine_project(const Problem& p, const std::vector<Matrix>& y, std::vector<Matrix>& x, Matrix& z) {
  Matrix s = -p.target.j;
  for (std::size_t m = 0; m < y.size(); ++m) s += p.coeffs[m].cwiseProduct(y[m]);
  z = s.cwiseQuotient(p.weight_m.cast<Complex>());
  const int count = static_cast<int>(y.size());
#pragma omp parallel for schedule(static) if (count * z.size() > 20000)
  for (int m = 0; m < count; ++m) x[m] = y[m] - p.coeffs[m].conjugate().cwiseProduct(z);
  return s;
}

// Smallest identity shift making K PSD and every C_m o K PSD, then scaling to
// unit maximal diagonal.
void repair_certificate(const Problem& p, Matrix& k) {
  k = 0.5 * (k + k.adjoint()).eval();
  shift_to_admissible(k, p.target.block, p.node_coeffs);
  const double top = k.diagonal().real().maxCoeff();
  if (top > 0.0) k /= top;
}

double violation(const Problem& p, const Matrix& k) {
  const int d = p.target.block;
  if (d == 1) return min_eigenvalue(p.target.j.cwiseProduct(k));
  return min_eigenvalue(schur_oslash(p.target.j, d, k, d));
}

// d lambda_min(J (/) K) / dK for the unit eigenvector v of the minimum.
Matrix violation_gradient(const Problem& p, const Matrix& k, double& lambda) {
  const int d = p.target.block;
  const int n = p.target.nodes.size();
  if (d == 1) {
    auto [lam, v] = min_eigenpair(p.target.j.cwiseProduct(k));
    lambda = lam;
    return p.target.j.conjugate().cwiseProduct(v * v.adjoint());
  }
  auto [lam, v] = min_eigenpair(schur_oslash(p.target.j, d, k, d));
  lambda = lam;
  const Eigen::Index dd = static_cast<Eigen::Index>(d) * d;
  std::vector<Matrix> u(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    Matrix ui(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) ui(a, b) = v(i * dd + a * d + b);
    u[static_cast<std::size_t>(i)] = ui;
  }
  Matrix g(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j)
      g.block(i * d, j * d, d, d) =
          (u[static_cast<std::size_t>(i)].adjoint() * p.target.j.block(i * d, j * d, d, d) *
           u[static_cast<std::size_t>(j)])
              .conjugate();
  return g;
}

std::optional<KernelMatrix> probe(const Problem& p, const SolveOptions& opts, const std::vector<Matrix>& seeds,
                                  bool full) {
  const int n = p.target.nodes.size();
  const int d = p.target.block;
  const double thresh = -opts.tol;
  auto accept = [&](const Matrix& k) -> std::optional<KernelMatrix> {
    KernelMatrix out{p.target.nodes, d, k};
    if (verify_certificate(p.target, out, p.grid, opts.tol)) return out;
    return std::nullopt;
  };

  Matrix best;
  double best_val = std::numeric_limits<double>::infinity();
  auto consider = [&](Matrix k) -> std::optional<KernelMatrix> {
    if (!all_finite(k)) return std::nullopt;
    repair_certificate(p, k);
    const double v = violation(p, k);
    if (v < best_val) {
      best_val = v;
      best = k;
    }
    if (v <= thresh) return accept(k);
    return std::nullopt;
  };

  if (auto c = consider(Matrix::Identity(n * d, n * d))) return c;
  for (const Matrix& s : seeds)
    if (auto c = consider(s)) return c;
  if (!full) return std::nullopt;

  const int stride = std::max(1, p.grid.size() / 24);
  for (int m = 0; m < p.grid.size(); m += stride)
    if (auto c = consider(make_b_kernel(p.grid.alphas[static_cast<std::size_t>(m)], p.target.nodes, d).k))
      return c;
  for (std::uint64_t r = 0; r < 2; ++r) {
    try {
      if (auto c = consider(random_admissible_kernel(p.target.nodes, p.grid, opts.seed * 7919 + r, 20, d).k))
        return c;
    } catch (const NumericalError&) {
    }
  }

  Matrix k = best;
  double lam = 0.0;
  double step = 0.5;
  for (int it = 0; it < opts.probe_steps && k.size() > 0; ++it) {
    const Matrix g = violation_gradient(p, k, lam);
    Matrix trial = k - step * g;
    repair_certificate(p, trial);
    const double v = violation(p, trial);
    if (v < lam) {
      k = trial;
      step *= 1.5;
      if (v <= thresh)
        if (auto c = accept(k)) return c;
    } else {
      step *= 0.5;
      if (step < 1e-12) break;
    }
  }
  return std::nullopt;
}

// Moves the remaining affine error into the block that can absorb it, or
// falls back to the affine projection of y.
std::vector<Matrix> exactify(const Problem& p, const std::vector<Matrix>& y, const Matrix& s) {
  std::vector<Matrix> x(y.size());
  Matrix z;
  affine_project(p, y, x, z);
  double worst_x = std::numeric_limits<double>::infinity();
  for (const Matrix& b : x) worst_x = std::min(worst_x, min_eigenvalue(b));
  if (worst_x >= 0.0) return x;

  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_m = 0;
  for (std::size_t m = 0; m < y.size(); ++m) {
    const double v = min_eigenvalue(y[m] - s.cwiseQuotient(p.coeffs[m]));
    if (v > best) {
      best = v;
      best_m = m;
    }
  }
  if (best >= worst_x) {
    std::vector<Matrix> out = y;
    out[best_m] = y[best_m] - s.cwiseQuotient(p.coeffs[best_m]);
    out[best_m] = 0.5 * (out[best_m] + out[best_m].adjoint()).eval();
    return out;
  }
  return x;
}

// Exact witness supported on one grid point: B_m = J ./ C_m when that is PSD.
// Catches instances whose only witnesses are low rank at a single alpha,
// where every splitting scheme converges sublinearly.
std::optional<std::vector<Matrix>> single_block_witness(const Problem& p, double tol) {
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_m = 0;
  Matrix best_b;
  for (std::size_t m = 0; m < p.coeffs.size(); ++m) {
    Matrix b = p.target.j.cwiseQuotient(p.coeffs[m]);
    b = 0.5 * (b + b.adjoint()).eval();
    const double v = min_eigenvalue(b);
    if (v > best) {
      best = v;
      best_m = m;
      best_b = std::move(b);
    }
  }
  if (!(best >= -tol)) return std::nullopt;
  std::vector<Matrix> out(p.coeffs.size(), Matrix::Zero(p.target.dim(), p.target.dim()));
  out[best_m] = std::move(best_b);
  return out;
}

// Levenberg-Marquardt on rank-one factors of the iterate's leading
// eigenvectors. Splitting slows to a crawl when the only witnesses sit on the
// boundary of the cone (low-rank blocks at a few alphas); the factored form
// keeps every block PSD and converges quadratically near such a witness.
std::optional<std::vector<Matrix>> factor_polish(const Problem& p, const std::vector<Matrix>& y, double tol,
                                                 int max_iter = 300) {
  const Eigen::Index n = p.target.dim();
  if (n > 12) return std::nullopt;  // dense Jacobian grows like n^5
  struct Factor {
    std::size_t m;
    Vector u;
    double lambda;
  };
  std::vector<Factor> terms;
  for (std::size_t m = 0; m < y.size(); ++m) {
    if (y[m].norm() == 0.0) continue;
    const EigenDecomposition e = eigh(HermitianMatrix(0.5 * (y[m] + y[m].adjoint())));
    for (Eigen::Index k = 0; k < n; ++k)
      if (e.values(k) > 0.0) terms.push_back({m, std::sqrt(e.values(k)) * e.vectors.col(k), e.values(k)});
  }
  if (terms.empty()) return std::nullopt;
  std::stable_sort(terms.begin(), terms.end(), [](const Factor& a, const Factor& b) { return a.lambda > b.lambda; });
  const double floor = 1e-12 * terms.front().lambda;
  std::size_t keep = 0;
  while (keep < terms.size() && keep < static_cast<std::size_t>(n * n) && terms[keep].lambda > floor) ++keep;
  terms.resize(keep);

  const Eigen::Index eqs = n * n;
  const Eigen::Index params = 2 * n * static_cast<Eigen::Index>(terms.size());
  // Frobenius-consistent real coordinates of a Hermitian matrix.
  const auto coords = [n, eqs](const Matrix& h) {
    Eigen::VectorXd v(eqs);
    Eigen::Index k = 0;
    for (Eigen::Index i = 0; i < n; ++i) v(k++) = h(i, i).real();
    for (Eigen::Index i = 0; i < n; ++i)
      for (Eigen::Index j = i + 1; j < n; ++j) {
        v(k++) = std::sqrt(2.0) * h(i, j).real();
        v(k++) = std::sqrt(2.0) * h(i, j).imag();
      }
    return v;
  };
  const auto residual_of = [&](const std::vector<Factor>& t) {
    Matrix r = p.target.j;
    for (const Factor& f : t) r -= p.coeffs[f.m].cwiseProduct(f.u * f.u.adjoint());
    return coords(r);
  };

  Eigen::VectorXd r = residual_of(terms);
  double mu = 1e-3 * std::max(1.0, r.squaredNorm());
  Eigen::MatrixXd jac(eqs, params);
  for (int it = 0; it < max_iter && r.norm() > 0.1 * tol; ++it) {
    Eigen::Index col = 0;
    for (const Factor& f : terms)
      for (Eigen::Index k = 0; k < n; ++k)
        for (const Complex c : {Complex(1.0, 0.0), Complex(0.0, 1.0)}) {
          Vector du = Vector::Zero(n);
          du(k) = c;
          jac.col(col++) = coords(p.coeffs[f.m].cwiseProduct(du * f.u.adjoint() + f.u * du.adjoint()));
        }
    // Minimum-norm damped step for the underdetermined system J d = r.
    const Eigen::MatrixXd jjt = jac * jac.transpose();
    bool improved = false;
    for (int tries = 0; tries < 30 && !improved; ++tries) {
      const Eigen::MatrixXd a = jjt + mu * Eigen::MatrixXd::Identity(eqs, eqs);
      const Eigen::VectorXd step = jac.transpose() * a.ldlt().solve(r);
      std::vector<Factor> trial = terms;
      Eigen::Index k = 0;
      for (Factor& f : trial)
        for (Eigen::Index i = 0; i < n; ++i, k += 2) f.u(i) += Complex(step(k), step(k + 1));
      const Eigen::VectorXd rt = residual_of(trial);
      if (rt.norm() < r.norm()) {
        terms = std::move(trial);
        r = rt;
        mu = std::max(mu / 3.0, 1e-15);
        improved = true;
      } else {
        mu *= 4.0;
      }
    }
    if (!improved) break;
  }
  if (!(r.norm() <= tol)) return std::nullopt;
  std::vector<Matrix> out(y.size(), Matrix::Zero(n, n));
  for (const Factor& f : terms) out[f.m] += f.u * f.u.adjoint();
  return out;
}

}  // namespace

std::optional<KernelMatrix> dual_probe(const FeasibilityTarget& target, const AlphaGrid& grid,
                                       const SolveOptions& opts) {
  grid.validate();
  const Problem p = make_problem(target, grid);
  return probe(p, opts, {}, true);
}

SolveReport solve(const FeasibilityTarget& target, const AlphaGrid& grid, const SolveOptions& opts) {
  const auto t0 = Clock::now();
  grid.validate();
  require(opts.tol > 0.0, "solve: tol must be positive");
  require(opts.max_iter >= 1, "solve: max_iter must be positive");
  const Problem p = make_problem(target, grid);
  const std::size_t count = p.coeffs.size();
  const Eigen::Index n = target.dim();

  SolveReport report;
  if (n == 0) {
    report.status = SolveStatus::Feasible;
    report.blocks = CPBlocks{grid, target.block, std::vector<Matrix>(count, Matrix(0, 0))};
    report.wall_seconds = seconds_since(t0);
    return report;
  }

  if (auto cert = probe(p, opts, {}, false)) {
    report.status = SolveStatus::InfeasibleCertified;
    report.certificate_eig = certificate_violation(target, *cert);
    report.certificate = std::move(cert);
    report.residual = target.j.norm();
    report.wall_seconds = seconds_since(t0);
    return report;
  }

  const bool dykstra = opts.scheme == ProjectionScheme::Dykstra;
  std::vector<Matrix> zero(count, Matrix::Zero(n, n));
  std::vector<Matrix> x(count), y(count), corr(count, Matrix::Zero(n, n));
  Matrix z;
  affine_project(p, zero, x, z);

  double best = std::numeric_limits<double>::infinity();
  double window_start = best;
  int polish_left = -1;
  Matrix s;
  int it = 0;
  const bool reflect = opts.scheme == ProjectionScheme::DouglasRachford;
  std::vector<Matrix> w = x, refl(count);
  for (it = 1; it <= opts.max_iter; ++it) {
    if (reflect) {
      y = w;
      kernels::project_blocks(y, opts.exec);
      for (std::size_t m = 0; m < count; ++m) refl[m] = 2.0 * y[m] - w[m];
      affine_project(p, refl, x, z);
      Matrix gap = Matrix::Zero(n, n);
      s = -p.target.j;
      for (std::size_t m = 0; m < count; ++m) {
        w[m] += x[m] - y[m];
        gap += p.coeffs[m].cwiseProduct(y[m] - x[m]);
        s += p.coeffs[m].cwiseProduct(y[m]);
      }
      // y - x tends to the minimal displacement conj(C_m) o z when the sets do not meet.
      z = gap.cwiseQuotient(p.weight_m.cast<Complex>());
    } else {
      for (std::size_t m = 0; m < count; ++m) y[m] = dykstra ? Matrix(x[m] + corr[m]) : x[m];
      std::vector<Matrix> pre;
      if (dykstra) pre = y;
      kernels::project_blocks(y, opts.exec);
      if (dykstra)
        for (std::size_t m = 0; m < count; ++m) corr[m] = pre[m] - y[m];
      s = affine_project(p, y, x, z);
    }
    const double res = s.norm();
    best = std::min(best, res);

    if (polish_left < 0 && res <= opts.tol) polish_left = opts.polish_iter;
    if (polish_left >= 0) {
      if (res <= opts.polish_tol || polish_left == 0) break;
      --polish_left;
      continue;
    }

    if (opts.certificate_every > 0 && it % opts.certificate_every == 0) {
      if (auto cert = probe(p, opts, {z.conjugate()}, false)) {
        report.status = SolveStatus::InfeasibleCertified;
        report.certificate_eig = certificate_violation(target, *cert);
        report.certificate = std::move(cert);
        break;
      }
    }
    if (opts.stall_window > 0 && it % opts.stall_window == 0) {
      if (best > (1.0 - opts.stall_ratio) * window_start) {
        report.stalled = true;
        if (auto cert = probe(p, opts, {z.conjugate()}, true)) {
          report.status = SolveStatus::InfeasibleCertified;
          report.certificate_eig = certificate_violation(target, *cert);
          report.certificate = std::move(cert);
        }
        break;
      }
      window_start = best;
    }
  }
  report.iterations = std::min(it, opts.max_iter);
  report.residual = best;

  // Not converged and not certified: try exact low-rank witnesses.
  if (report.status != SolveStatus::InfeasibleCertified && polish_left < 0) {
    for (int pass = 0; pass < 2 && report.status != SolveStatus::Feasible; ++pass) {
      auto candidate = pass == 0 ? single_block_witness(p, opts.tol) : factor_polish(p, y, opts.tol);
      if (!candidate) continue;
      CPBlocks blocks{grid, target.block, std::move(*candidate)};
      const double r = residual(target, blocks);
      if (r <= opts.tol) {
        report.status = SolveStatus::Feasible;
        report.residual = r;
        report.blocks = std::move(blocks);
      }
    }
  }
  if (report.status != SolveStatus::InfeasibleCertified && polish_left >= 0) {
    CPBlocks blocks{grid, target.block, exactify(p, y, s)};
    double r = residual(target, blocks);
    if (r > opts.tol) {
      blocks.blocks = y;
      r = residual(target, blocks);
    }
    if (r <= opts.tol) {
      report.status = SolveStatus::Feasible;
      report.residual = r;
      report.blocks = std::move(blocks);
    }
  }
  report.wall_seconds = seconds_since(t0);
  return report;
}

namespace {

// Real coordinates of a Hermitian n x n matrix (diagonal, then the real and
// imaginary parts of the strict upper triangle).
Eigen::VectorXd realify(const Matrix& h) {
  const Eigen::Index n = h.rows();
  Eigen::VectorXd v(n * n);
  Eigen::Index k = 0;
  for (Eigen::Index i = 0; i < n; ++i) v(k++) = h(i, i).real();
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = i + 1; j < n; ++j) {
      v(k++) = h(i, j).real();
      v(k++) = h(i, j).imag();
    }
  return v;
}

struct Term {
  std::size_t grid_index;
  Vector u;
  double weight;
  Eigen::VectorXd coords;
};

}  // namespace

CPBlocks compress_blocks(const FeasibilityTarget& target, const CPBlocks& blocks) {
  const Eigen::Index n = target.dim();
  const Eigen::Index dim = n * n;
  const std::vector<Matrix> coeffs = expanded_coefficients(target, blocks.grid);

  std::vector<Term> all;
  for (std::size_t m = 0; m < blocks.blocks.size(); ++m) {
    const Matrix& b = blocks.blocks[m];
    if (b.size() == 0 || b.norm() == 0.0) continue;
    const Matrix g = gram_factor(psd_project(HermitianMatrix(b)), 1e-13);
    for (Eigen::Index r = 0; r < g.rows(); ++r) {
      Vector u = g.row(r).adjoint();
      const Matrix t = coeffs[m].cwiseProduct(u * u.adjoint());
      all.push_back({m, u, 1.0, realify(t)});
    }
  }
  if (static_cast<Eigen::Index>(all.size()) <= dim) {
    CPBlocks out = blocks;
    return out;
  }

  std::vector<Term> active;
  for (Term& t : all) {
    active.push_back(std::move(t));
    while (static_cast<Eigen::Index>(active.size()) > dim) {
      Eigen::MatrixXd a(dim, static_cast<Eigen::Index>(active.size()));
      for (std::size_t k = 0; k < active.size(); ++k) a.col(static_cast<Eigen::Index>(k)) = active[k].coords;
      Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
      Eigen::VectorXd null = lu.kernel().col(0);
      if (null.maxCoeff() <= 0.0) null = -null;
      double tau = std::numeric_limits<double>::infinity();
      std::size_t drop = 0;
      for (std::size_t k = 0; k < active.size(); ++k) {
        const double nk = null(static_cast<Eigen::Index>(k));
        if (nk > 0.0 && active[k].weight / nk < tau) {
          tau = active[k].weight / nk;
          drop = k;
        }
      }
      std::vector<Term> kept;
      kept.reserve(active.size());
      for (std::size_t k = 0; k < active.size(); ++k) {
        if (k == drop) continue;
        active[k].weight = std::max(active[k].weight - tau * null(static_cast<Eigen::Index>(k)), 0.0);
        kept.push_back(std::move(active[k]));
      }
      active = std::move(kept);
    }
  }

  CPBlocks out{blocks.grid, blocks.block, std::vector<Matrix>(blocks.blocks.size(), Matrix::Zero(n, n))};
  for (const Term& t : active) out.blocks[t.grid_index] += t.weight * (t.u * t.u.adjoint());
  for (Matrix& b : out.blocks) b = 0.5 * (b + b.adjoint()).eval();
  return out;
}

}  // namespace sympick
