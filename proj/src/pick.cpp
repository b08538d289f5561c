#include "sympick/pick.hpp"

#include <algorithm>
#include <cmath>

#include "sympick/geometry.hpp"
#include "sympick/hermitian.hpp"

namespace sympick {

PickProblem PickProblem::scalar(NodeSet nodes, const std::vector<Complex>& w, double norm_bound) {
  PickProblem p;
  p.nodes = std::move(nodes);
  p.norm_bound = norm_bound;
  for (Complex v : w) p.targets.push_back(Matrix::Constant(1, 1, v));
  return p;
}

void PickProblem::validate() const {
  require(static_cast<int>(targets.size()) == nodes.size(), "pick: one target per node required");
  require(norm_bound > 0.0 && std::isfinite(norm_bound), "pick: norm_bound must be positive");
  for (const Matrix& w : targets) {
    require(w.rows() == rows() && w.cols() == cols(), "pick: targets must share one shape");
    require(all_finite(w), "pick: non-finite target");
  }
  require(targets.empty() || (rows() >= 1 && cols() >= 1), "pick: empty target matrices");
}

FeasibilityTarget assemble_pick_target(const PickProblem& problem) {
  problem.validate();
  const int n = problem.nodes.size();
  const Eigen::Index d = std::max<Eigen::Index>(1, problem.rows());
  const double inv2 = 1.0 / (problem.norm_bound * problem.norm_bound);
  Matrix j(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k)
      j.block(i * d, k * d, d, d) =
          Matrix::Identity(d, d) -
          inv2 * problem.targets[static_cast<std::size_t>(i)] * problem.targets[static_cast<std::size_t>(k)].adjoint();
  return FeasibilityTarget(problem.nodes, j, static_cast<int>(d));
}

namespace {

double op_norm(const Matrix& m) { return m.size() == 1 ? std::abs(m(0, 0)) : spectral_norm(m); }

}  // namespace

PickSolution solve_pick(const PickProblem& problem, const AlphaGrid& grid, const PickOptions& opts) {
  const FeasibilityTarget target = assemble_pick_target(problem);
  PickSolution sol;
  sol.report = solve(target, grid, opts.solve);
  if (sol.report.status != SolveStatus::Feasible || !opts.synthesize || problem.nodes.empty()) return sol;

  const double beta = problem.norm_bound;
  const CPBlocks blocks = compress_blocks(target, *sol.report.blocks);
  const std::vector<Matrix> phi_i(problem.targets.size(), Matrix::Identity(problem.rows(), problem.rows()));
  std::vector<Matrix> theta_i;
  for (const Matrix& w : problem.targets) theta_i.push_back(w / beta);
  RealizedFunction fn = lurking_isometry(blocks, problem.nodes, phi_i, theta_i);
  fn.gain = beta;

  for (int i = 0; i < problem.nodes.size(); ++i)
    sol.node_error = std::max(sol.node_error, op_norm(transfer_eval(fn, problem.nodes[i]) -
                                                      problem.targets[static_cast<std::size_t>(i)]));
  if (sol.node_error > 1e-7 * std::max(1.0, beta))
    throw NumericalError("synthesized interpolant misses the nodes (error " + std::to_string(sol.node_error) + ")");
  if (opts.contractivity_samples > 0)
    sol.sampled_norm = verify_contractivity(fn, opts.contractivity_samples, opts.sample_seed) / beta;
  sol.interpolant = std::move(fn);
  return sol;
}

MinimalNormResult minimal_norm(const PickProblem& problem, const AlphaGrid& grid, const MinimalNormOptions& opts) {
  problem.validate();
  require(!problem.nodes.empty(), "minimal_norm: at least one node required");
  require(opts.width > 0.0, "minimal_norm: width must be positive");
  MinimalNormResult r;
  double top = 0.0;
  for (const Matrix& w : problem.targets) top = std::max(top, op_norm(w));
  if (top == 0.0) return r;
  if (problem.nodes.size() == 1) {
    r.value = r.lower = r.upper = top;
    return r;
  }

  double rho = 1.0;
  for (int i = 0; i < problem.nodes.size(); ++i)
    for (int k = i + 1; k < problem.nodes.size(); ++k)
      rho = std::min(rho, caratheodory_two_point(problem.nodes[i], problem.nodes[k], 1024));

  PickOptions po;
  po.solve = opts.solve;
  po.synthesize = false;
  po.contractivity_samples = 0;
  auto status_at = [&](double beta) {
    PickProblem scaled = problem;
    scaled.norm_bound = beta;
    ++r.solves;
    const SolveStatus s = solve_pick(scaled, grid, po).report.status;
    if (s == SolveStatus::Unknown) ++r.unknown_count;
    return s;
  };

  double lo = top;
  double hi = rho > 0.0 ? top / rho : 2.0 * top;
  double certified_lo = top;
  int doublings = 0;
  for (;;) {
    const SolveStatus s = status_at(hi);
    if (s == SolveStatus::Feasible) break;
    if (s == SolveStatus::InfeasibleCertified) certified_lo = std::max(certified_lo, hi);
    lo = hi;
    hi *= 2.0;
    if (++doublings > opts.max_doublings) throw NumericalError("minimal_norm: no feasible bound found");
  }
  while (hi - lo > opts.width) {
    const double mid = 0.5 * (lo + hi);
    const SolveStatus s = status_at(mid);
    if (s == SolveStatus::Feasible) {
      hi = mid;
    } else {
      lo = mid;
      if (s == SolveStatus::InfeasibleCertified) certified_lo = std::max(certified_lo, mid);
    }
  }
  r.value = 0.5 * (lo + hi);
  r.lower = std::min(certified_lo, lo);
  r.upper = hi;
  return r;
}

}  // namespace sympick
