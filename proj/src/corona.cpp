#include "sympick/corona.hpp"

#include <algorithm>
#include <cmath>

#include "sympick/hermitian.hpp"

namespace sympick {

namespace {

constexpr Eigen::Index kMaxBlock = 8;

double op_norm(const Matrix& m) {
  if (m.size() == 0) return 0.0;
  return m.size() == 1 ? std::abs(m(0, 0)) : spectral_norm(m);
}

}  // namespace

void CoronaProblem::validate() const {
  require(static_cast<int>(phi_samples.size()) == nodes.size(), "corona: one Phi sample per node required");
  require(delta > 0.0 && std::isfinite(delta), "corona: delta must be positive");
  if (phi_samples.empty()) return;
  const Eigen::Index d2 = phi_samples.front().rows();
  const Eigen::Index d1 = phi_samples.front().cols();
  require(d2 >= 1 && d1 >= 1, "corona: empty Phi samples");
  require(d2 <= kMaxBlock, "corona: output dimension above 8 is not supported");
  for (const Matrix& m : phi_samples) {
    require(m.rows() == d2 && m.cols() == d1, "corona: Phi samples must share one shape");
    require(all_finite(m), "corona: non-finite Phi sample");
  }
  if (theta_samples) {
    require(theta_samples->size() == phi_samples.size(), "corona: one Theta sample per node required");
    const Eigen::Index d3 = theta_samples->front().cols();
    require(d3 >= 1, "corona: empty Theta samples");
    for (const Matrix& m : *theta_samples) {
      require(m.rows() == d2 && m.cols() == d3, "corona: Theta samples must be d2 x d3 with a common d3");
      require(all_finite(m), "corona: non-finite Theta sample");
    }
  }
}

std::vector<Matrix> CoronaProblem::theta() const {
  if (theta_samples) return *theta_samples;
  const Eigen::Index d2 = phi_samples.empty() ? 1 : phi_samples.front().rows();
  return std::vector<Matrix>(phi_samples.size(), std::sqrt(delta) * Matrix::Identity(d2, d2));
}

FeasibilityTarget assemble_corona_target(const CoronaProblem& problem) {
  problem.validate();
  const int n = problem.nodes.size();
  const Eigen::Index d = problem.phi_samples.empty() ? 1 : problem.phi_samples.front().rows();
  const std::vector<Matrix> th = problem.theta();
  Matrix j(n * d, n * d);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const auto a = static_cast<std::size_t>(i);
      const auto b = static_cast<std::size_t>(k);
      j.block(i * d, k * d, d, d) =
          problem.phi_samples[a] * problem.phi_samples[b].adjoint() - th[a] * th[b].adjoint();
    }
  return FeasibilityTarget(problem.nodes, j, static_cast<int>(d));
}

CoronaSolution solve_corona(const CoronaProblem& problem, const AlphaGrid& grid, const CoronaOptions& opts) {
  const FeasibilityTarget target = assemble_corona_target(problem);
  CoronaSolution sol;
  sol.bound_sqrt = 1.0 / std::sqrt(problem.delta);
  sol.bound_linear = 1.0 / problem.delta;
  sol.report = solve(target, grid, opts.solve);
  if (sol.report.status != SolveStatus::Feasible || problem.nodes.empty()) return sol;

  const std::vector<Matrix> th = problem.theta();
  const CPBlocks blocks = compress_blocks(target, *sol.report.blocks);
  RealizedFunction psi = lurking_isometry(blocks, problem.nodes, problem.phi_samples, th);
  for (int i = 0; i < problem.nodes.size(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    sol.node_residual =
        std::max(sol.node_residual, op_norm(problem.phi_samples[a] * transfer_eval(psi, problem.nodes[i]) - th[a]));
  }
  if (sol.node_residual > 1e-7)
    throw NumericalError("synthesized corona solution misses the nodes (residual " +
                         std::to_string(sol.node_residual) + ")");
  if (opts.contractivity_samples > 0)
    sol.sampled_norm = verify_contractivity(psi, opts.contractivity_samples, opts.sample_seed);
  if (problem.default_theta()) {
    RealizedFunction inv = psi;
    inv.gain = psi.gain / std::sqrt(problem.delta);
    sol.left_inverse = std::move(inv);
  }
  sol.psi = std::move(psi);
  return sol;
}

LeftInverseReport verify_left_inverse(const std::optional<RealizedFunction>& psi, const CoronaProblem& problem,
                                      int extra_samples, std::uint64_t seed, const CoronaEvaluator& evaluator) {
  problem.validate();
  LeftInverseReport r;
  if (!psi) {
    r.skipped = true;
    return r;
  }
  const std::vector<Matrix> th = problem.theta();
  for (int i = 0; i < problem.nodes.size(); ++i) {
    const auto a = static_cast<std::size_t>(i);
    r.node_residual =
        std::max(r.node_residual, op_norm(problem.phi_samples[a] * transfer_eval(*psi, problem.nodes[i]) - th[a]));
  }
  if (extra_samples > 0) {
    r.samples = extra_samples;
    r.sampled_norm = verify_contractivity(*psi, extra_samples, seed);
    if (evaluator) {
      r.sample_residual = 0.0;
      for (const GPoint& x : sample_points(extra_samples, seed)) {
        const auto [phi_x, theta_x] = evaluator(x);
        r.sample_residual = std::max(r.sample_residual, op_norm(phi_x * transfer_eval(*psi, x) - theta_x));
      }
    }
  }
  return r;
}

}  // namespace sympick
