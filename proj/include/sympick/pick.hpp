#pragma once

// Pick interpolation on G: J_ij = I - W_i W_j^* / beta^2, feasibility through
// the CP solver, interpolants through lurking-isometry synthesis.

#include <optional>
#include <vector>

#include "sympick/colligation.hpp"
#include "sympick/cp_feasibility.hpp"
#include "sympick/kernel_lab.hpp"

namespace sympick {

struct PickProblem {
  NodeSet nodes;
  /// One d2 x d1 target per node (1 x 1 in the scalar case).
  std::vector<Matrix> targets;
  double norm_bound = 1.0;

  static PickProblem scalar(NodeSet nodes, const std::vector<Complex>& w, double norm_bound = 1.0);
  [[nodiscard]] Eigen::Index rows() const { return targets.empty() ? 0 : targets.front().rows(); }
  [[nodiscard]] Eigen::Index cols() const { return targets.empty() ? 0 : targets.front().cols(); }
  void validate() const;
};

struct PickOptions {
  SolveOptions solve;
  bool synthesize = true;
  /// Seeded samples for the contractivity audit (0 skips it).
  int contractivity_samples = 1000;
  std::uint64_t sample_seed = 1;
};

struct PickSolution {
  SolveReport report;
  std::optional<RealizedFunction> interpolant;
  /// max_i ||f(l_i) - W_i|| for the synthesized interpolant.
  double node_error = 0.0;
  /// Sampled sup norm of the interpolant (relative to norm_bound 1).
  double sampled_norm = 0.0;
};

FeasibilityTarget assemble_pick_target(const PickProblem& problem);

/// Throws NumericalError when a synthesized interpolant misses a node by more than 1e-7.
PickSolution solve_pick(const PickProblem& problem, const AlphaGrid& grid, const PickOptions& opts = {});

struct MinimalNormOptions {
  SolveOptions solve;
  double width = 1e-4;
  int max_doublings = 20;
};

struct MinimalNormResult {
  double value = 0.0;
  /// Certified bracket: below `lower` no grid interpolant exists (or it is the
  /// trivial bound max ||W_i||); at `upper` one was found.
  double lower = 0.0;
  double upper = 0.0;
  int unknown_count = 0;
  int solves = 0;
};

MinimalNormResult minimal_norm(const PickProblem& problem, const AlphaGrid& grid,
                               const MinimalNormOptions& opts = {});

}  // namespace sympick
