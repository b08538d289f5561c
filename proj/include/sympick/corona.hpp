#pragma once

// Toeplitz corona data on G: find Psi with Phi(l_i) Psi(l_i) = Theta(l_i) and
// sup ||Psi|| <= 1 from J_ij = Phi_i Phi_j^* - Theta_i Theta_j^*.

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sympick/colligation.hpp"
#include "sympick/cp_feasibility.hpp"
#include "sympick/kernel_lab.hpp"

namespace sympick {

struct CoronaProblem {
  NodeSet nodes;
  /// Phi(l_i), d2 x d1 each.
  std::vector<Matrix> phi_samples;
  double delta = 1.0;
  /// Theta(l_i), d2 x d3 each; sqrt(delta) I_{d2} when absent.
  std::optional<std::vector<Matrix>> theta_samples;

  void validate() const;
  [[nodiscard]] std::vector<Matrix> theta() const;
  [[nodiscard]] bool default_theta() const { return !theta_samples.has_value(); }
};

struct CoronaOptions {
  SolveOptions solve;
  int contractivity_samples = 10000;
  std::uint64_t sample_seed = 1;
};

struct CoronaSolution {
  SolveReport report;
  /// Psi with Phi Psi = Theta at the nodes, d1 x d3.
  std::optional<RealizedFunction> psi;
  /// Psi / sqrt(delta) for the default Theta (a left inverse in the Phi Psi = I sense).
  std::optional<RealizedFunction> left_inverse;
  double node_residual = 0.0;
  double sampled_norm = 0.0;
  /// 1/sqrt(delta) and 1/delta: the bounds the left inverse is compared against.
  double bound_sqrt = 0.0;
  double bound_linear = 0.0;
};

FeasibilityTarget assemble_corona_target(const CoronaProblem& problem);

/// Throws NumericalError when the synthesized Psi misses the nodes by more than 1e-7.
CoronaSolution solve_corona(const CoronaProblem& problem, const AlphaGrid& grid, const CoronaOptions& opts = {});

/// Off-node values (Phi(x), Theta(x)) for verify_left_inverse.
using CoronaEvaluator = std::function<std::pair<Matrix, Matrix>(const GPoint&)>;

struct LeftInverseReport {
  bool skipped = false;
  double node_residual = 0.0;
  /// Max residual over extra samples; negative when no evaluator was given.
  double sample_residual = -1.0;
  double sampled_norm = 0.0;
  int samples = 0;
  /// Residuals are ||Phi Psi - Theta||, i.e. ||Psi^* Phi^* - Theta^*|| in the adjoint orientation.
  std::string orientation = "Phi Psi = Theta; Psi^* Phi^* = Theta^*";
};

LeftInverseReport verify_left_inverse(const std::optional<RealizedFunction>& psi, const CoronaProblem& problem,
                                      int extra_samples, std::uint64_t seed = 2,
                                      const CoronaEvaluator& evaluator = nullptr);

}  // namespace sympick
