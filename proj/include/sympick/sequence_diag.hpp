#pragma once

// Finite-truncation diagnostics for interpolating sequences in G.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sympick/kernel_lab.hpp"
#include "sympick/pick.hpp"

namespace sympick {

struct SequenceTruncation {
  NodeSet nodes;
  [[nodiscard]] int n() const { return nodes.size(); }
};

struct NamedKernel {
  std::string id;
  KernelMatrix kernel;
};

struct GrammianEntry {
  std::string kernel_id;
  double lambda_min = 0.0;
  double lambda_max = 0.0;
};

struct GrammianReport {
  std::vector<GrammianEntry> per_kernel;
  double worst_lower = 0.0;
  double worst_upper = 0.0;
  int kernel_count = 0;
};

/// b-kernels at `alpha_samples` grid points (evenly strided) plus
/// `random_count` random admissible kernels.
std::vector<NamedKernel> sample_kernels(const NodeSet& nodes, const AlphaGrid& grid, int alpha_samples,
                                        int random_count, std::uint64_t seed);

/// Rejects kernels that fail admissibility_check (tol 1e-8), naming the alpha.
GrammianReport grammian_bounds(const SequenceTruncation& trunc, const std::vector<NamedKernel>& kernels,
                               const AlphaGrid& grid);

/// min_k prod_{j != k} d(z_j, z_k) with z_j = phi(alpha, l_j).
double carleson_condition(const SequenceTruncation& trunc, Complex alpha);

/// Bound at which the disk construction composed with phi(alpha, .) interpolates
/// the 0/1 data at every node: (1 + d) / d^2 for d = carleson_condition.
double carleson_bound(double delta_hat);

/// solve_pick with targets e_i at norm bound `bound`, for every i.
std::vector<PickSolution> strong_separation(const SequenceTruncation& trunc, double bound, const AlphaGrid& grid,
                                            const PickOptions& opts = {});

/// Pairwise two-point solves; entry (i, j) is the status for f(l_i) = 1,
/// f(l_j) = 0 and the diagonal is empty.
std::vector<std::vector<std::optional<SolveStatus>>> weak_separation(const SequenceTruncation& trunc, double bound,
                                                                     const AlphaGrid& grid,
                                                                     const PickOptions& opts = {});

struct InterpolationConstant {
  double value = 0.0;
  int patterns = 0;
  int unknown_count = 0;
};

/// Max over unimodular target patterns of minimal_norm (the `upper` end of
/// each bracket). All sign patterns modulo a global sign are used when there
/// are at most max_patterns of them, otherwise seeded random phases.
InterpolationConstant interpolation_constant(const SequenceTruncation& trunc, const AlphaGrid& grid,
                                             const MinimalNormOptions& opts, int max_patterns = 64,
                                             std::uint64_t seed = 0);

}  // namespace sympick
