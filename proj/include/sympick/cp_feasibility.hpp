#pragma once

// Discretized completely positive representations: given a Hermitian
// node-indexed target J, find PSD blocks B_m, one per grid alpha, with
//
//   J = sum_m C_m o B_m,   C_m(i,j) = 1 - phi(alpha_m, l_i) conj(phi(alpha_m, l_j)),
//
// or an admissible kernel K on the grid with J (/) K not PSD.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "sympick/kernel_lab.hpp"
#include "sympick/kernels.hpp"
#include "sympick/types.hpp"

namespace sympick {

enum class SolveStatus { Feasible, InfeasibleCertified, Unknown };

std::string to_string(SolveStatus s);
SolveStatus solve_status_from_string(const std::string& s);

enum class ProjectionScheme { Dykstra, Alternating, DouglasRachford };

struct SolveOptions {
  double tol = 1e-8;
  int max_iter = 20000;
  std::uint64_t seed = 0;
  /// Stall: residual improved by less than stall_ratio (relative) over stall_window iterations.
  int stall_window = 500;
  double stall_ratio = 1e-3;
  /// After reaching tol, keep iterating toward polish_tol for up to polish_iter steps.
  double polish_tol = 1e-12;
  int polish_iter = 2000;
  /// How often the gap vector is tested as an infeasibility certificate.
  int certificate_every = 25;
  int probe_steps = 200;
  ProjectionScheme scheme = ProjectionScheme::DouglasRachford;
  kernels::Exec exec = kernels::default_exec();
};

struct CPBlocks {
  AlphaGrid grid;
  int block = 1;
  std::vector<Matrix> blocks;
};

/// Hermitian node-indexed target; block size d means J is (N d) x (N d).
struct FeasibilityTarget {
  NodeSet nodes;
  int block = 1;
  Matrix j;

  FeasibilityTarget() = default;
  /// Validates the shape and symmetrizes J (rejects asymmetry above 1e-9 relative).
  FeasibilityTarget(NodeSet nodes, Matrix j, int block = 1);
  [[nodiscard]] Eigen::Index dim() const { return j.rows(); }
};

struct SolveReport {
  SolveStatus status = SolveStatus::Unknown;
  std::optional<CPBlocks> blocks;
  std::optional<KernelMatrix> certificate;
  double residual = 0.0;
  /// lambda_min(J (/) K) of the certificate, when present.
  double certificate_eig = 0.0;
  int iterations = 0;
  bool stalled = false;
  double wall_seconds = 0.0;
};

/// Coefficient matrices laid out for the target's block size.
std::vector<Matrix> expanded_coefficients(const FeasibilityTarget& target, const AlphaGrid& grid);

SolveReport solve(const FeasibilityTarget& target, const AlphaGrid& grid, const SolveOptions& opts = {});

/// ||J - sum_m C_m o B_m||_F + sum_m max(0, -lambda_min(B_m)).
double residual(const FeasibilityTarget& target, const CPBlocks& blocks);

/// lambda_min(J (/) K).
double certificate_violation(const FeasibilityTarget& target, const KernelMatrix& k);

/// True when K passes admissibility_check on `grid` at tol and J (/) K has an
/// eigenvalue <= -tol.
bool verify_certificate(const FeasibilityTarget& target, const KernelMatrix& k, const AlphaGrid& grid,
                        double tol);

/// Searches for a grid-admissible K with lambda_min(J (/) K) <= -tol: seeded
/// candidates (identity, b-kernels, random admissible kernels) followed by
/// eigenvector ascent with repair onto the admissible set.
std::optional<KernelMatrix> dual_probe(const FeasibilityTarget& target, const AlphaGrid& grid,
                                       const SolveOptions& opts = {});

/// Re-expresses the blocks with at most dim^2 rank-one terms in total while
/// keeping sum_m C_m o B_m unchanged.
CPBlocks compress_blocks(const FeasibilityTarget& target, const CPBlocks& blocks);

}  // namespace sympick
