#include "sympick/sequence_diag.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sympick/geometry.hpp"
#include "sympick/hermitian.hpp"
#include "sympick/kernels.hpp"
#include "sympick/random.hpp"

namespace sympick {

namespace {

std::string alpha_label(Complex a) {
  std::ostringstream os;
  os.precision(6);
  os << "(" << a.real() << (a.imag() < 0 ? "-" : "+") << std::abs(a.imag()) << "i)";
  return os.str();
}

}  // namespace

std::vector<NamedKernel> sample_kernels(const NodeSet& nodes, const AlphaGrid& grid, int alpha_samples,
                                        int random_count, std::uint64_t seed) {
  grid.validate();
  require(alpha_samples >= 0 && random_count >= 0, "sample_kernels: counts must be non-negative");
  std::vector<NamedKernel> out;
  const int take = std::min(alpha_samples, grid.size());
  const std::vector<Matrix> coeffs = take > 0 ? coefficient_matrices(grid, nodes) : std::vector<Matrix>{};
  for (int k = 0; k < take; ++k) {
    const int m = static_cast<int>(static_cast<long>(k) * grid.size() / std::max(1, take));
    const Complex a = grid.alphas[static_cast<std::size_t>(m)];
    KernelMatrix b = make_b_kernel(a, nodes);
    std::string id = "b" + alpha_label(a);
    // b(alpha) is only guaranteed admissible at alpha itself. Off the
    // diagonal it usually fails elsewhere on the grid, so lift the diagonal.
    if (!admissibility_check(b, grid, 1e-8).is_admissible_on_grid) {
      shift_to_admissible(b.k, 1, coeffs);
      id += "+shift";
    }
    out.push_back({std::move(id), std::move(b)});
  }
  std::uint64_t s = seed;
  for (int k = 0; k < random_count; ++k) {
    for (int attempt = 0;; ++attempt, ++s) {
      try {
        out.push_back({"random#" + std::to_string(s), random_admissible_kernel(nodes, grid, s)});
        ++s;
        break;
      } catch (const NumericalError&) {
        if (attempt > 8) throw;
      }
    }
  }
  return out;
}

GrammianReport grammian_bounds(const SequenceTruncation& trunc, const std::vector<NamedKernel>& kernels,
                               const AlphaGrid& grid) {
  GrammianReport r;
  r.worst_lower = std::numeric_limits<double>::infinity();
  r.worst_upper = -std::numeric_limits<double>::infinity();
  for (const NamedKernel& nk : kernels) {
    require(nk.kernel.nodes.size() == trunc.n(), "grammian_bounds: kernel " + nk.id + " has the wrong node count");
    const AdmissibilityReport adm = admissibility_check(nk.kernel, grid, 1e-8);
    if (!adm.is_admissible_on_grid)
      throw InputError("grammian_bounds: kernel " + nk.id + " is not admissible at alpha " +
                       alpha_label(adm.worst_alpha));
    const Matrix g = grammian_normalize(nk.kernel);
    const EigenDecomposition e = eigh(HermitianMatrix(g));
    GrammianEntry entry{nk.id, e.values(0), e.values(e.values.size() - 1)};
    r.worst_lower = std::min(r.worst_lower, entry.lambda_min);
    r.worst_upper = std::max(r.worst_upper, entry.lambda_max);
    r.per_kernel.push_back(std::move(entry));
  }
  r.kernel_count = static_cast<int>(kernels.size());
  if (kernels.empty()) r.worst_lower = r.worst_upper = 0.0;
  return r;
}

double carleson_condition(const SequenceTruncation& trunc, Complex alpha) {
  require(std::abs(alpha) <= 1.0 + 1e-14, "carleson_condition: |alpha| must be <= 1");
  const int n = trunc.n();
  std::vector<Complex> z(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) z[static_cast<std::size_t>(i)] = phi(alpha, trunc.nodes[i]);
  double best = 1.0;
  for (int k = 0; k < n; ++k) {
    double prod = 1.0;
    for (int j = 0; j < n; ++j)
      if (j != k) prod *= pseudo_hyperbolic(z[static_cast<std::size_t>(j)], z[static_cast<std::size_t>(k)]);
    best = std::min(best, prod);
  }
  return best;
}

double carleson_bound(double delta_hat) {
  require(delta_hat > 0.0, "carleson_bound: delta must be positive");
  return (1.0 + delta_hat) / (delta_hat * delta_hat);
}

std::vector<PickSolution> strong_separation(const SequenceTruncation& trunc, double bound, const AlphaGrid& grid,
                                            const PickOptions& opts) {
  require(bound > 0.0, "strong_separation: bound must be positive");
  std::vector<PickSolution> out;
  for (int i = 0; i < trunc.n(); ++i) {
    std::vector<Complex> w(static_cast<std::size_t>(trunc.n()), Complex(0.0, 0.0));
    w[static_cast<std::size_t>(i)] = 1.0;
    out.push_back(solve_pick(PickProblem::scalar(trunc.nodes, w, bound), grid, opts));
  }
  return out;
}

std::vector<std::vector<std::optional<SolveStatus>>> weak_separation(const SequenceTruncation& trunc, double bound,
                                                                     const AlphaGrid& grid, const PickOptions& opts) {
  require(bound > 0.0, "weak_separation: bound must be positive");
  const int n = trunc.n();
  std::vector<std::vector<std::optional<SolveStatus>>> out(
      static_cast<std::size_t>(n), std::vector<std::optional<SolveStatus>>(static_cast<std::size_t>(n)));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      const PickProblem p = PickProblem::scalar(trunc.nodes.subset({i, j}), {1.0, 0.0}, bound);
      out[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] = solve_pick(p, grid, opts).report.status;
    }
  return out;
}

InterpolationConstant interpolation_constant(const SequenceTruncation& trunc, const AlphaGrid& grid,
                                             const MinimalNormOptions& opts, int max_patterns, std::uint64_t seed) {
  const int n = trunc.n();
  require(n >= 1, "interpolation_constant: empty truncation");
  std::vector<std::vector<Complex>> patterns;
  if (n - 1 < 30 && (1L << (n - 1)) <= max_patterns) {
    for (long mask = 0; mask < (1L << (n - 1)); ++mask) {
      std::vector<Complex> w(static_cast<std::size_t>(n), Complex(1.0, 0.0));
      for (int i = 1; i < n; ++i)
        if (mask & (1L << (i - 1))) w[static_cast<std::size_t>(i)] = -1.0;
      patterns.push_back(std::move(w));
    }
  } else {
    Rng rng(seed);
    for (int k = 0; k < max_patterns; ++k) {
      std::vector<Complex> w(static_cast<std::size_t>(n), Complex(1.0, 0.0));
      for (int i = 1; i < n; ++i) w[static_cast<std::size_t>(i)] = random_unimodular(rng);
      patterns.push_back(std::move(w));
    }
  }
  InterpolationConstant c;
  for (const auto& w : patterns) {
    const MinimalNormResult r = minimal_norm(PickProblem::scalar(trunc.nodes, w), grid, opts);
    c.value = std::max(c.value, r.upper);
    c.unknown_count += r.unknown_count;
  }
  c.patterns = static_cast<int>(patterns.size());
  return c;
}

}  // namespace sympick
