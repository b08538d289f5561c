#pragma once

// Data-parallel inner loops. Every kernel has an OpenMP implementation and a
// plain serial reference with the same per-element arithmetic, so both
// produce bit-identical results. Reductions run in index order after the
// parallel map.

#include <functional>
#include <vector>

#include "sympick/types.hpp"

namespace sympick::kernels {

enum class Exec { Serial, Parallel };

/// Default execution policy (Parallel when built with OpenMP).
Exec default_exec();
int max_threads();

/// PSD-projects every block in place; returns the pre-projection minimum
/// eigenvalue of each block.
std::vector<double> project_blocks(std::vector<Matrix>& blocks, Exec exec = default_exec());

/// For each coefficient matrix C_m (already expanded to the block layout),
/// the minimum eigenvalue of C_m o K.
std::vector<double> constrained_min_eigs(const Matrix& k, const std::vector<Matrix>& expanded_coeffs,
                                         Exec exec = default_exec());

/// out[i] = f(i) for i in [0, n).
std::vector<double> map_indexed(int n, const std::function<double(int)>& f,
                                Exec exec = default_exec());

/// xi(s, p) = sum_{a,b} coeff(a, b) s^a p^b (nested Horner).
Complex eval_poly(const Matrix& coeff, Complex s, Complex p);

struct RowMax {
  double value;
  int col;
};

/// For each angle 2 pi r / n of z1, the maximum of |xi(z1 + z2, z1 z2)| over
/// the n uniform angles of z2 and where it occurs.
std::vector<RowMax> torus_row_maxima(const Matrix& coeff, int n, Exec exec = default_exec());

/// Maximum of |xi(z1 + z2, z1 z2)| over the n x n uniform torus grid.
double torus_max_modulus(const Matrix& coeff, int n, Exec exec = default_exec());

namespace serial {
inline std::vector<double> project_blocks(std::vector<Matrix>& blocks) {
  return kernels::project_blocks(blocks, Exec::Serial);
}
inline std::vector<double> constrained_min_eigs(const Matrix& k, const std::vector<Matrix>& c) {
  return kernels::constrained_min_eigs(k, c, Exec::Serial);
}
inline double torus_max_modulus(const Matrix& coeff, int n) {
  return kernels::torus_max_modulus(coeff, n, Exec::Serial);
}
}  // namespace serial

}  // namespace sympick::kernels
