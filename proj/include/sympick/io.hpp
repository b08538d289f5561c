#pragma once

// JSON problem and report files. Complex numbers are [re, im], G points are
// [s_re, s_im, p_re, p_im], matrices are {rows, cols, entries} with row-major
// [re, im] entries.

#include <cstdint>
#include <optional>
#include <string>

#include <json.hpp>

#include "sympick/colligation.hpp"
#include "sympick/cp_feasibility.hpp"
#include "sympick/geometry.hpp"
#include "sympick/kernel_lab.hpp"

namespace sympick::io {

using Json = nlohmann::ordered_json;

inline constexpr int kFormat = 1;
inline constexpr const char* kToolName = "sympick";
inline constexpr const char* kToolVersion = "0.1.0";

/// Path-aware accessors; failures raise InputError naming the field.
const Json& field(const Json& obj, const std::string& key, const std::string& path);
const Json* optional_field(const Json& obj, const std::string& key, const std::string& path);
double as_double(const Json& v, const std::string& path);
long as_int(const Json& v, const std::string& path);
bool as_bool(const Json& v, const std::string& path);
std::string as_string(const Json& v, const std::string& path);

Json to_json(Complex z);
Complex complex_from(const Json& v, const std::string& path);

Json to_json(const Matrix& m);
/// Accepts {rows, cols, entries}; a bare [re, im] pair reads as a 1 x 1 matrix.
Matrix matrix_from(const Json& v, const std::string& path);

Json to_json(const GPoint& x);
GPoint gpoint_from(const Json& v, const std::string& path);
Json nodes_to_json(const NodeSet& nodes);
NodeSet nodes_from(const Json& v, const std::string& path);

/// {"boundary", "radii", "angles", "zero"} or {"alphas": [...]}; absent means
/// the standard grid.
AlphaGrid grid_from(const Json* v, const std::string& path);
Json grid_spec_default();
Json to_json(const AlphaGrid& g);

Json to_json(const KernelMatrix& k);
KernelMatrix kernel_from(const Json& v, const std::string& path);

Json to_json(const CPBlocks& b);
Json to_json(const SolveReport& r, bool include_blocks = true);

Json to_json(const RealizedFunction& f);
RealizedFunction realized_from(const Json& v, const std::string& path);

Json to_json(const MembershipReport& r);

struct ProblemFile {
  std::string kind;
  Json payload;
  Json grid;
  double tol = 1e-8;
  long max_iter = 20000;
  std::uint64_t seed = 0;

  [[nodiscard]] Json to_json() const;
  [[nodiscard]] SolveOptions solve_options() const;
  friend bool operator==(const ProblemFile&, const ProblemFile&) = default;
};

/// Parse errors carry "line L, column C".
Json parse_json(const std::string& text, const std::string& source = "input");
ProblemFile problem_from(const Json& j);
ProblemFile parse_problem(const std::string& text, const std::string& source = "input");

/// FNV-1a of the compact dump with the "timing" member removed.
std::uint64_t report_hash(const Json& report);
std::string hex64(std::uint64_t v);

std::string read_file(const std::string& path);
/// Writes to path + ".tmp" and renames.
void write_file_atomic(const std::string& path, const std::string& contents);

}  // namespace sympick::io
