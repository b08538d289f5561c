#include "sympick/io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "sympick/hermitian.hpp"

namespace sympick::io {

const Json& field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError("'" + path + "' must be an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw InputError("missing required field '" + path + "." + key + "'");
  return *it;
}

const Json* optional_field(const Json& obj, const std::string& key, const std::string& path) {
  if (!obj.is_object()) throw InputError("'" + path + "' must be an object");
  auto it = obj.find(key);
  if (it == obj.end() || it->is_null()) return nullptr;
  return &*it;
}

double as_double(const Json& v, const std::string& path) {
  if (!v.is_number()) throw InputError("'" + path + "' must be a number");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw InputError("'" + path + "' must be finite");
  return d;
}

long as_int(const Json& v, const std::string& path) {
  if (!v.is_number_integer()) throw InputError("'" + path + "' must be an integer");
  return v.get<long>();
}

bool as_bool(const Json& v, const std::string& path) {
  if (!v.is_boolean()) throw InputError("'" + path + "' must be true or false");
  return v.get<bool>();
}

std::string as_string(const Json& v, const std::string& path) {
  if (!v.is_string()) throw InputError("'" + path + "' must be a string");
  return v.get<std::string>();
}

Json to_json(Complex z) { return Json::array({z.real(), z.imag()}); }

Complex complex_from(const Json& v, const std::string& path) {
  if (v.is_number()) return {as_double(v, path), 0.0};
  if (!v.is_array() || v.size() != 2) throw InputError("'" + path + "' must be a [re, im] pair");
  return {as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]")};
}

Json to_json(const Matrix& m) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) entries.push_back(to_json(m(i, j)));
  Json out;
  out["rows"] = m.rows();
  out["cols"] = m.cols();
  out["entries"] = std::move(entries);
  return out;
}

Matrix matrix_from(const Json& v, const std::string& path) {
  if (v.is_array() || v.is_number()) return Matrix::Constant(1, 1, complex_from(v, path));
  const long rows = as_int(field(v, "rows", path), path + ".rows");
  const long cols = as_int(field(v, "cols", path), path + ".cols");
  if (rows < 0 || cols < 0) throw InputError("'" + path + "' has negative dimensions");
  const Json& entries = field(v, "entries", path);
  if (!entries.is_array() || static_cast<long>(entries.size()) != rows * cols)
    throw InputError("'" + path + ".entries' must hold rows*cols [re, im] pairs");
  Matrix m(rows, cols);
  for (long i = 0; i < rows; ++i)
    for (long j = 0; j < cols; ++j)
      m(i, j) = complex_from(entries[static_cast<std::size_t>(i * cols + j)],
                             path + ".entries[" + std::to_string(i * cols + j) + "]");
  return m;
}

Json to_json(const GPoint& x) { return Json::array({x.s.real(), x.s.imag(), x.p.real(), x.p.imag()}); }

GPoint gpoint_from(const Json& v, const std::string& path) {
  if (!v.is_array() || v.size() != 4) throw InputError("'" + path + "' must be [s_re, s_im, p_re, p_im]");
  return {{as_double(v[0], path + "[0]"), as_double(v[1], path + "[1]")},
          {as_double(v[2], path + "[2]"), as_double(v[3], path + "[3]")}};
}

Json nodes_to_json(const NodeSet& nodes) {
  Json out = Json::array();
  for (const GPoint& x : nodes.points()) out.push_back(to_json(x));
  return out;
}

NodeSet nodes_from(const Json& v, const std::string& path) {
  if (!v.is_array()) throw InputError("'" + path + "' must be an array of points");
  std::vector<GPoint> pts;
  for (std::size_t i = 0; i < v.size(); ++i) pts.push_back(gpoint_from(v[i], path + "[" + std::to_string(i) + "]"));
  return NodeSet(std::move(pts));
}

Json grid_spec_default() {
  Json g;
  g["boundary"] = 64;
  g["radii"] = 8;
  g["angles"] = 16;
  g["zero"] = true;
  return g;
}

AlphaGrid grid_from(const Json* v, const std::string& path) {
  if (v == nullptr) return AlphaGrid::standard();
  if (!v->is_object()) throw InputError("'" + path + "' must be an object");
  if (const Json* a = optional_field(*v, "alphas", path)) {
    if (!a->is_array()) throw InputError("'" + path + ".alphas' must be an array");
    std::vector<Complex> alphas;
    for (std::size_t i = 0; i < a->size(); ++i)
      alphas.push_back(complex_from((*a)[i], path + ".alphas[" + std::to_string(i) + "]"));
    return AlphaGrid::from_alphas(std::move(alphas));
  }
  auto get = [&](const char* key, long dflt) {
    const Json* f = optional_field(*v, key, path);
    return f ? as_int(*f, path + "." + key) : dflt;
  };
  const Json* z = optional_field(*v, "zero", path);
  const bool zero = z ? as_bool(*z, path + ".zero") : true;
  return AlphaGrid::standard(static_cast<int>(get("boundary", 64)), static_cast<int>(get("radii", 8)),
                             static_cast<int>(get("angles", 16)), zero);
}

Json to_json(const AlphaGrid& g) {
  Json a = Json::array();
  for (Complex z : g.alphas) a.push_back(to_json(z));
  Json out;
  out["alphas"] = std::move(a);
  return out;
}

Json to_json(const KernelMatrix& k) {
  Json entries = Json::array();
  for (Eigen::Index i = 0; i < k.k.rows(); ++i)
    for (Eigen::Index j = 0; j < k.k.cols(); ++j) entries.push_back(to_json(k.k(i, j)));
  Json out;
  out["nodes"] = nodes_to_json(k.nodes);
  out["block"] = k.block;
  out["entries"] = std::move(entries);
  return out;
}

KernelMatrix kernel_from(const Json& v, const std::string& path) {
  KernelMatrix k;
  k.nodes = nodes_from(field(v, "nodes", path), path + ".nodes");
  const Json* b = optional_field(v, "block", path);
  k.block = b ? static_cast<int>(as_int(*b, path + ".block")) : 1;
  if (k.block < 1) throw InputError("'" + path + ".block' must be positive");
  const Eigen::Index n = static_cast<Eigen::Index>(k.nodes.size()) * k.block;
  const Json& e = field(v, "entries", path);
  if (!e.is_array() || static_cast<Eigen::Index>(e.size()) != n * n)
    throw InputError("'" + path + ".entries' must hold (nodes*block)^2 pairs");
  k.k = Matrix(n, n);
  for (Eigen::Index i = 0; i < n; ++i)
    for (Eigen::Index j = 0; j < n; ++j)
      k.k(i, j) = complex_from(e[static_cast<std::size_t>(i * n + j)],
                               path + ".entries[" + std::to_string(i * n + j) + "]");
  return k;
}

Json to_json(const CPBlocks& b) {
  Json blocks = Json::array();
  for (const Matrix& m : b.blocks) blocks.push_back(to_json(m));
  Json out;
  out["grid"] = to_json(b.grid);
  out["block"] = b.block;
  out["blocks"] = std::move(blocks);
  return out;
}

Json to_json(const SolveReport& r, bool include_blocks) {
  Json out;
  out["status"] = to_string(r.status);
  out["residual"] = r.residual;
  out["iterations"] = r.iterations;
  out["stalled"] = r.stalled;
  if (r.certificate) {
    out["certificate"] = to_json(*r.certificate);
    out["certificate_min_eig"] = r.certificate_eig;
  }
  if (r.blocks && include_blocks) out["blocks"] = to_json(*r.blocks);
  return out;
}

Json to_json(const RealizedFunction& f) {
  const Colligation& c = f.colligation;
  Json mult = Json::array();
  for (int m : c.multiplicities) mult.push_back(m);
  Json out;
  out["A"] = to_json(c.a);
  out["B"] = to_json(c.b);
  out["C"] = to_json(c.c);
  out["D"] = to_json(c.d);
  out["grid"] = to_json(c.grid);
  out["multiplicities"] = std::move(mult);
  out["padding"] = c.padding;
  out["out"] = f.out;
  out["in"] = f.in;
  out["gain"] = f.gain;
  out["unitarity_defect"] = c.unitarity_defect();
  return out;
}

RealizedFunction realized_from(const Json& v, const std::string& path) {
  Colligation c;
  c.a = matrix_from(field(v, "A", path), path + ".A");
  c.b = matrix_from(field(v, "B", path), path + ".B");
  c.c = matrix_from(field(v, "C", path), path + ".C");
  c.d = matrix_from(field(v, "D", path), path + ".D");
  c.grid = grid_from(&field(v, "grid", path), path + ".grid");
  const Json& mult = field(v, "multiplicities", path);
  if (!mult.is_array()) throw InputError("'" + path + ".multiplicities' must be an array");
  for (std::size_t i = 0; i < mult.size(); ++i)
    c.multiplicities.push_back(static_cast<int>(as_int(mult[i], path + ".multiplicities[" + std::to_string(i) + "]")));
  if (const Json* p = optional_field(v, "padding", path)) c.padding = static_cast<int>(as_int(*p, path + ".padding"));
  RealizedFunction f = make_realized(std::move(c));
  if (const Json* o = optional_field(v, "out", path)) f.out = as_int(*o, path + ".out");
  if (const Json* i = optional_field(v, "in", path)) f.in = as_int(*i, path + ".in");
  if (const Json* g = optional_field(v, "gain", path)) f.gain = as_double(*g, path + ".gain");
  require(f.out >= 0 && f.out <= f.colligation.out_dim() && f.in >= 0 && f.in <= f.colligation.in_dim(),
          "'" + path + "' out/in exceed the colligation");
  return f;
}

Json to_json(const MembershipReport& r) {
  Json out;
  out["is_member"] = r.is_member;
  out["boundary"] = r.boundary;
  out["sup_modulus"] = r.sup_modulus;
  out["argmax_alpha"] = to_json(r.argmax_alpha);
  out["tolerance"] = r.tolerance;
  if (!r.reason.empty()) out["reason"] = r.reason;
  return out;
}

Json ProblemFile::to_json() const {
  Json out;
  out["format"] = kFormat;
  out["kind"] = kind;
  out["payload"] = payload;
  out["grid"] = grid;
  Json opts;
  opts["tol"] = tol;
  opts["max_iter"] = max_iter;
  opts["seed"] = seed;
  out["opts"] = std::move(opts);
  return out;
}

SolveOptions ProblemFile::solve_options() const {
  SolveOptions o;
  o.tol = tol;
  o.max_iter = static_cast<int>(max_iter);
  o.seed = seed;
  return o;
}

Json parse_json(const std::string& text, const std::string& source) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    // e.byte is 1-based and points just past the offending character.
    std::size_t line = 1, col = 1;
    const std::size_t stop = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < stop; ++i) {
      if (text[i] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
    }
    throw InputError("malformed JSON in " + source + " at line " + std::to_string(line) + ", column " +
                     std::to_string(col));
  }
}

ProblemFile problem_from(const Json& j) {
  if (!j.is_object()) throw InputError("problem file must be a JSON object");
  if (const Json* f = optional_field(j, "format", "problem")) {
    if (as_int(*f, "problem.format") != kFormat) throw InputError("unsupported problem format (expected 1)");
  }
  ProblemFile p;
  p.kind = as_string(field(j, "kind", "problem"), "problem.kind");
  static const char* kinds[] = {"pick", "corona", "sequence", "gamma-check", "measure-model", "membership"};
  bool known = false;
  for (const char* k : kinds) known = known || p.kind == k;
  if (!known) throw InputError("unknown problem kind '" + p.kind + "'");
  p.payload = field(j, "payload", "problem");
  if (!p.payload.is_object()) throw InputError("'problem.payload' must be an object");
  const Json* g = optional_field(j, "grid", "problem");
  p.grid = g ? *g : grid_spec_default();
  grid_from(&p.grid, "problem.grid");
  if (const Json* o = optional_field(j, "opts", "problem")) {
    if (const Json* t = optional_field(*o, "tol", "problem.opts")) p.tol = as_double(*t, "problem.opts.tol");
    if (const Json* m = optional_field(*o, "max_iter", "problem.opts")) p.max_iter = as_int(*m, "problem.opts.max_iter");
    if (const Json* s = optional_field(*o, "seed", "problem.opts")) {
      if (!s->is_number_unsigned() && !(s->is_number_integer() && s->get<long>() >= 0))
        throw InputError("'problem.opts.seed' must be a non-negative integer");
      p.seed = s->get<std::uint64_t>();
    }
  }
  require(p.tol > 0.0, "'problem.opts.tol' must be positive");
  require(p.max_iter >= 1, "'problem.opts.max_iter' must be positive");
  return p;
}

ProblemFile parse_problem(const std::string& text, const std::string& source) {
  return problem_from(parse_json(text, source));
}

std::uint64_t report_hash(const Json& report) {
  Json copy = report;
  if (copy.is_object()) copy.erase("timing");
  const std::string s = copy.dump();
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const std::string& path, const std::string& contents) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw InputError("cannot write '" + tmp + "'");
    out << contents;
    if (!out) throw InputError("write failed for '" + tmp + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw InputError("cannot move '" + tmp + "' to '" + path + "': " + ec.message());
}

}  // namespace sympick::io
