#include "sympick/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <map>
#include <mutex>
#include <optional>
#include <sstream>
#include <thread>

#include <CLI11.hpp>

#include "sympick/corona.hpp"
#include "sympick/gamma_ops.hpp"
#include "sympick/hermitian.hpp"
#include "sympick/pick.hpp"
#include "sympick/sequence_diag.hpp"

namespace sympick::cli {

using io::Json;

namespace {

struct Outcome {
  std::string status;
  Json result;
};

long int_or(const Json& payload, const char* key, long dflt) {
  const Json* f = io::optional_field(payload, key, "payload");
  return f ? io::as_int(*f, std::string("payload.") + key) : dflt;
}

double double_or(const Json& payload, const char* key, double dflt) {
  const Json* f = io::optional_field(payload, key, "payload");
  return f ? io::as_double(*f, std::string("payload.") + key) : dflt;
}

bool bool_or(const Json& payload, const char* key, bool dflt) {
  const Json* f = io::optional_field(payload, key, "payload");
  return f ? io::as_bool(*f, std::string("payload.") + key) : dflt;
}

std::vector<Matrix> matrices_from(const Json& v, const std::string& path) {
  if (!v.is_array()) throw InputError("'" + path + "' must be an array");
  std::vector<Matrix> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(io::matrix_from(v[i], path + "[" + std::to_string(i) + "]"));
  return out;
}

Json check_to_json(const GammaCheck& c) {
  Json j;
  j["passed"] = c.passed;
  j["isometry_defect"] = c.isometry_defect;
  j["symmetry_defect"] = c.symmetry_defect;
  j["norm"] = c.norm;
  j["commutator"] = c.commutator;
  if (!c.reason.empty()) j["reason"] = c.reason;
  return j;
}

Json probe_to_json(const SpectralProbeReport& r) {
  Json j;
  j["max_ratio"] = r.max_ratio;
  j["max_certified_ratio"] = r.max_certified_ratio;
  j["not_gamma_contraction"] = r.not_gamma_contraction;
  j["worst_polynomial"] = r.worst_polynomial;
  j["polynomials"] = r.polynomials;
  return j;
}

Outcome run_membership(const io::ProblemFile& pf) {
  const Json& pl = pf.payload;
  const Complex s = io::complex_from(io::field(pl, "s", "payload"), "payload.s");
  const Complex p = io::complex_from(io::field(pl, "p", "payload"), "payload.p");
  const int grid = static_cast<int>(int_or(pl, "circle_grid", kDefaultCircleGrid));
  require(grid >= 16, "'payload.circle_grid' must be at least 16");
  const double tol = double_or(pl, "tol", kDefaultMembershipTol);
  const MembershipReport r = membership(s, p, grid, tol);
  return {r.is_member ? "member" : "non-member", io::to_json(r)};
}

Outcome run_pick(const io::ProblemFile& pf) {
  const Json& pl = pf.payload;
  PickProblem prob;
  prob.nodes = io::nodes_from(io::field(pl, "nodes", "payload"), "payload.nodes");
  prob.targets = matrices_from(io::field(pl, "targets", "payload"), "payload.targets");
  prob.norm_bound = double_or(pl, "norm_bound", 1.0);
  prob.validate();
  const AlphaGrid grid = io::grid_from(&pf.grid, "grid");

  PickOptions opts;
  opts.solve = pf.solve_options();
  opts.synthesize = bool_or(pl, "synthesize", true);
  opts.contractivity_samples = static_cast<int>(int_or(pl, "contractivity_samples", 1000));
  opts.sample_seed = pf.seed + 1;
  require(opts.contractivity_samples >= 0, "'payload.contractivity_samples' must be non-negative");

  const PickSolution sol = solve_pick(prob, grid, opts);
  Json res;
  res["solve"] = io::to_json(sol.report, bool_or(pl, "include_blocks", true));
  if (sol.interpolant) {
    res["interpolant"] = io::to_json(*sol.interpolant);
    res["node_error"] = sol.node_error;
    res["sampled_norm"] = sol.sampled_norm;
    res["contractivity_samples"] = opts.contractivity_samples;
  }
  if (bool_or(pl, "minimal_norm", false)) {
    MinimalNormOptions mo;
    mo.solve = opts.solve;
    mo.width = double_or(pl, "minimal_norm_width", mo.width);
    require(mo.width > 0.0, "'payload.minimal_norm_width' must be positive");
    const MinimalNormResult m = minimal_norm(prob, grid, mo);
    Json mj;
    mj["value"] = m.value;
    mj["lower"] = m.lower;
    mj["upper"] = m.upper;
    mj["unknown_count"] = m.unknown_count;
    mj["solves"] = m.solves;
    res["minimal_norm"] = std::move(mj);
  }
  return {to_string(sol.report.status), std::move(res)};
}

Outcome run_corona(const io::ProblemFile& pf) {
  const Json& pl = pf.payload;
  CoronaProblem prob;
  prob.nodes = io::nodes_from(io::field(pl, "nodes", "payload"), "payload.nodes");
  prob.phi_samples = matrices_from(io::field(pl, "phi_samples", "payload"), "payload.phi_samples");
  prob.delta = io::as_double(io::field(pl, "delta", "payload"), "payload.delta");
  if (const Json* t = io::optional_field(pl, "theta_samples", "payload"))
    prob.theta_samples = matrices_from(*t, "payload.theta_samples");
  prob.validate();
  const AlphaGrid grid = io::grid_from(&pf.grid, "grid");

  CoronaOptions opts;
  opts.solve = pf.solve_options();
  opts.contractivity_samples = static_cast<int>(int_or(pl, "contractivity_samples", 10000));
  opts.sample_seed = pf.seed + 1;
  require(opts.contractivity_samples >= 0, "'payload.contractivity_samples' must be non-negative");

  const CoronaSolution sol = solve_corona(prob, grid, opts);
  Json res;
  res["solve"] = io::to_json(sol.report, bool_or(pl, "include_blocks", true));
  res["bound_sqrt"] = sol.bound_sqrt;
  res["bound_linear"] = sol.bound_linear;
  if (sol.psi) {
    res["psi"] = io::to_json(*sol.psi);
    res["node_residual"] = sol.node_residual;
    res["sampled_norm"] = sol.sampled_norm;
    res["contractivity_samples"] = opts.contractivity_samples;
  }
  if (sol.left_inverse) res["left_inverse"] = io::to_json(*sol.left_inverse);
  return {to_string(sol.report.status), std::move(res)};
}

Outcome run_sequence(const io::ProblemFile& pf) {
  const Json& pl = pf.payload;
  NodeSet all = io::nodes_from(io::field(pl, "nodes", "payload"), "payload.nodes");
  const long n = int_or(pl, "n", all.size());
  require(n >= 1 && n <= all.size(), "'payload.n' must lie in [1, number of nodes]");
  require(n <= 32, "'payload.n' above 32 is not supported");
  std::vector<int> idx(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) idx[static_cast<std::size_t>(i)] = i;
  const SequenceTruncation trunc{all.subset(idx)};
  const AlphaGrid grid = io::grid_from(&pf.grid, "grid");
  const int alpha_samples = static_cast<int>(int_or(pl, "alpha_samples", 8));
  const int random_kernels = static_cast<int>(int_or(pl, "kernels", 24));
  require(alpha_samples >= 0 && random_kernels >= 0, "kernel counts must be non-negative");

  Json res;
  res["n"] = n;

  double best = -1.0;
  Complex best_alpha{0.0, 0.0};
  for (Complex a : grid.alphas) {
    const double c = carleson_condition(trunc, a);
    if (c > best) {
      best = c;
      best_alpha = a;
    }
  }
  Json carl;
  carl["delta_hat"] = best;
  carl["alpha"] = io::to_json(best_alpha);
  if (best > 0.0) carl["bound"] = carleson_bound(best);
  res["carleson"] = std::move(carl);

  const std::vector<NamedKernel> ks = sample_kernels(trunc.nodes, grid, alpha_samples, random_kernels, pf.seed);
  const GrammianReport gr = grammian_bounds(trunc, ks, grid);
  Json gj;
  gj["kernel_count"] = gr.kernel_count;
  gj["worst_lower"] = gr.worst_lower;
  gj["worst_upper"] = gr.worst_upper;
  Json per = Json::array();
  for (const GrammianEntry& e : gr.per_kernel) {
    Json ej;
    ej["kernel"] = e.kernel_id;
    ej["lambda_min"] = e.lambda_min;
    ej["lambda_max"] = e.lambda_max;
    per.push_back(std::move(ej));
  }
  gj["per_kernel"] = std::move(per);
  res["grammian"] = std::move(gj);

  PickOptions po;
  po.solve = pf.solve_options();
  po.contractivity_samples = 0;
  po.synthesize = false;

  std::optional<double> bound;
  if (const Json* b = io::optional_field(pl, "bound", "payload")) bound = io::as_double(*b, "payload.bound");
  else if (best > 0.0) bound = carleson_bound(best);

  std::string status = "diagnosed";
  if (bound) {
    require(*bound > 0.0, "'payload.bound' must be positive");
    const std::vector<PickSolution> ss = strong_separation(trunc, *bound, grid, po);
    Json sj;
    sj["bound"] = *bound;
    Json st = Json::array();
    bool all_feasible = true, any_infeasible = false;
    for (const PickSolution& s : ss) {
      st.push_back(to_string(s.report.status));
      all_feasible = all_feasible && s.report.status == SolveStatus::Feasible;
      any_infeasible = any_infeasible || s.report.status == SolveStatus::InfeasibleCertified;
    }
    sj["statuses"] = std::move(st);
    res["strong_separation"] = std::move(sj);
    status = all_feasible ? "strongly-separated" : any_infeasible ? "not-separated" : "inconclusive";

    if (bool_or(pl, "weak", false)) {
      const auto ws = weak_separation(trunc, *bound, grid, po);
      Json wj = Json::array();
      for (const auto& row : ws) {
        Json r = Json::array();
        for (const auto& e : row) r.push_back(e ? Json(to_string(*e)) : Json(nullptr));
        wj.push_back(std::move(r));
      }
      res["weak_separation"] = std::move(wj);
    }
  }

  if (bool_or(pl, "interpolation_constant", false)) {
    MinimalNormOptions mo;
    mo.solve = po.solve;
    mo.width = double_or(pl, "minimal_norm_width", 1e-3);
    require(mo.width > 0.0, "'payload.minimal_norm_width' must be positive");
    const InterpolationConstant ic = interpolation_constant(trunc, grid, mo, 64, pf.seed);
    Json ij;
    ij["value"] = ic.value;
    ij["patterns"] = ic.patterns;
    ij["unknown_count"] = ic.unknown_count;
    res["interpolation_constant"] = std::move(ij);
  }
  return {status, std::move(res)};
}

Outcome run_gamma_check(const io::ProblemFile& pf) {
  const Json& pl = pf.payload;
  OperatorPair pair{io::matrix_from(io::field(pl, "first", "payload"), "payload.first"),
                    io::matrix_from(io::field(pl, "second", "payload"), "payload.second")};
  const double tol = double_or(pl, "tol", 1e-10);
  const GammaCheck u = gamma_unitary_check(pair, tol);
  const GammaCheck iso = gamma_isometry_check(pair, tol);
  Json res;
  res["unitary"] = check_to_json(u);
  res["isometry"] = check_to_json(iso);
  if (u.passed) {
    const auto [u1, u2] = factor_gamma_unitary(pair);
    Json f;
    f["u1"] = io::to_json(u1);
    f["u2"] = io::to_json(u2);
    res["factorization"] = std::move(f);
  }
  if (const Json* pr = io::optional_field(pl, "probe", "payload")) {
    const int degree = static_cast<int>(pr->value("degree", 3));
    const int count = static_cast<int>(pr->value("count", 20));
    const int sup_samples = static_cast<int>(pr->value("sup_samples", 10000));
    require(degree >= 0 && count >= 1 && sup_samples >= 1, "'payload.probe' counts must be positive");
    res["probe"] = probe_to_json(spectral_set_probe(pair, degree, count, pf.seed, 1e-9, sup_samples));
  }
  const std::string status = u.passed ? "gamma-unitary" : iso.passed ? "gamma-isometry" : "neither";
  return {status, std::move(res)};
}

Outcome run_measure_model(const io::ProblemFile& pf) {
  const Json& pl = pf.payload;
  const Json& atoms = io::field(pl, "atoms", "payload");
  if (!atoms.is_array()) throw InputError("'payload.atoms' must be an array");
  AtomicMeasure mu;
  for (std::size_t i = 0; i < atoms.size(); ++i) {
    const GPoint x = io::gpoint_from(atoms[i], "payload.atoms[" + std::to_string(i) + "]");
    mu.atoms.push_back(BGammaPoint::checked(x.s, x.p));
  }
  const Json& w = io::field(pl, "weights", "payload");
  if (!w.is_array()) throw InputError("'payload.weights' must be an array");
  for (std::size_t i = 0; i < w.size(); ++i)
    mu.weights.push_back(io::as_double(w[i], "payload.weights[" + std::to_string(i) + "]"));
  mu.validate();

  const AtomicModel model = atomic_h2_model(mu);
  const GammaCheck iso = gamma_isometry_check(model.pair);
  Json res;
  res["t"] = io::to_json(model.pair.first);
  res["v"] = io::to_json(model.pair.second);
  Json cv = Json::array();
  for (Eigen::Index i = 0; i < model.cyclic_vector.size(); ++i) cv.push_back(io::to_json(model.cyclic_vector(i)));
  res["cyclic_vector"] = std::move(cv);
  res["krylov_rank"] = model.krylov_rank;
  res["isometry"] = check_to_json(iso);
  if (const Json* t = io::optional_field(pl, "toeplitz", "payload")) {
    const std::vector<Matrix> phi = matrices_from(io::field(*t, "phi", "payload.toeplitz"), "payload.toeplitz.phi");
    const double delta = io::as_double(io::field(*t, "delta", "payload.toeplitz"), "payload.toeplitz.delta");
    const double r = io::as_double(io::field(*t, "r", "payload.toeplitz"), "payload.toeplitz.r");
    const PositivityResult pos = toeplitz_positivity(phi, mu, delta, r);
    Json pj;
    pj["positive"] = pos.positive;
    pj["min_eig"] = pos.min_eig;
    res["toeplitz"] = std::move(pj);
  }
  return {iso.passed ? "gamma-isometry" : "failed", std::move(res)};
}

Outcome dispatch(const io::ProblemFile& pf) {
  if (pf.kind == "membership") return run_membership(pf);
  if (pf.kind == "pick") return run_pick(pf);
  if (pf.kind == "corona") return run_corona(pf);
  if (pf.kind == "sequence") return run_sequence(pf);
  if (pf.kind == "gamma-check") return run_gamma_check(pf);
  if (pf.kind == "measure-model") return run_measure_model(pf);
  throw InputError("unknown problem kind '" + pf.kind + "'");
}

// Overrides given on the command line; absent members leave the file alone.
struct Overrides {
  std::optional<int> grid;
  std::optional<double> tol;
  std::optional<long> max_iter;
  std::optional<std::uint64_t> seed;
  std::vector<double> s, p;
  std::optional<long> n, kernels, alpha_samples;
  std::optional<double> bound;
};

void apply(const Overrides& o, io::ProblemFile& pf) {
  if (o.grid) {
    require(*o.grid >= 3, "--grid must be at least 3");
    Json g = pf.grid.is_object() && !pf.grid.contains("alphas") ? pf.grid : io::grid_spec_default();
    g["boundary"] = *o.grid;
    pf.grid = std::move(g);
  }
  if (o.tol) {
    require(*o.tol > 0.0, "--tol must be positive");
    pf.tol = *o.tol;
  }
  if (o.max_iter) {
    require(*o.max_iter >= 1, "--max-iter must be positive");
    pf.max_iter = *o.max_iter;
  }
  if (o.seed) pf.seed = *o.seed;
  if (o.n) pf.payload["n"] = *o.n;
  if (o.kernels) pf.payload["kernels"] = *o.kernels;
  if (o.alpha_samples) pf.payload["alpha_samples"] = *o.alpha_samples;
  if (o.bound) pf.payload["bound"] = *o.bound;
}

void add_common(CLI::App* sub, std::string& in, std::string& out, Overrides& o) {
  sub->add_option("--in", in, "Problem file (default: standard input)");
  sub->add_option("--out", out, "Report file (default: standard output)");
  sub->add_option("--grid", o.grid, "Boundary points of the alpha grid");
  sub->add_option("--tol", o.tol, "Feasibility tolerance");
  sub->add_option("--max-iter", o.max_iter, "Iteration cap");
  sub->add_option("--seed", o.seed, "Random seed");
}

}  // namespace

Json run_problem(const io::ProblemFile& problem) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome oc = dispatch(problem);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  Json report;
  report["format"] = io::kFormat;
  Json tool;
  tool["name"] = io::kToolName;
  tool["version"] = io::kToolVersion;
  report["tool"] = std::move(tool);
  report["kind"] = problem.kind;
  report["seed"] = problem.seed;
  report["problem"] = problem.to_json();
  report["status"] = oc.status;
  report["result"] = std::move(oc.result);
  Json timing;
  timing["wall_seconds"] = secs;
  report["timing"] = std::move(timing);
  return report;
}

int run(const std::vector<std::string>& args, std::istream& in, std::ostream& out, std::ostream& err) {
  CLI::App app{"Interpolation and corona problems on the symmetrized bidisk", "sympick"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(io::kToolVersion));

  std::string in_path, out_path;
  Overrides o;
  std::map<std::string, CLI::App*> subs;
  for (const char* name : {"membership", "pick", "corona", "sequence", "gamma-check", "measure-model"}) {
    CLI::App* sub = app.add_subcommand(name);
    add_common(sub, in_path, out_path, o);
    subs[name] = sub;
  }
  subs["membership"]->add_option("--s", o.s, "s as: re im")->expected(2);
  subs["membership"]->add_option("--p", o.p, "p as: re im")->expected(2);
  subs["membership"]->description("Membership test for G (payload: s, p, circle_grid)");
  subs["pick"]->description("Pick interpolation (payload: nodes, targets, norm_bound)");
  subs["corona"]->description("Toeplitz corona data (payload: nodes, phi_samples, delta)");
  subs["sequence"]->description("Interpolating-sequence diagnostics for a truncation");
  subs["sequence"]->add_option("--n", o.n, "Truncation length");
  subs["sequence"]->add_option("--kernels", o.kernels, "Random admissible kernels");
  subs["sequence"]->add_option("--alpha-samples", o.alpha_samples, "b-kernels on the grid");
  subs["sequence"]->add_option("--bound", o.bound, "Strong separation bound");
  subs["gamma-check"]->description("Gamma-unitary / Gamma-isometry tests for a commuting pair");
  subs["measure-model"]->description("Atomic measure on the distinguished boundary");

  CorpusOptions copts;
  CLI::App* csub = app.add_subcommand("corpus", "Run a directory of problems against expected sidecars");
  csub->add_option("dir", copts.dir, "Corpus directory")->required();
  csub->add_option("--out-dir", copts.out_dir, "Write reports here");
  csub->add_option("--jobs", copts.jobs, "Worker threads (0: all cores)");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForVersion&) {
    out << io::kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitInput;
  }

  try {
    if (csub->parsed()) return corpus(copts, out, err);
    std::string kind;
    for (const auto& [name, sub] : subs)
      if (sub->parsed()) kind = name;

    io::ProblemFile pf;
    if (kind == "membership" && in_path.empty() && (!o.s.empty() || !o.p.empty())) {
      require(o.s.size() == 2 && o.p.size() == 2, "membership needs both --s re im and --p re im");
      pf.kind = kind;
      pf.payload = Json::object();
      pf.payload["s"] = io::to_json(Complex(o.s[0], o.s[1]));
      pf.payload["p"] = io::to_json(Complex(o.p[0], o.p[1]));
      pf.grid = io::grid_spec_default();
    } else {
      std::string text;
      std::string source = in_path;
      if (in_path.empty() || in_path == "-") {
        std::ostringstream ss;
        ss << in.rdbuf();
        text = ss.str();
        source = "standard input";
      } else {
        text = io::read_file(in_path);
      }
      pf = io::parse_problem(text, source);
      if (pf.kind != kind) throw InputError("problem kind '" + pf.kind + "' does not match subcommand '" + kind + "'");
    }
    apply(o, pf);
    const std::string dump = run_problem(pf).dump(2) + "\n";
    if (out_path.empty() || out_path == "-") out << dump;
    else io::write_file_atomic(out_path, dump);
    return kExitOk;
  } catch (const InputError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const NumericalError& e) {
    err << "numerical error: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitNumerical;
  }
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(args, std::cin, std::cout, std::cerr);
}

namespace {

struct Check {
  std::string pointer;
  std::optional<Json> value;
  double tol = 1e-9;
  std::optional<double> max, min;
};

struct Expected {
  std::string status;
  std::vector<Check> checks;
};

Expected expected_from(const Json& j, const std::string& src) {
  Expected e;
  e.status = io::as_string(io::field(j, "status", src), src + ".status");
  if (const Json* cs = io::optional_field(j, "checks", src)) {
    if (!cs->is_array()) throw InputError("'" + src + ".checks' must be an array");
    for (std::size_t i = 0; i < cs->size(); ++i) {
      const std::string path = src + ".checks[" + std::to_string(i) + "]";
      const Json& c = (*cs)[i];
      Check ch;
      ch.pointer = io::as_string(io::field(c, "pointer", path), path + ".pointer");
      try {
        (void)Json::json_pointer(ch.pointer);
      } catch (const nlohmann::json::exception&) {
        throw InputError("'" + path + ".pointer' is not a JSON pointer");
      }
      if (const Json* v = io::optional_field(c, "value", path)) ch.value = *v;
      if (const Json* t = io::optional_field(c, "tol", path)) ch.tol = io::as_double(*t, path + ".tol");
      if (const Json* m = io::optional_field(c, "max", path)) ch.max = io::as_double(*m, path + ".max");
      if (const Json* m = io::optional_field(c, "min", path)) ch.min = io::as_double(*m, path + ".min");
      if (!ch.value && !ch.max && !ch.min) throw InputError("'" + path + "' needs value, min or max");
      e.checks.push_back(std::move(ch));
    }
  }
  return e;
}

std::string check_failure(const Json& report, const Check& c) {
  const Json::json_pointer ptr(c.pointer);
  if (!report.contains(ptr)) return c.pointer + " missing";
  const Json& got = report.at(ptr);
  if (c.value) {
    if (c.value->is_number() && got.is_number()) {
      if (!(std::abs(got.get<double>() - c.value->get<double>()) <= c.tol)) return c.pointer + " = " + got.dump();
    } else if (got != *c.value) {
      return c.pointer + " = " + got.dump();
    }
  }
  if (c.max || c.min) {
    if (!got.is_number()) return c.pointer + " is not a number";
    const double v = got.get<double>();
    if (c.max && !(v <= *c.max)) return c.pointer + " = " + got.dump() + " > max";
    if (c.min && !(v >= *c.min)) return c.pointer + " = " + got.dump() + " < min";
  }
  return {};
}

struct Row {
  std::string name;
  std::string expected;
  std::string status;
  std::string hash;
  std::string note;
  double seconds = 0.0;
  int code = kExitOk;  // kExitOk, kExitInput, kExitNumerical or kExitMismatch
};

}  // namespace

int corpus(const CorpusOptions& opts, std::ostream& out, std::ostream& err) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(opts.dir)) {
    err << "input error: '" << opts.dir << "' is not a directory\n";
    return kExitInput;
  }
  auto ends_with = [](const std::string& s, const std::string& suf) {
    return s.size() >= suf.size() && s.compare(s.size() - suf.size(), suf.size(), suf) == 0;
  };
  std::vector<fs::path> problems;
  for (const auto& entry : fs::directory_iterator(opts.dir)) {
    const std::string name = entry.path().filename().string();
    if (entry.is_regular_file() && ends_with(name, ".json") && !ends_with(name, ".expected.json") &&
        !ends_with(name, ".report.json"))
      problems.push_back(entry.path());
  }
  std::sort(problems.begin(), problems.end());

  // Sidecars are validated before anything runs.
  std::vector<std::optional<Expected>> expected(problems.size());
  for (std::size_t i = 0; i < problems.size(); ++i) {
    fs::path side = problems[i];
    side.replace_extension(".expected.json");
    if (!fs::exists(side)) continue;
    try {
      expected[i] = expected_from(io::parse_json(io::read_file(side.string()), side.string()), side.filename().string());
    } catch (const InputError& e) {
      err << "input error: corrupted expected file: " << e.what() << "\n";
      return kExitInput;
    }
  }
  if (!opts.out_dir.empty()) fs::create_directories(opts.out_dir);

  std::vector<Row> rows(problems.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < problems.size(); i = next++) {
      Row& row = rows[i];
      row.name = problems[i].stem().string();
      row.expected = expected[i] ? expected[i]->status : "-";
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const io::ProblemFile pf = io::parse_problem(io::read_file(problems[i].string()), problems[i].string());
        const Json report = run_problem(pf);
        row.status = report.at("status").get<std::string>();
        row.hash = io::hex64(io::report_hash(report));
        if (!opts.out_dir.empty())
          io::write_file_atomic((fs::path(opts.out_dir) / (row.name + ".report.json")).string(), report.dump(2) + "\n");
        if (!expected[i]) {
          row.code = kExitMismatch;
          row.note = "no expected file";
        } else if (row.status != expected[i]->status) {
          row.code = kExitMismatch;
          row.note = "status";
        } else {
          for (const Check& c : expected[i]->checks) {
            const std::string f = check_failure(report, c);
            if (!f.empty()) {
              row.code = kExitMismatch;
              row.note = f;
              break;
            }
          }
        }
      } catch (const InputError& e) {
        row.code = kExitInput;
        row.status = "input-error";
        row.note = e.what();
      } catch (const std::exception& e) {
        row.code = kExitNumerical;
        row.status = "numerical-error";
        row.note = e.what();
      }
      row.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  int jobs = opts.jobs > 0 ? opts.jobs : static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
  jobs = std::min<int>(jobs, static_cast<int>(std::max<std::size_t>(1, problems.size())));
  {
    std::vector<std::jthread> pool;
    for (int t = 0; t < jobs; ++t) pool.emplace_back(worker);
  }

  int passed = 0, code = kExitOk;
  bool input = false, numerical = false, mismatch = false;
  out << std::left << std::setw(32) << "problem" << std::setw(22) << "expected" << std::setw(22) << "status"
      << std::setw(18) << "hash" << std::setw(10) << "seconds" << "result\n";
  for (const Row& r : rows) {
    out << std::left << std::setw(32) << r.name << std::setw(22) << r.expected << std::setw(22) << r.status
        << std::setw(18) << (r.hash.empty() ? "-" : r.hash) << std::setw(10) << std::fixed << std::setprecision(3)
        << r.seconds << (r.code == kExitOk ? "pass" : "FAIL " + r.note) << "\n";
    passed += r.code == kExitOk;
    input = input || r.code == kExitInput;
    numerical = numerical || r.code == kExitNumerical;
    mismatch = mismatch || r.code == kExitMismatch;
  }
  out << "summary: " << passed << "/" << rows.size() << " passed\n";
  if (input) code = kExitInput;
  else if (numerical) code = kExitNumerical;
  else if (mismatch) code = kExitMismatch;
  return code;
}

}  // namespace sympick::cli
