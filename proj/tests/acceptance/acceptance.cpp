// Acceptance checks 1-12. Prints one PASS/FAIL line per criterion and exits
// nonzero if any fails. `acceptance 3 5` runs a subset.

#include <algorithm>
#include <array>
#include <limits>
#include <numbers>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "sympick/cli.hpp"
#include "sympick/corona.hpp"
#include "sympick/gamma_ops.hpp"
#include "sympick/hermitian.hpp"
#include "sympick/io.hpp"
#include "sympick/pick.hpp"
#include "sympick/random.hpp"
#include "sympick/sequence_diag.hpp"

using namespace sympick;

namespace {

constexpr double kTol = 1e-8;

struct Outcome {
  bool ok = true;
  std::string detail;
};

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

NodeSet random_nodes(Rng& rng, int n, double r) {
  for (;;) {
    std::vector<GPoint> pts;
    for (int i = 0; i < n; ++i) pts.push_back(symmetrize(random_disk_point(rng, r), random_disk_point(rng, r)));
    try {
      return NodeSet(std::move(pts));
    } catch (const InputError&) {
    }
  }
}

// Unitary colligation with `states` state coordinates on random grid alphas.
RealizedFunction random_grid_function(Rng& rng, const AlphaGrid& grid, int ext, int states) {
  const Matrix v = random_unitary(rng, ext + states);
  Colligation c;
  c.a = v.topLeftCorner(ext, ext);
  c.b = v.topRightCorner(ext, states);
  c.c = v.bottomLeftCorner(states, ext);
  c.d = v.bottomRightCorner(states, states);
  c.grid = grid;
  c.multiplicities.assign(grid.alphas.size(), 0);
  std::uniform_int_distribution<int> pick(0, grid.size() - 1);
  for (int k = 0; k < states; ++k) ++c.multiplicities[static_cast<std::size_t>(pick(rng))];
  return make_realized(std::move(c));
}

// Shared record for the mutual-exclusion check.
struct ExclusionLog {
  struct Entry {
    FeasibilityTarget target;
    SolveReport report;
  };
  std::vector<Entry> entries;
  AlphaGrid grid = AlphaGrid::standard();
  int corpus_reports = 0;
  int corpus_both = 0;

  void add(const FeasibilityTarget& t, const SolveReport& r) { entries.push_back({t, r}); }
};

ExclusionLog g_log;

// 1. |phi(alpha, symmetrize(z, z)) + z| <= 1e-12.
Outcome coordinate_identity() {
  Rng rng(101);
  std::vector<Complex> zs, alphas;
  for (int i = 0; i < 1000; ++i) zs.push_back(random_disk_point(rng));
  for (int i = 0; i < 100; ++i) alphas.push_back(random_disk_point(rng));
  double worst = 0.0;
  for (Complex z : zs) {
    const GPoint x = symmetrize(z, z);
    for (Complex a : alphas) worst = std::max(worst, std::abs(phi(a, x) + z));
  }
  return {worst <= 1e-12, fmt("1000 z x 100 alpha, max error %.3g", worst)};
}

// 2. Membership soundness.
Outcome membership_soundness() {
  Rng rng(202);
  int bad_in = 0, bad_out = 0;
  for (int i = 0; i < 10000; ++i) {
    const GPoint x = symmetrize(random_disk_point(rng, 0.99), random_disk_point(rng, 0.99));
    bad_in += !membership(x).is_member;
  }
  std::uniform_real_distribution<double> rad(1.01, 2.0);
  for (int i = 0; i < 1000; ++i) {
    const Complex big = std::polar(rad(rng), 2.0 * std::numbers::pi * std::uniform_real_distribution<double>()(rng));
    const Complex other = random_disk_point(rng, 1.5);
    bad_out += membership(GPoint{big + other, big * other}).is_member;
  }
  return {bad_in == 0 && bad_out == 0,
          fmt("10000 interior points, %d rejected; 1000 exterior points, %d accepted", bad_in, bad_out)};
}

// 3. Two-node diagonal problems against the disk Pick matrix.
Outcome two_point_oracle() {
  Rng rng(303);
  const AlphaGrid grid = AlphaGrid::standard();
  PickOptions opts;
  opts.synthesize = false;
  opts.contractivity_samples = 0;
  int unknown = 0, disagree = 0, feasible = 0, infeasible = 0;
  for (int t = 0; t < 200; ++t) {
    const Complex z1 = random_disk_point(rng, 0.95), z2 = random_disk_point(rng, 0.95);
    const Complex w1 = random_disk_point(rng), w2 = random_disk_point(rng);
    const Complex z[2] = {z1, z2}, w[2] = {w1, w2};
    Matrix oracle(2, 2);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) oracle(a, b) = (1.0 - w[a] * std::conj(w[b])) / (1.0 - z[a] * std::conj(z[b]));
    const bool oracle_ok = min_eigenvalue(oracle) >= 0.0;
    const PickProblem p = PickProblem::scalar(NodeSet({symmetrize(z1, z1), symmetrize(z2, z2)}), {w1, w2});
    const PickSolution s = solve_pick(p, grid, opts);
    g_log.add(assemble_pick_target(p), s.report);
    switch (s.report.status) {
      case SolveStatus::Unknown: ++unknown; break;
      case SolveStatus::Feasible: ++feasible; disagree += !oracle_ok; break;
      case SolveStatus::InfeasibleCertified: ++infeasible; disagree += oracle_ok; break;
    }
  }
  const double rate = unknown / 200.0;
  return {disagree == 0 && rate <= 0.05,
          fmt("200 problems: %d feasible, %d infeasible, %d unknown (%.1f%%), %d disagreements", feasible, infeasible,
              unknown, 100.0 * rate, disagree)};
}

// 4. Minimal norm of the diagonal two-point problem.
Outcome minimal_norm_closed_form() {
  const PickProblem p = PickProblem::scalar(NodeSet({GPoint{1.0, 0.25}, GPoint{-1.0, 0.25}}), {-0.5, 0.5});
  const MinimalNormResult r = minimal_norm(p, AlphaGrid::standard());
  return {std::abs(r.value - 1.0) <= 1e-3,
          fmt("value %.6f (bracket [%.6f, %.6f], %d solves)", r.value, r.lower, r.upper, r.solves)};
}

// 5. Synthesized interpolants for planted feasible data.
Outcome realization_round_trip() {
  Rng rng(505);
  const AlphaGrid grid = AlphaGrid::standard();
  PickOptions opts;
  opts.contractivity_samples = 10000;
  int done = 0, not_feasible = 0, failures = 0;
  double worst_node = 0.0, worst_norm = 0.0;
  std::uniform_real_distribution<double> scale(0.5, 0.95);
  std::uniform_int_distribution<int> count(2, 4), states(1, 4);
  for (int attempt = 0; done < 100 && attempt < 150; ++attempt) {
    const NodeSet nodes = random_nodes(rng, count(rng), 0.8);
    const RealizedFunction g = random_grid_function(rng, grid, 1, states(rng));
    const double t = scale(rng);
    std::vector<Complex> w;
    for (const GPoint& x : nodes.points()) w.push_back(t * transfer_eval(g, x)(0, 0));
    const PickProblem p = PickProblem::scalar(nodes, w);
    opts.sample_seed = static_cast<std::uint64_t>(attempt) + 1;
    try {
      const PickSolution s = solve_pick(p, grid, opts);
      g_log.add(assemble_pick_target(p), s.report);
      if (s.report.status != SolveStatus::Feasible) {
        ++not_feasible;
        continue;
      }
      ++done;
      worst_node = std::max(worst_node, s.node_error);
      worst_norm = std::max(worst_norm, s.sampled_norm);
      failures += s.node_error > 1e-7 || s.sampled_norm > 1.0 + 1e-8;
    } catch (const NumericalError&) {
      ++done;
      ++failures;
    }
  }
  return {done == 100 && failures == 0 && not_feasible == 0,
          fmt("%d feasible solves (%d planted instances not feasible), max node error %.3g, max sampled norm %.12f",
              done, not_feasible, worst_node, worst_norm)};
}

// 6. Planted CP targets.
Outcome planted_cp() {
  Rng rng(606);
  const AlphaGrid grid = AlphaGrid::standard();
  std::uniform_int_distribution<int> count(2, 5), block(1, 2), terms(1, 6), pick(0, grid.size() - 1);
  int ok = 0;
  int missed[3] = {0, 0, 0};
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const NodeSet nodes = random_nodes(rng, count(rng), 0.85);
    const int d = block(rng);
    const Eigen::Index n = static_cast<Eigen::Index>(nodes.size()) * d;
    const auto coeffs = coefficient_matrices(grid, nodes);
    Matrix j = Matrix::Zero(n, n);
    const int k = terms(rng);
    for (int m = 0; m < k; ++m) {
      const Matrix g = random_gaussian_matrix(rng, n, 1 + static_cast<Eigen::Index>(rng() % static_cast<unsigned>(n)));
      j += expand_blocks(coeffs[static_cast<std::size_t>(pick(rng))], d).cwiseProduct(g * g.adjoint());
    }
    const FeasibilityTarget target(nodes, j, d);
    const SolveReport r = solve(target, grid);
    g_log.add(target, r);
    const double res = r.blocks ? residual(target, *r.blocks) : std::numeric_limits<double>::infinity();
    if (r.status == SolveStatus::Feasible && res <= kTol) ++ok;
    else
      ++missed[static_cast<int>(r.status)];
    worst = std::max(worst, res);
  }
  return {ok == 100, fmt("%d/100 feasible with residual <= 1e-8 (misses: %d infeasible, %d unknown), max residual %.3g",
                         ok, missed[1], missed[2], worst)};
}

// 7. No run holds both a witness and a verified certificate.
Outcome mutual_exclusion() {
  if (g_log.entries.empty()) {
    Rng rng(707);
    const AlphaGrid& grid = g_log.grid;
    for (int t = 0; t < 20; ++t) {
      const NodeSet nodes = random_nodes(rng, 3, 0.8);
      std::vector<Complex> w;
      for (int i = 0; i < 3; ++i) w.push_back(random_disk_point(rng));
      const PickProblem p = PickProblem::scalar(nodes, w);
      g_log.add(assemble_pick_target(p), solve(assemble_pick_target(p), grid));
    }
  }
  int both = 0, feasible = 0, certified = 0, probe_hits = 0;
  for (const auto& e : g_log.entries) {
    const bool witness = e.report.blocks && residual(e.target, *e.report.blocks) <= kTol;
    const bool cert = e.report.certificate && verify_certificate(e.target, *e.report.certificate, g_log.grid, kTol);
    both += witness && cert;
    certified += cert;
    if (witness) {
      ++feasible;
      // A dual search on a solved instance must come back empty.
      const auto k = dual_probe(e.target, g_log.grid);
      probe_hits += k && verify_certificate(e.target, *k, g_log.grid, kTol);
    }
  }
  const bool ok = both == 0 && probe_hits == 0 && g_log.corpus_both == 0;
  return {ok, fmt("%zu runs (%d witnesses, %d certificates): %d with both, %d dual-probe hits on witnessed runs; "
                  "%d corpus reports, %d with both",
                  g_log.entries.size(), feasible, certified, both, probe_hits, g_log.corpus_reports, g_log.corpus_both)};
}

// 8. Planted corona data with a known contractive solution.
Outcome corona_planted() {
  Rng rng(808);
  const AlphaGrid grid = AlphaGrid::standard();
  CoronaOptions opts;
  opts.contractivity_samples = 10000;
  std::uniform_real_distribution<double> scale(0.6, 0.9), delta(0.2, 0.9);
  std::uniform_int_distribution<int> count(2, 4), dim(2, 3), states(1, 3);
  int ok = 0;
  double worst_res = 0.0, worst_norm = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d1 = dim(rng);
    const NodeSet nodes = random_nodes(rng, count(rng), 0.8);
    RealizedFunction f = random_grid_function(rng, grid, d1, states(rng));
    f.in = 1;  // first column of a contractive d1 x d1 function
    const double s = scale(rng), dl = delta(rng);
    CoronaProblem p;
    p.nodes = nodes;
    p.delta = dl;
    bool degenerate = false;
    for (const GPoint& x : nodes.points()) {
      const Vector psi0 = s * transfer_eval(f, x).col(0);
      if (psi0.norm() < 0.2) degenerate = true;
      // Phi psi0 = sqrt(delta); the second term is orthogonal to psi0.
      const Vector r = random_gaussian_matrix(rng, d1, 1).col(0) * 0.5;
      const Vector r_perp = r - psi0 * (psi0.dot(r) / psi0.squaredNorm());
      const Vector row = std::sqrt(dl) * psi0 / psi0.squaredNorm() + r_perp;
      p.phi_samples.push_back(row.adjoint());
    }
    if (degenerate) {
      --t;
      continue;
    }
    opts.sample_seed = static_cast<std::uint64_t>(t) + 1;
    try {
      const CoronaSolution sol = solve_corona(p, grid, opts);
      g_log.add(assemble_corona_target(p), sol.report);
      if (sol.report.status == SolveStatus::Feasible && sol.node_residual <= 1e-7 &&
          sol.sampled_norm <= 1.0 + 1e-8)
        ++ok;
      if (sol.psi) {
        worst_res = std::max(worst_res, sol.node_residual);
        worst_norm = std::max(worst_norm, sol.sampled_norm);
      }
    } catch (const NumericalError&) {
    }
  }
  return {ok == 50, fmt("%d/50 feasible with node residual <= 1e-7 and sampled norm <= 1 + 1e-8 "
                        "(max residual %.3g, max norm %.12f)",
                        ok, worst_res, worst_norm)};
}

// 9. Carleson-separated truncations are strongly separated at the disk bound.
Outcome carleson_implication() {
  Rng rng(909);
  const AlphaGrid grid = AlphaGrid::standard();
  PickOptions opts;
  opts.synthesize = false;
  opts.contractivity_samples = 0;
  std::uniform_int_distribution<int> count(2, 4);
  int ok = 0, solves = 0, failed_solves = 0;
  for (int t = 0; t < 50; ++t) {
    const SequenceTruncation trunc{random_nodes(rng, count(rng), 0.75)};
    double best = 0.0;
    for (Complex a : grid.alphas) best = std::max(best, carleson_condition(trunc, a));
    if (best < 0.05) {
      --t;
      continue;
    }
    const double bound = carleson_bound(best);
    bool all = true;
    for (const PickSolution& s : strong_separation(trunc, bound, grid, opts)) {
      ++solves;
      const bool f = s.report.status == SolveStatus::Feasible;
      failed_solves += !f;
      all = all && f;
    }
    ok += all;
  }
  return {ok == 50, fmt("%d/50 truncations strongly separated at (1 + d)/d^2 (%d solves, %d not feasible)", ok,
                        solves, failed_solves)};
}

// 10. Normalized Grammians of sampled kernels lie in [1/M^2, M^2].
Outcome grammian_sandwich() {
  Rng rng(1010);
  const AlphaGrid grid = AlphaGrid::standard();
  MinimalNormOptions mo;
  mo.width = 1e-3;
  std::uniform_int_distribution<int> count(2, 3);
  int ok = 0, kernels_checked = 0;
  double min_slack = std::numeric_limits<double>::infinity();
  for (int t = 0; t < 20; ++t) {
    const SequenceTruncation trunc{random_nodes(rng, count(rng), 0.7)};
    const InterpolationConstant ic = interpolation_constant(trunc, grid, mo, 64, static_cast<std::uint64_t>(t));
    const double m2 = ic.value * ic.value;
    const GrammianReport gr =
        grammian_bounds(trunc, sample_kernels(trunc.nodes, grid, 8, 24, static_cast<std::uint64_t>(t)), grid);
    kernels_checked += gr.kernel_count;
    const double lo = gr.worst_lower - (1.0 / m2 - 1e-6);
    const double hi = (m2 + 1e-6) - gr.worst_upper;
    min_slack = std::min({min_slack, lo, hi});
    ok += lo >= 0.0 && hi >= 0.0;
  }
  return {ok == 20, fmt("%d/20 truncations inside the sandwich (%d kernels, min slack %.3g)", ok, kernels_checked,
                        min_slack)};
}

// 11. Gamma-unitary / Gamma-isometry characterizations and Toeplitz monotonicity.
Outcome gamma_characterizations() {
  Rng rng(1111);
  std::uniform_int_distribution<int> dim(1, 6);
  int unitary_fail = 0, nonexample_pass = 0, model_fail = 0, mono_fail = 0;
  for (int t = 0; t < 1000; ++t) {
    const int n = dim(rng);
    const Matrix q = random_unitary(rng, n);
    Vector a(n), b(n);
    for (int i = 0; i < n; ++i) {
      a(i) = random_unimodular(rng);
      b(i) = random_unimodular(rng);
    }
    unitary_fail += !gamma_unitary_check(symmetrized_pair(q * a.asDiagonal() * q.adjoint(),
                                                          q * b.asDiagonal() * q.adjoint()))
                         .passed;
  }
  std::uniform_real_distribution<double> off(0.05, 0.5);
  for (int t = 0; t < 1000; ++t) {
    const int n = dim(rng);
    const Matrix q = random_unitary(rng, n);
    Vector s(n), p(n);
    for (int i = 0; i < n; ++i) {
      const Complex z1 = random_unimodular(rng), z2 = random_unimodular(rng);
      s(i) = z1 + z2;
      p(i) = z1 * z2;
    }
    const int k = static_cast<int>(rng() % static_cast<unsigned>(n));
    const Complex u = random_unimodular(rng);
    if (t % 2 == 0) {
      // |p| != 1 at one joint eigenvalue.
      const Complex z1 = random_unimodular(rng);
      const Complex z2 = (1.0 + (t % 4 == 0 ? off(rng) : -off(rng))) * u;
      s(k) = z1 + z2;
      p(k) = z1 * z2;
    } else {
      // |p| = 1 and s = conj(s) p but |s| > 2.
      p(k) = u * u;
      s(k) = (2.0 + off(rng)) * u;
    }
    const OperatorPair pair{q * s.asDiagonal() * q.adjoint(), q * p.asDiagonal() * q.adjoint()};
    nonexample_pass += gamma_unitary_check(pair).passed || gamma_isometry_check(pair).passed;
  }
  std::uniform_real_distribution<double> wt(0.05, 1.0);
  std::uniform_int_distribution<int> atoms(1, 6);
  for (int t = 0; t < 100; ++t) {
    AtomicMeasure mu;
    const int m = atoms(rng);
    for (int k = 0; k < m; ++k) {
      mu.atoms.push_back(BGammaPoint::from_angles(2.0 * std::numbers::pi * wt(rng), 2.0 * std::numbers::pi * wt(rng)));
      mu.weights.push_back(wt(rng));
    }
    try {
      model_fail += !gamma_isometry_check(atomic_h2_model(mu).pair).passed;
    } catch (const InputError&) {
      ++model_fail;
    }
  }
  for (int t = 0; t < 100; ++t) {
    AtomicMeasure mu;
    const int m = atoms(rng);
    for (int k = 0; k < m; ++k) {
      mu.atoms.push_back(BGammaPoint::from_angles(2.0 * std::numbers::pi * wt(rng), 2.0 * std::numbers::pi * wt(rng)));
      mu.weights.push_back(wt(rng));
    }
    const Complex c0 = random_disk_point(rng), c1 = random_disk_point(rng), c2 = random_disk_point(rng);
    const Complex a0 = random_disk_point(rng);
    const auto phi_fn = [&](const GPoint& x) {
      Matrix row(1, 2);
      row << c0 + c1 * phi(a0, x), c2 * x.p;
      return row;
    };
    const double r = std::array<double, 3>{0.5, 0.9, 0.99}[static_cast<std::size_t>(t % 3)];
    double prev = std::numeric_limits<double>::infinity();
    bool prev_positive = true;
    for (double d : {0.0, 0.05, 0.1, 0.2, 0.4, 0.8, 1.6}) {
      const PositivityResult pr = toeplitz_positivity(phi_fn, mu, d, r);
      if (pr.min_eig > prev + 1e-12 || (pr.positive && !prev_positive)) ++mono_fail;
      prev = pr.min_eig;
      prev_positive = pr.positive;
    }
  }
  return {unitary_fail == 0 && nonexample_pass == 0 && model_fail == 0 && mono_fail == 0,
          fmt("symmetrized pairs failing %d/1000, non-examples passing %d/1000, atomic models failing %d/100, "
              "monotonicity violations %d/100",
              unitary_fail, nonexample_pass, model_fail, mono_fail)};
}

// 12. Re-running the golden corpus reproduces every report hash.
Outcome corpus_determinism() {
  namespace fs = std::filesystem;
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(SYMPICK_CORPUS_DIR)) {
    const std::string n = e.path().filename().string();
    if (n.ends_with(".json") && !n.ends_with(".expected.json") && !n.ends_with(".report.json")) files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  int same = 0, errors = 0;
  for (const fs::path& f : files) {
    try {
      const io::ProblemFile pf = io::parse_problem(io::read_file(f.string()), f.string());
      const io::Json a = cli::run_problem(pf);
      const io::Json b = cli::run_problem(pf);
      same += io::report_hash(a) == io::report_hash(b);
      ++g_log.corpus_reports;
      const io::Json& res = a.at("result");
      if (res.contains("solve") && res["solve"].contains("blocks") && res["solve"].contains("certificate"))
        ++g_log.corpus_both;
    } catch (const std::exception& e) {
      ++errors;
      std::cerr << f.filename().string() << ": " << e.what() << "\n";
    }
  }
  return {!files.empty() && errors == 0 && same == static_cast<int>(files.size()),
          fmt("%zu corpus problems, %d hash-identical reruns, %d errors", files.size(), same, errors)};
}

}  // namespace

int main(int argc, char** argv) {
  struct Criterion {
    int id;
    const char* name;
    double budget;  // seconds; 0 means no runtime bound
    std::function<Outcome()> run;
  };
  // 12 runs before 7 so the corpus reports feed the exclusion check.
  const std::vector<Criterion> all = {
      {1, "coordinate-function identity", 1.0, coordinate_identity},
      {2, "membership soundness", 10.0, membership_soundness},
      {3, "two-point Pick oracle agreement", 300.0, two_point_oracle},
      {4, "minimal-norm closed form", 30.0, minimal_norm_closed_form},
      {5, "realization round-trip", 600.0, realization_round_trip},
      {6, "planted CP instances", 300.0, planted_cp},
      {8, "planted corona problems", 600.0, corona_planted},
      {9, "Carleson implication", 600.0, carleson_implication},
      {10, "Grammian sandwich", 900.0, grammian_sandwich},
      {11, "Gamma-operator characterizations", 60.0, gamma_characterizations},
      {12, "corpus determinism", 0.0, corpus_determinism},
      {7, "mutual exclusion", 0.0, mutual_exclusion},
  };
  std::set<int> only;
  for (int i = 1; i < argc; ++i) only.insert(std::atoi(argv[i]));

  int failed = 0, ran = 0;
  for (const Criterion& c : all) {
    if (!only.empty() && !only.count(c.id)) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = elapsed(t0);
    const bool in_time = c.budget <= 0.0 || secs < c.budget;
    const bool pass = o.ok && in_time;
    failed += !pass;
    std::cout << "criterion " << (c.id < 10 ? " " : "") << c.id << (pass ? "  PASS  " : "  FAIL  ") << c.name << ": "
              << o.detail << " [" << fmt("%.2f s", secs);
    if (c.budget > 0.0) std::cout << fmt(" / limit %.0f s", c.budget);
    if (!in_time) std::cout << ", over the runtime limit";
    std::cout << "]" << std::endl;
  }
  std::cout << (ran - failed) << "/" << ran << " criteria passed" << std::endl;
  return failed == 0 ? 0 : 1;
}
