// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "su3kit/bifurcation.hpp"
#include "su3kit/detect.hpp"
#include "su3kit/foxcoh.hpp"
#include "su3kit/holcalc.hpp"
#include "su3kit/repvariety.hpp"
#include "su3kit/serialize.hpp"
#include "su3kit/su3.hpp"

using namespace su3kit;
namespace fs = std::filesystem;

namespace {

const char* kSigma235 = "<s,t | (s*t)^2 = s^3; s^3 = t^5>";

struct Verdict {
  bool pass = true;
  std::string detail;
};

void need(Verdict& v, bool ok, const std::string& what) {
  if (!ok) {
    v.pass = false;
    v.detail += (v.detail.empty() ? "" : "; ") + what;
  }
}

std::string fmt(double x) {
  char b[32];
  std::snprintf(b, sizeof b, "%.3g", x);
  return b;
}

// greedy match of two eigenvalue lists
double match_dist(std::vector<cplx> a, std::vector<cplx> b) {
  double worst = 0;
  for (const auto& x : a) {
    size_t best = 0;
    for (size_t k = 1; k < b.size(); ++k)
      if (std::abs(b[k] - x) < std::abs(b[best] - x)) best = k;
    worst = std::max(worst, std::abs(b[best] - x));
    b.erase(b.begin() + best);
  }
  return worst;
}

Representation free_rep(const std::vector<Mat3>& imgs, GroupKind g = GroupKind::SU3) {
  std::string gens;
  for (size_t i = 0; i < imgs.size(); ++i) gens += (i ? ",x" : "x") + std::to_string(i);
  return make_representation(parse_presentation("<" + gens + " | >"), g, imgs);
}

Verdict char_poly_identity() {
  std::mt19937_64 rng(1001);
  double worst = 0, conj_gap = 0;
  for (int i = 0; i < 10000; ++i) {
    Mat3 M = oracle::random_su3(rng);
    auto [c2, c1] = char_poly(M);
    conj_gap = std::max(conj_gap, std::abs(c1 - std::conj(c2)));
    auto r = char_poly_roots(c2, c1);
    worst = std::max(worst, match_dist({r.begin(), r.end()}, oracle::eigenvalues(M)));
  }
  Verdict v{true, "max root error " + fmt(worst) + ", |c1 - conj tr| " + fmt(conj_gap)};
  need(v, worst <= 1e-8, "root error above 1e-8");
  need(v, conj_gap <= 1e-12, "linear coefficient is not conj(tr M)");
  return v;
}

Verdict holonomy_derivatives_fd() {
  auto r = derivative_fd_check(100, 256, 2002);
  Verdict v{true, "100 loops at N = 256: first " + fmt(r.max_first_error) + ", second " + fmt(r.max_second_error)};
  need(v, r.max_first_error <= 1e-6, "first-order error above 1e-6");
  need(v, r.max_second_error <= 1e-5, "second-order error above 1e-5");
  return v;
}

Verdict hessian_closed_forms() {
  auto res = hessian_batch_check(20, 3003, 768);
  Verdict v;
  for (const auto& b : res) {
    v.detail += (v.detail.empty() ? "" : ", ") + hess_case_name(b.c) + " " + fmt(b.max_error);
    need(v, b.max_error <= 1e-6, hess_case_name(b.c) + " closed form off by " + fmt(b.max_error) +
                                     " (ordered form " + fmt(b.max_ordered_error) + ")");
  }
  return v;
}

Verdict sigma235_count() {
  auto p = parse_presentation(kSigma235);
  SolveConfig cfg;
  cfg.seed = 7;
  cfg.starts = 256;
  auto classes = deduplicate(solve_representations(p, GroupKind::SU2inSU3, cfg).reps);
  int irr = 0;
  Verdict v;
  for (const auto& c : classes) {
    auto st = classify_stabilizer(c.rep);
    if (st.tag != StabTag::ReducibleU1) continue;
    ++irr;
    auto su2 = cohomology_summary(c.rep, {ModuleTag::Su2Adjoint, {}});
    auto su3 = cohomology_summary(c.rep, {ModuleTag::Su3Adjoint, {}});
    need(v, su2.dimH1 == 0, "su2 H1 = " + std::to_string(su2.dimH1));
    need(v, su3.dimH0 == st.commutant_dim,
         "su3 H0 " + std::to_string(su3.dimH0) + " vs commutant " + std::to_string(st.commutant_dim));
  }
  const int want = oracle::sigma235_irreducible_count();
  need(v, irr == want, "found " + std::to_string(irr) + " irreducible classes, oracle " + std::to_string(want));
  v.detail = std::to_string(irr) + " irreducible classes (oracle " + std::to_string(want) + ") of " +
             std::to_string(classes.size()) + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

Verdict quaternionic_structure() {
  std::vector<Representation> reps;
  SolveConfig cfg;
  cfg.seed = 7;
  cfg.starts = 64;
  for (const char* text : {kSigma235, "<x,y | x*y*x = y*x*y>"}) {
    auto classes = deduplicate(solve_representations(parse_presentation(text), GroupKind::SU2inSU3, cfg).reps);
    int taken = 0;
    for (const auto& c : classes)
      if (classify_stabilizer(c.rep).tag == StabTag::ReducibleU1 && taken < 4) {
        reps.push_back(c.rep);
        ++taken;
      }
  }
  std::mt19937_64 rng(5005);
  for (int n : {2, 3}) {
    std::vector<Mat3> imgs;
    for (int i = 0; i < n; ++i) imgs.push_back(oracle::embed(oracle::random_su2(rng)));
    reps.push_back(free_rep(imgs, GroupKind::SU2inSU3));
  }
  const int per = (1000 + static_cast<int>(reps.size()) - 1) / static_cast<int>(reps.size());
  double zres = 0, bres = 0;
  int trials = 0;
  std::string dims;
  Verdict v;
  for (size_t k = 0; k < reps.size(); ++k) {
    auto q = quaternion_structure_check(reps[k], per, 500 + k);
    trials += q.trials;
    zres = std::max(zres, q.max_cocycle_residual);
    bres = std::max(bres, q.max_coboundary_residual);
    dims += (dims.empty() ? "" : ",") + std::to_string(q.dimH1);
    need(v, q.dimH1 % 4 == 0, "dim H1 = " + std::to_string(q.dimH1));
  }
  need(v, trials >= 1000, "only " + std::to_string(trials) + " trials");
  need(v, zres <= 1e-8 && bres <= 1e-8, "closure residual above 1e-8");
  v.detail = std::to_string(trials) + " samples on " + std::to_string(reps.size()) + " reducibles, residuals " +
             fmt(zres) + "/" + fmt(bres) + ", dim H1 {" + dims + "}" + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

Verdict constructive_machinery() {
  Verdict v;
  auto pi = psi_phi_matrices(Mat2::Identity());
  need(v, pi.psi_diag.norm() == 0.0 && pi.psi_off.norm() == 0.0, "Psi(I) is not zero");

  std::mt19937_64 rng(6006);
  int span_ok = 0, commuting_fail = 0;
  for (int i = 0; i < 1000; ++i) {
    Mat2 x = oracle::random_su2(rng), y = oracle::random_su2(rng);
    auto r = span_checks(x, y);
    span_ok += r.uii_ok && r.uij_ok;
    auto c = span_checks(x, Mat2(x * x * x));
    commuting_fail += !c.uii_ok && !c.uij_ok;
  }
  need(v, span_ok == 1000, "span checks failed on " + std::to_string(1000 - span_ok) + " pairs");
  need(v, commuting_fail == 1000, "commuting pairs passed " + std::to_string(1000 - commuting_fail) + " times");

  int three = 0, irreducible = 0;
  for (int i = 0; i < 1000; ++i) {
    auto rho = free_rep({oracle::random_su3(rng), oracle::random_su3(rng)});
    if (classify_stabilizer(rho).tag != StabTag::Irreducible) continue;
    ++irreducible;
    three += three_eigenvalue_element(rho).found;
  }
  need(v, irreducible == 1000 && three == 1000, "three-eigenvalue element found on " + std::to_string(three) + "/" +
                                                    std::to_string(irreducible) + " irreducible pairs");

  int fired = 0;
  double cob_max = 0;
  for (int i = 0; i < 1000; ++i) {
    auto rho = free_rep({oracle::random_su3(rng), oracle::random_su3(rng)});
    auto r = find_detecting_loop(rho, coboundary_hom(rho, oracle::random_su3_alg(rng)));
    fired += r.found;
    cob_max = std::max(cob_max, r.max_abs_tested);
  }
  need(v, fired == 0, "coboundary detected " + std::to_string(fired) + " times");

  int detected = 0, trials = 200;
  std::normal_distribution<double> nd;
  for (int i = 0; i < trials; ++i) {
    auto rho = free_rep({oracle::random_su3(rng), oracle::random_su3(rng)});
    CoefficientModule mod{ModuleTag::Su3Adjoint, {}};
    Eigen::MatrixXd H = h1_basis(rho, mod);
    Eigen::VectorXd c(H.cols());
    for (int k = 0; k < c.size(); ++k) c(k) = nd(rng);
    DetectConfig cfg;
    cfg.family_k = 0;   // words of length <= 4 only
    auto r = find_detecting_loop(rho, crossed_from_cochain(rho, mod, H * c), cfg);
    detected += r.found && r.word.size() <= 4;
  }
  need(v, detected == trials, "generic cocycles detected " + std::to_string(detected) + "/" + std::to_string(trials));
  v.detail = "span " + std::to_string(span_ok) + "/1000, commuting fail " + std::to_string(commuting_fail) +
             "/1000, three-eigenvalue " + std::to_string(three) + "/1000, coboundary fired " + std::to_string(fired) +
             " (max " + fmt(cob_max) + "), generic detected " + std::to_string(detected) + "/" +
             std::to_string(trials) + (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

EigenPath grid_path(int n) {
  EigenPath p;
  for (int k = 0; k < n; ++k) p.s.push_back(static_cast<double>(k) / (n - 1));
  return p;
}

EigenPath sub_path(const EigenPath& p, size_t lo, size_t hi) {
  EigenPath q;
  q.s.assign(p.s.begin() + lo, p.s.begin() + hi + 1);
  for (const auto& b : p.branches)
    q.branches.push_back({std::vector<double>(b.lambda.begin() + lo, b.lambda.begin() + hi + 1), b.multiplicity});
  return q;
}

Verdict wall_crossing_model() {
  Verdict v;
  std::mt19937_64 rng(7007);
  const double delta = 0.05;
  int additive = 0;
  for (int i = 0; i < 1000; ++i) {
    std::uniform_int_distribution<int> nb(1, 4), mult(1, 3), n(6, 30), sp(1, 20);
    std::uniform_real_distribution<double> U(2 * delta, 1.0);
    std::bernoulli_distribution coin(0.5);
    const int split = sp(rng);
    EigenPath p = grid_path(std::max(split + 2, n(rng)));
    const size_t last = p.s.size() - 1;
    const int B = nb(rng);
    for (int b = 0; b < B; ++b) {
      EigenBranch br;
      br.multiplicity = mult(rng);
      for (size_t k = 0; k < p.s.size(); ++k) br.lambda.push_back((coin(rng) ? 1 : -1) * U(rng));
      if (coin(rng)) br.lambda[split] = 0.0;
      p.branches.push_back(br);
    }
    const int lhs = spectral_flow(sub_path(p, 0, split), delta) + spectral_flow(sub_path(p, split, last), delta);
    additive += lhs == spectral_flow(p, delta) - kernel_dim(p, split);
  }
  need(v, additive == 1000, "additivity held on " + std::to_string(additive) + "/1000 paths");

  std::vector<ModelFamily> fams;
  for (std::uint64_t s = 1; s <= 100; ++s) fams.push_back(random_family(1000 + s));
  auto res = audit_families(fams);
  int closed = 0, open = 0, rule_i = 0, rule_ii = 0, invariant = 0;
  for (size_t f = 0; f < fams.size(); ++f) {
    const auto& r = res[f];
    invariant += r.check_c && (r.minus.lambda_prime - r.minus.lambda_dp) == (r.plus.lambda_prime - r.plus.lambda_dp);
    for (size_t i = 0; i < r.arcs.size(); ++i) {
      const auto& a = r.arcs[i];
      if (fams[f].arcs[i].closed) {
        ++closed;
        rule_i += a.b == 0;
      } else {
        ++open;
        rule_ii += 2 * a.b == a.orientation * a.sf_endpoints;
      }
    }
  }
  need(v, rule_i == closed, "closed-arc rule failed");
  need(v, rule_ii == open, "open-arc rule failed");
  need(v, invariant == 100, "invariance held on " + std::to_string(invariant) + "/100 families");

  auto fig = wall_crossing_audit(family_from_json(json::parse(read_file(std::string(SU3KIT_DATA) + "/three_arcs.json"))));
  std::string bs;
  std::vector<int> got;
  for (const auto& a : fig.arcs) {
    got.push_back(a.b);
    bs += (bs.empty() ? "" : ",") + std::to_string(a.b);
  }
  need(v, fig.ok && got == std::vector<int>{0, 1, 2}, "three-arc scenario b = {" + bs + "}");
  v.detail = "additivity " + std::to_string(additive) + "/1000, closed arcs " + std::to_string(rule_i) + "/" +
             std::to_string(closed) + ", open arcs " + std::to_string(rule_ii) + "/" + std::to_string(open) +
             ", invariant " + std::to_string(invariant) + "/100, three-arc b {" + bs + "}" +
             (v.detail.empty() ? "" : "; " + v.detail);
  return v;
}

int shell(const std::string& cmd) {
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

// every subcommand, run from inside dir so artifacts only carry relative paths
std::vector<int> cli_suite(const fs::path& dir, const std::string& env) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  const std::string cli = SU3KIT_CLI, data = SU3KIT_DATA;
  const std::vector<std::string> cmds = {
      "parse --in " + data + "/sigma235.grp --out parse.json",
      "solve --group su2 --presentation " + data + "/sigma235.grp --seed 7 --out solve.json",
      "cohomology --reps solve.json --out cohomology.json",
      "detect --reps solve.json --out detect.json",
      "span-check --pair " + data + "/pair.json --blocks 2 --out span.json",
      "holcalc-check --seed 7 --out holcalc.json",
      "bifurcate --scenario " + data + "/pitchfork.json --csv pitchfork.csv --out pitchfork.json",
      "bifurcate --scenario " + data + "/three_arcs.json --csv three_arcs.csv --out three_arcs.json",
      "report solve.json cohomology.json detect.json span.json holcalc.json pitchfork.json three_arcs.json "
      "--csv report.csv --out report.md"};
  std::vector<int> codes;
  for (const auto& c : cmds)
    codes.push_back(shell("cd " + dir.string() + " && " + env + " " + cli + " " + c + " 2>/dev/null"));
  return codes;
}

Verdict reproducibility() {
  const fs::path base = fs::temp_directory_path() / ("su3kit_accept_" + std::to_string(getpid()));
  auto c1 = cli_suite(base / "run1", "");
  auto c2 = cli_suite(base / "run2", "SU3KIT_THREADS=3");
  Verdict v;
  need(v, c1 == c2, "exit codes differ between runs");
  int files = 0, same = 0;
  for (const auto& e : fs::directory_iterator(base / "run1")) {
    ++files;
    const fs::path other = base / "run2" / e.path().filename();
    same += fs::exists(other) && read_file(e.path().string()) == read_file(other.string());
  }
  int n2 = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(base / "run2")) ++n2;
  need(v, files == 12 && n2 == files, "expected 12 artifacts, got " + std::to_string(files) + "/" + std::to_string(n2));
  need(v, same == files, std::to_string(files - same) + " artifacts differ");
  std::string codes;
  for (int c : c1) codes += (codes.empty() ? "" : ",") + std::to_string(c);
  v.detail = std::to_string(same) + "/" + std::to_string(files) + " artifacts byte-identical, exit codes {" + codes +
             "}" + (v.detail.empty() ? "" : "; " + v.detail);
  fs::remove_all(base);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    double budget_s;
    std::function<Verdict()> run;
  };
  const std::vector<Criterion> all = {
      {"characteristic polynomial identity", 5, char_poly_identity},
      {"holonomy derivative formulas", 30, holonomy_derivatives_fd},
      {"Hessian closed forms", 60, hessian_closed_forms},
      {"binary icosahedral SU(2) count", 120, sigma235_count},
      {"quaternionic structure", 30, quaternionic_structure},
      {"constructive detection machinery", 120, constructive_machinery},
      {"wall-crossing model", 60, wall_crossing_model},
      {"CLI reproducibility", 600, reproducibility}};
  int failed = 0;
  for (size_t i = 0; i < all.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Verdict v;
    try {
      v = all[i].run();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    need(v, secs < all[i].budget_s, "took " + fmt(secs) + " s, budget " + fmt(all[i].budget_s) + " s");
    failed += !v.pass;
    std::cout << (v.pass ? "PASS" : "FAIL") << " [" << i + 1 << "] " << all[i].name << " (" << fmt(secs)
              << " s): " << v.detail << std::endl;
  }
  return failed == 0 ? 0 : 1;
}
