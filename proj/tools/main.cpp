#include <omp.h>

#include <CLI11.hpp>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "su3kit/bifurcation.hpp"
#include "su3kit/detect.hpp"
#include "su3kit/foxcoh.hpp"
#include "su3kit/holcalc.hpp"
#include "su3kit/presentation.hpp"
#include "su3kit/repvariety.hpp"
#include "su3kit/serialize.hpp"

using namespace su3kit;

namespace {

enum Exit { kOk = 0, kInvalid = 2, kAudit = 3, kNotFound = 4 };

// flat key=value settings; each value keeps the JSON type of its default
class Config {
 public:
  Config() {
    v_ = {{"seed", json(std::uint64_t{0})},
          {"starts", 256},
          {"max_iter", 300},
          {"tol_residual", 1e-10},
          {"null_tol", 1e-6},
          {"coh_tol", 1e-8},
          {"dedup_tol", 1e-6},
          {"quat_trials", 100},
          {"detect_max_len", 4},
          {"family_k", 12},
          {"detect_tol", 1e-9},
          {"three_eig_max_len", 4},
          {"span_tol", 1e-8},
          {"kernel_max_len", 8},
          {"fd_samples", 100},
          {"N", 256},
          {"hess_samples", 5},
          {"hess_N", 768},
          {"hess_tol", 1e-6},
          {"points", 41}};
  }

  void set(const std::string& key, const std::string& value) {
    auto it = v_.find(key);
    if (it == v_.end()) throw std::invalid_argument("unknown config key '" + key + "'");
    size_t used = 0;
    try {
      if (it->second.is_number_unsigned()) {
        if (!value.empty() && value[0] == '-') throw std::invalid_argument("negative");
        it->second = std::stoull(value, &used);
      } else if (it->second.is_number_integer()) {
        it->second = std::stoll(value, &used);
      } else {
        it->second = std::stod(value, &used);
      }
    } catch (const std::exception&) {
      used = std::string::npos;
    }
    if (used != value.size()) throw std::invalid_argument("bad value '" + value + "' for config key '" + key + "'");
  }

  void set_pair(const std::string& kv) {
    auto eq = kv.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("expected key=value, got '" + kv + "'");
    set(trim(kv.substr(0, eq)), trim(kv.substr(eq + 1)));
  }

  void load(const std::string& path) {
    std::istringstream in(read_file(path));
    std::string line;
    int n = 0;
    while (std::getline(in, line)) {
      ++n;
      auto h = line.find('#');
      if (h != std::string::npos) line.resize(h);
      line = trim(line);
      if (line.empty()) continue;
      try {
        set_pair(line);
      } catch (const std::invalid_argument& e) {
        throw std::invalid_argument(path + ":" + std::to_string(n) + ": " + e.what());
      }
    }
  }

  int i(const std::string& k) const { return v_.at(k).get<int>(); }
  double d(const std::string& k) const { return v_.at(k).get<double>(); }
  std::uint64_t seed() const { return v_.at("seed").get<std::uint64_t>(); }

  json echo() const {
    json j = json::object();
    for (const auto& [k, v] : v_) j[k] = v;
    return j;
  }

 private:
  static std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
  }
  std::map<std::string, json> v_;
};

json cplx_list(const std::vector<cplx>& v) {
  json a = json::array();
  for (const auto& z : v) a.push_back({z.real(), z.imag()});
  return a;
}

json word_json(const Word& w, const std::vector<std::string>& names) { return word_to_string(w, names); }

bool looks_like_json(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  return b != std::string::npos && s[b] == '{';
}

GroupPresentation load_presentation(const std::string& path) {
  std::string text = read_file(path);
  if (looks_like_json(text)) {
    json j = json::parse(text);
    return presentation_from_json(j.contains("presentation") ? j.at("presentation") : j);
  }
  try {
    return parse_presentation(text);
  } catch (const ParseError& e) {
    throw std::invalid_argument(path + ": " + e.what());
  }
}

// representations from a solve artifact or a single representation file
struct LoadedClass {
  int index = 0;
  Representation rep;
  json fingerprint;
};

std::vector<LoadedClass> load_reps(const std::string& path) {
  json j = json::parse(read_file(path));
  std::vector<LoadedClass> out;
  const std::string kind = j.value("kind", "");
  if (kind == "representation") {
    Representation r = representation_from_json(j);
    out.push_back({0, r, cplx_list(fingerprint(r))});
    return out;
  }
  if (kind != "solve" && kind != "cohomology")
    throw std::invalid_argument(path + ": expected a solve or representation artifact");
  GroupPresentation p = presentation_from_json(j.at("presentation"));
  GroupKind g = group_from_name(j.at("group").get<std::string>());
  for (const auto& c : j.at("classes")) {
    std::vector<Mat3> imgs;
    for (const auto& m : c.at("images")) imgs.push_back(mat3_from_json(m));
    out.push_back({c.at("index").get<int>(), make_representation(p, g, imgs), c.at("fingerprint")});
  }
  return out;
}

json rep_header(const Representation& r) {
  return {{"presentation", presentation_to_json(r.presentation)}, {"group", group_name(r.group)}};
}

struct Outcome {
  json artifact;
  int code = kOk;
};

Outcome cmd_parse(const std::string& in, const Config& cfg) {
  GroupPresentation p = load_presentation(in);
  Eigen::MatrixXi ab = abelianization_matrix(p);
  json abj = json::array();
  for (int r = 0; r < ab.rows(); ++r) {
    json row = json::array();
    for (int c = 0; c < ab.cols(); ++c) row.push_back(ab(r, c));
    abj.push_back(row);
  }
  return {{{"kind", "presentation"},
           {"config", cfg.echo()},
           {"input", in},
           {"text", presentation_to_string(p)},
           {"presentation", presentation_to_json(p)},
           {"abelianization", abj},
           {"homology_sphere", is_homology_sphere(p)}}};
}

Outcome cmd_solve(const std::string& pres, const std::string& group, const Config& cfg) {
  GroupPresentation p = load_presentation(pres);
  GroupKind g = group_from_name(group);
  SolveConfig sc;
  sc.seed = cfg.seed();
  sc.starts = cfg.i("starts");
  sc.max_iter = cfg.i("max_iter");
  sc.tol_residual = cfg.d("tol_residual");
  auto res = solve_representations(p, g, sc);
  auto classes = deduplicate(res.reps, cfg.d("dedup_tol"));
  json cl = json::array();
  std::map<std::string, int> counts;
  for (size_t k = 0; k < classes.size(); ++k) {
    const auto& c = classes[k];
    auto st = classify_stabilizer(c.rep, cfg.d("null_tol"));
    counts[stab_name(st.tag)]++;
    json imgs = json::array();
    for (const auto& M : c.rep.images) imgs.push_back(matrix_to_json(M));
    cl.push_back({{"index", k},
                  {"stabilizer", stab_name(st.tag)},
                  {"commutant_dim", st.commutant_dim},
                  {"flagged", st.flagged},
                  {"members", c.members},
                  {"residual", c.rep.residual},
                  {"fingerprint", cplx_list(c.fingerprint)},
                  {"images", imgs}});
  }
  json j = {{"kind", "solve"},
            {"config", cfg.echo()},
            {"input", pres},
            {"presentation", presentation_to_json(p)},
            {"group", group_name(g)},
            {"starts", res.starts},
            {"converged", res.converged},
            {"dropped", res.dropped},
            {"stabilizer_counts", counts},
            {"classes", cl}};
  return {j};
}

json summary_json(ModuleTag t, const CohomologySummary& s) {
  return {{"module", module_name(t)}, {"dim", s.module_dim}, {"dimZ1", s.dimZ1}, {"dimB1", s.dimB1},
          {"dimH1", s.dimH1},         {"dimH0", s.dimH0},    {"flagged", s.flagged}};
}

Outcome cmd_cohomology(const std::string& path, const Config& cfg) {
  auto reps = load_reps(path);
  json cl = json::array();
  int code = kOk;
  for (const auto& lc : reps) {
    const Representation& r = lc.rep;
    auto st = classify_stabilizer(r, cfg.d("null_tol"));
    std::vector<CoefficientModule> mods{{ModuleTag::Su3Adjoint, {}}};
    if (r.group == GroupKind::SU2inSU3) mods.push_back({ModuleTag::Su2Adjoint, {}});
    if (st.tag == StabTag::ReducibleU1 || st.tag == StabTag::Central) {
      ReductionFrame f = st.frame ? *st.frame : ReductionFrame{};
      mods.push_back({ModuleTag::HPart, f});
      mods.push_back({ModuleTag::HperpPart, f});
    }
    json ms = json::array();
    int h0_su3 = -1;
    for (const auto& m : mods) {
      auto s = cohomology_summary(r, m, cfg.d("coh_tol"));
      if (m.tag == ModuleTag::Su3Adjoint) h0_su3 = s.dimH0;
      ms.push_back(summary_json(m.tag, s));
    }
    json c = {{"index", lc.index},
              {"stabilizer", stab_name(st.tag)},
              {"commutant_dim", st.commutant_dim},
              {"h0_matches_commutant", h0_su3 == st.commutant_dim},
              {"fingerprint", lc.fingerprint},
              {"modules", ms}};
    if (h0_su3 != st.commutant_dim) code = kAudit;
    if (st.tag == StabTag::ReducibleU1) {
      auto q = quaternion_structure_check(r, cfg.i("quat_trials"), cfg.seed() + lc.index, cfg.d("coh_tol"));
      c["quaternion"] = {{"trials", q.trials},
                         {"max_cocycle_residual", q.max_cocycle_residual},
                         {"max_coboundary_residual", q.max_coboundary_residual},
                         {"dimH1", q.dimH1},
                         {"divisible_by_4", q.divisible_by_4},
                         {"ok", q.ok}};
      if (!q.ok) code = kAudit;
    }
    json imgs = json::array();
    for (const auto& M : r.images) imgs.push_back(matrix_to_json(M));
    c["images"] = imgs;
    cl.push_back(c);
  }
  json j = {{"kind", "cohomology"}, {"config", cfg.echo()}, {"input", path}};
  if (!reps.empty()) j.update(rep_header(reps[0].rep));
  j["classes"] = cl;
  return {j, code};
}

json span_block_list(const std::vector<SpanBlock>& bs) {
  json a = json::array();
  for (const auto& b : bs) a.push_back({{"i", b.i}, {"j", b.j}, {"rank", b.rank}, {"expected", b.expected}});
  return a;
}

Outcome cmd_detect(const std::string& path, const Config& cfg) {
  auto reps = load_reps(path);
  json cl = json::array();
  bool not_found = false, failed = false;
  for (const auto& lc : reps) {
    const Representation& r = lc.rep;
    const auto& names = r.presentation.generators;
    auto st = classify_stabilizer(r, cfg.d("null_tol"));
    json c = {{"index", lc.index}, {"stabilizer", stab_name(st.tag)}, {"fingerprint", lc.fingerprint}};
    if (st.tag == StabTag::Irreducible) {
      auto te = three_eigenvalue_element(r, cfg.i("three_eig_max_len"));
      c["three_eigenvalue"] = {{"found", te.found}, {"branch", te.branch}, {"word", word_json(te.word, names)},
                               {"gap", te.gap}};
      if (!te.found) not_found = true;
      CoefficientModule mod{ModuleTag::Su3Adjoint, {}};
      Eigen::MatrixXd H = h1_basis(r, mod, cfg.d("coh_tol"));
      if (H.cols() == 0) {
        c["status"] = "vacuous";
        c["detection"] = {{"dimH1", 0}};
      } else {
        DetectConfig dc;
        dc.max_len = cfg.i("detect_max_len");
        dc.family_k = cfg.i("family_k");
        dc.tol = cfg.d("detect_tol");
        auto z = crossed_from_cochain(r, mod, H.col(0));
        auto d = find_detecting_loop(r, z, dc);
        c["detection"] = {{"dimH1", H.cols()},
                          {"found", d.found},
                          {"branch", d.branch},
                          {"word", word_json(d.word, names)},
                          {"derivative", {d.derivative.real(), d.derivative.imag()}},
                          {"tested", d.tested},
                          {"max_abs_tested", d.max_abs_tested}};
        c["status"] = d.found && te.found ? "detected" : "not-found";
        if (!d.found) not_found = true;
      }
    } else if (st.tag == StabTag::ReducibleU1) {
      SpanSearchConfig sc;
      sc.max_len = cfg.i("kernel_max_len");
      sc.rank_tol = cfg.d("span_tol");
      auto s = hessian_span_search(r, sc);
      json dw = json::array(), lw = json::array();
      for (const auto& w : s.dual_words) dw.push_back(word_json(w, names));
      for (const auto& w : s.loop_words) lw.push_back(word_json(w, names));
      c["span"] = {{"ok", s.ok},
                   {"vacuous", s.vacuous},
                   {"kernel_words_found", s.kernel_words_found},
                   {"dimH1", s.dimH1},
                   {"m", s.m},
                   {"rank", s.rank},
                   {"expected", s.expected},
                   {"dual_words", dw},
                   {"loop_words", lw},
                   {"deficient", span_block_list(s.deficient)},
                   {"message", s.message}};
      if (s.vacuous) c["status"] = "vacuous";
      else if (!s.kernel_words_found) c["status"] = "not-found";
      else c["status"] = s.ok ? "spanning" : "deficient";
      if (!s.vacuous && !s.kernel_words_found) not_found = true;
      else if (!s.ok) failed = true;
    } else {
      c["status"] = "skipped";
    }
    cl.push_back(c);
  }
  json j = {{"kind", "detect"}, {"config", cfg.echo()}, {"input", path}, {"classes", cl}};
  return {j, failed ? kAudit : not_found ? kNotFound : kOk};
}

Outcome cmd_span_check(const std::string& path, int blocks, const Config& cfg) {
  json in = json::parse(read_file(path));
  Mat2 x = mat2_from_json(in.at("x")), y = mat2_from_json(in.at("y"));
  for (const Mat2* M : {&x, &y})
    if (!is_su3(embed_su2(*M), 1e-8)) throw std::invalid_argument(path + ": pair entries must lie in SU(2)");
  const double tol = cfg.d("span_tol");
  auto s = span_checks(x, y, tol);
  json j = {{"kind", "span-check"},
            {"config", cfg.echo()},
            {"input", path},
            {"uii_ok", s.uii_ok},
            {"uij_ok", s.uij_ok},
            {"uii_rank", s.uii_rank},
            {"phi_rank", s.phi_rank},
            {"psi_rank", s.psi_rank},
            {"uij_rank", s.uij_rank},
            {"uii_sigma_min", s.uii_sigma_min},
            {"uij_sigma_min", s.uij_sigma_min}};
  bool ok = s.uii_ok && s.uij_ok;
  if (blocks >= 0) {
    auto r = hessian_span_synthetic(blocks, x, y, tol);
    j["blocks"] = {{"m", r.m},
                   {"ok", r.ok},
                   {"vacuous", r.vacuous},
                   {"rank", r.rank},
                   {"expected", r.expected},
                   {"deficient", span_block_list(r.deficient)}};
    ok = ok && r.ok;
  }
  j["ok"] = ok;
  return {j, ok ? kOk : kAudit};
}

Outcome cmd_holcalc(const Config& cfg) {
  auto fd = derivative_fd_check(cfg.i("fd_samples"), cfg.i("N"), cfg.seed());
  const bool first_ok = fd.max_first_error <= 1e-6, second_ok = fd.max_second_error <= 1e-5;
  json cases = json::array();
  bool hess_ok = true;
  auto hb = hessian_batch_check(cfg.i("hess_samples"), cfg.seed() + 1, cfg.i("hess_N"));
  for (const auto& b : hb) {
    const bool ok = b.max_error <= cfg.d("hess_tol");
    hess_ok = hess_ok && ok;
    cases.push_back({{"case", hess_case_name(b.c)},
                     {"samples", b.samples},
                     {"max_closed_form_error", b.max_error},
                     {"max_ordered_form_error", b.max_ordered_error},
                     {"max_holonomy_error", b.max_holonomy_error},
                     {"ok", ok}});
  }
  const bool ok = first_ok && second_ok && hess_ok;
  json j = {{"kind", "holcalc-check"},
            {"config", cfg.echo()},
            {"derivatives",
             {{"samples", fd.samples},
              {"max_first_error", fd.max_first_error},
              {"max_second_error", fd.max_second_error},
              {"first_ok", first_ok},
              {"second_ok", second_ok}}},
            {"hessian", cases},
            {"ok", ok}};
  return {j, ok ? kOk : kAudit};
}

std::string num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string short_num(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

json slice_json(const Slice& s) {
  return {{"t", s.t},
          {"lambda_prime", s.lambda_prime},
          {"lambda_dp", s.lambda_dp},
          {"difference", s.lambda_prime - s.lambda_dp},
          {"reducibles", s.reducibles.size()},
          {"irreducibles", s.irreducibles.size()}};
}

Outcome cmd_bifurcate(const std::string& path, const std::string& csv, const Config& cfg) {
  ModelFamily fam = family_from_json(json::parse(read_file(path)));
  auto a = wall_crossing_audit(fam);
  auto rows = sweep(fam, cfg.i("points"));
  json arcs = json::array();
  for (const auto& au : a.arcs) {
    json pts = json::array();
    for (const auto& p : au.points) pts.push_back({{"s", p.s}, {"sign", p.sign}, {"mode", p.mode}});
    arcs.push_back({{"name", au.name},
                    {"closed", au.closed},
                    {"b", au.b},
                    {"sf_hperp", au.sf_endpoints},
                    {"orientation", au.orientation},
                    {"bifurcations", pts},
                    {"ok", au.ok},
                    {"problem", au.problem}});
  }
  json sw = json::array();
  std::string text = "t,lambda_prime,lambda_dp,difference\n";
  for (const auto& r : rows) {
    sw.push_back({{"t", r.t}, {"lambda_prime", r.lambda_prime}, {"lambda_dp", r.lambda_dp},
                  {"difference", r.lambda_prime - r.lambda_dp}});
    text += num(r.t) + "," + std::to_string(r.lambda_prime) + "," + num(r.lambda_dp) + "," +
            num(r.lambda_prime - r.lambda_dp) + "\n";
  }
  if (!csv.empty()) write_atomic(csv, text);
  json j = {{"kind", "bifurcate"},
            {"config", cfg.echo()},
            {"input", path},
            {"minus", slice_json(a.minus)},
            {"plus", slice_json(a.plus)},
            {"arcs", arcs},
            {"bifurcation_total", a.bifurcation_total},
            {"check_a", a.check_a},
            {"check_b", a.check_b},
            {"check_c", a.check_c},
            {"failures", a.failures},
            {"verdict", a.ok ? "ok" : "fail"},
            {"sweep", sw}};
  return {j, a.ok ? kOk : kAudit};
}

// traces of the first two generators (fingerprint entries 0 and 2)
std::string fp_head(const json& fp) {
  auto clean = [](double x) { return std::abs(x) < 1e-12 ? 0.0 : x; };
  std::string s;
  for (size_t k = 0; k < std::min<size_t>(4, fp.size()); k += 2) {
    if (k) s += "; ";
    const double re = clean(fp[k][0].get<double>()), im = clean(fp[k][1].get<double>());
    s += short_num(re) + (im < 0 ? "-" : "+") + short_num(std::abs(im)) + "i";
  }
  return s;
}

std::string module_dims(const json& mods, const std::string& name, const char* key) {
  for (const auto& m : mods)
    if (m.at("module") == name) return std::to_string(m.at(key).get<int>());
  return "-";
}

// markdown summary; returns the report and fills csv with sweep rows
std::string make_report(const std::vector<std::string>& files, std::string& csv) {
  std::string classes, coh, det, audits, checks;
  csv = "source,t,lambda_prime,lambda_dp,difference\n";
  for (const auto& f : files) {
    json j = json::parse(read_file(f));
    const std::string kind = j.value("kind", "");
    if (kind == "solve") {
      for (const auto& c : j.at("classes"))
        classes += "| " + f + " | " + std::to_string(c.at("index").get<int>()) + " | " +
                   c.at("stabilizer").get<std::string>() + " | " + std::to_string(c.at("commutant_dim").get<int>()) +
                   " | " + std::to_string(c.at("members").get<int>()) + " | " + short_num(c.at("residual")) + " | " +
                   fp_head(c.at("fingerprint")) + " |\n";
    } else if (kind == "cohomology") {
      for (const auto& c : j.at("classes")) {
        const auto& m = c.at("modules");
        coh += "| " + f + " | " + std::to_string(c.at("index").get<int>()) + " | " +
               c.at("stabilizer").get<std::string>() + " | " + fp_head(c.at("fingerprint")) + " | ";
        for (const char* mod : {"su3-adjoint", "su2-adjoint", "h-part", "hperp-part"})
          coh += module_dims(m, mod, "dimH0") + "/" + module_dims(m, mod, "dimH1") + " | ";
        coh += (c.contains("quaternion") ? (c["quaternion"]["ok"].get<bool>() ? "ok" : "fail") : std::string("-")) +
               " |\n";
      }
    } else if (kind == "detect") {
      for (const auto& c : j.at("classes")) {
        std::string branch = "-", word = "-";
        if (c.contains("detection") && c["detection"].contains("branch")) {
          branch = c["detection"]["branch"].get<std::string>();
          word = c["detection"]["word"].get<std::string>();
        } else if (c.contains("span")) {
          branch = "hessian-span m=" + std::to_string(c["span"]["m"].get<int>());
        }
        det += "| " + f + " | " + std::to_string(c.at("index").get<int>()) + " | " +
               c.at("stabilizer").get<std::string>() + " | " + c.at("status").get<std::string>() + " | " + branch +
               " | " + word + " |\n";
      }
    } else if (kind == "bifurcate") {
      std::string bs;
      for (const auto& a : j.at("arcs")) bs += (bs.empty() ? "" : ", ") + a.at("name").get<std::string>() + ":" +
                                               std::to_string(a.at("b").get<int>());
      audits += "| " + f + " | " + j.at("verdict").get<std::string>() + " | " +
                std::to_string(j["minus"]["lambda_prime"].get<int>()) + " | " +
                std::to_string(j["plus"]["lambda_prime"].get<int>()) + " | " +
                short_num(j["minus"]["difference"]) + " | " + short_num(j["plus"]["difference"]) + " | " + bs +
                " |\n";
      for (const auto& r : j.at("sweep"))
        csv += f + "," + num(r.at("t")) + "," + std::to_string(r.at("lambda_prime").get<int>()) + "," +
               num(r.at("lambda_dp")) + "," + num(r.at("difference")) + "\n";
    } else if (kind == "holcalc-check" || kind == "span-check" || kind == "presentation") {
      std::string verdict = j.contains("ok") ? (j["ok"].get<bool>() ? "ok" : "fail") : "parsed";
      checks += "| " + f + " | " + kind + " | " + verdict + " |\n";
    } else {
      throw std::invalid_argument(f + ": unknown artifact kind '" + kind + "'");
    }
  }
  std::string md = "# su3kit report\n";
  if (!classes.empty())
    md += "\n## Classes\n\n| artifact | class | stabilizer | commutant | members | residual | fingerprint |\n"
          "|---|---|---|---|---|---|---|\n" + classes;
  if (!coh.empty())
    md += "\n## Cohomology (H0/H1)\n\n| artifact | class | stabilizer | fingerprint | su3 | su2 | h | hperp | "
          "quaternion |\n|---|---|---|---|---|---|---|---|---|\n" + coh;
  if (!det.empty())
    md += "\n## Detection\n\n| artifact | class | stabilizer | status | branch | word |\n|---|---|---|---|---|---|\n" +
          det;
  if (!audits.empty())
    md += "\n## Wall-crossing audits\n\n| artifact | verdict | lambda' at -1 | lambda' at +1 | difference at -1 | "
          "difference at +1 | b per arc |\n|---|---|---|---|---|---|---|\n" + audits;
  if (!checks.empty()) md += "\n## Checks\n\n| artifact | kind | verdict |\n|---|---|---|\n" + checks;
  return md;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty()) std::cout << text;
  else write_atomic(out, text);
}

}  // namespace

int main(int argc, char** argv) {
  if (const char* t = std::getenv("SU3KIT_THREADS")) {
    char* end = nullptr;
    long n = std::strtol(t, &end, 10);
    if (end == t || *end != '\0' || n < 1) {
      std::cerr << "SU3KIT_THREADS must be a positive integer\n";
      return kInvalid;
    }
    omp_set_num_threads(static_cast<int>(n));
  }

  CLI::App app{"SU(3) representation, cohomology and wall-crossing toolkit"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string config_path, out, seed, starts;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key=value config file");
  app.add_option("--set", sets, "override one config key (key=value)");
  app.add_option("--out", out, "write the artifact here instead of stdout");

  std::string in, pres, group = "su3", reps, pair, scenario, csv;
  int blocks = -1;
  std::vector<std::string> files;

  auto* parse = app.add_subcommand("parse", "parse a presentation");
  parse->add_option("--in", in)->required();
  auto* solve = app.add_subcommand("solve", "solve for representations up to conjugacy");
  solve->add_option("--presentation", pres)->required();
  solve->add_option("--group", group);
  solve->add_option("--seed", seed);
  solve->add_option("--starts", starts);
  auto* coh = app.add_subcommand("cohomology", "twisted cohomology of solved classes");
  auto* coh_in = coh->add_option("--reps", reps, "solve artifact");
  coh->add_option("--rep", reps, "representation file")->excludes(coh_in);
  auto* det = app.add_subcommand("detect", "detecting loops and Hessian spans");
  auto* det_in = det->add_option("--reps", reps, "solve artifact");
  det->add_option("--rep", reps, "representation file")->excludes(det_in);
  auto* span = app.add_subcommand("span-check", "span checks for an SU(2) pair");
  span->add_option("--pair", pair)->required();
  span->add_option("--blocks", blocks);
  auto* hol = app.add_subcommand("holcalc-check", "holonomy derivative and Hessian verification");
  hol->add_option("--seed", seed);
  auto* bif = app.add_subcommand("bifurcate", "wall-crossing audit of a model scenario");
  bif->add_option("--scenario", scenario)->required();
  bif->add_option("--csv", csv);
  auto* rep = app.add_subcommand("report", "markdown and CSV summary of artifacts");
  rep->add_option("files", files);
  rep->add_option("--csv", csv);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }

  try {
    Config cfg;
    if (!config_path.empty()) cfg.load(config_path);
    for (const auto& s : sets) cfg.set_pair(s);
    if (!seed.empty()) cfg.set("seed", seed);
    if (!starts.empty()) cfg.set("starts", starts);

    if (*rep) {
      std::string table;
      std::string md = make_report(files, table);
      emit(out, md);
      if (!csv.empty()) write_atomic(csv, table);
      return kOk;
    }
    if ((*coh || *det) && reps.empty()) throw std::invalid_argument("--reps or --rep is required");
    Outcome o;
    if (*parse) o = cmd_parse(in, cfg);
    else if (*solve) o = cmd_solve(pres, group, cfg);
    else if (*coh) o = cmd_cohomology(reps, cfg);
    else if (*det) o = cmd_detect(reps, cfg);
    else if (*span) o = cmd_span_check(pair, blocks, cfg);
    else if (*hol) o = cmd_holcalc(cfg);
    else o = cmd_bifurcate(scenario, csv, cfg);
    emit(out, o.artifact.dump(2) + "\n");
    if (o.code == kAudit) std::cerr << "audit failed\n";
    if (o.code == kNotFound) std::cerr << "not found within bounds\n";
    return o.code;
  } catch (const json::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
}
