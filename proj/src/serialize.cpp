#include "su3kit/serialize.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace su3kit {

json matrix_to_json(const Eigen::MatrixXcd& M) {
  json rows = json::array();
  for (int i = 0; i < M.rows(); ++i) {
    json row = json::array();
    for (int k = 0; k < M.cols(); ++k) row.push_back({M(i, k).real(), M(i, k).imag()});
    rows.push_back(row);
  }
  return rows;
}

Eigen::MatrixXcd matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("matrix: expected a nonempty array of rows");
  const size_t r = j.size(), c = j[0].size();
  Eigen::MatrixXcd M(r, c);
  for (size_t i = 0; i < r; ++i) {
    if (j[i].size() != c) throw std::invalid_argument("matrix: ragged rows");
    for (size_t k = 0; k < c; ++k) {
      const auto& e = j[i][k];
      if (!e.is_array() || e.size() != 2) throw std::invalid_argument("matrix: entries must be [re, im]");
      M(i, k) = cplx(e[0].get<double>(), e[1].get<double>());
    }
  }
  return M;
}

Mat3 mat3_from_json(const json& j) {
  auto M = matrix_from_json(j);
  if (M.rows() != 3 || M.cols() != 3) throw std::invalid_argument("expected a 3x3 matrix");
  return M;
}

Mat2 mat2_from_json(const json& j) {
  auto M = matrix_from_json(j);
  if (M.rows() != 2 || M.cols() != 2) throw std::invalid_argument("expected a 2x2 matrix");
  return M;
}

json presentation_to_json(const GroupPresentation& p) {
  json rel = json::array();
  for (const auto& w : p.relators) {
    json jw = json::array();
    for (const auto& l : w) jw.push_back({l.gen, l.exp});
    rel.push_back(jw);
  }
  return {{"generators", p.generators}, {"relators", rel}};
}

GroupPresentation presentation_from_json(const json& j) {
  GroupPresentation p;
  p.generators = j.at("generators").get<std::vector<std::string>>();
  if (p.generators.empty()) throw std::invalid_argument("presentation: empty generator list");
  for (size_t a = 0; a < p.generators.size(); ++a)
    for (size_t b = a + 1; b < p.generators.size(); ++b)
      if (p.generators[a] == p.generators[b]) throw std::invalid_argument("presentation: duplicate generator");
  for (const auto& jw : j.at("relators")) {
    Word w;
    for (const auto& l : jw) {
      int g = l.at(0).get<int>(), e = l.at(1).get<int>();
      if (g < 0 || g >= p.ngens() || (e != 1 && e != -1))
        throw std::invalid_argument("presentation: invalid letter");
      w.push_back({g, e});
    }
    p.relators.push_back(word_reduce(w));
  }
  return p;
}

std::string group_name(GroupKind g) { return g == GroupKind::SU2inSU3 ? "su2" : "su3"; }

GroupKind group_from_name(const std::string& s) {
  if (s == "su2") return GroupKind::SU2inSU3;
  if (s == "su3") return GroupKind::SU3;
  throw std::invalid_argument("group must be su2 or su3, got '" + s + "'");
}

json representation_to_json(const Representation& rho) {
  json imgs = json::array();
  for (const auto& M : rho.images) imgs.push_back(matrix_to_json(M));
  return {{"kind", "representation"},
          {"presentation", presentation_to_json(rho.presentation)},
          {"group", group_name(rho.group)},
          {"images", imgs},
          {"residual", rho.residual}};
}

Representation representation_from_json(const json& j) {
  GroupPresentation p = presentation_from_json(j.at("presentation"));
  std::vector<Mat3> imgs;
  for (const auto& m : j.at("images")) {
    Mat3 M = mat3_from_json(m);
    if (!is_su3(M, 1e-8)) throw std::invalid_argument("representation: image is not in SU(3)");
    imgs.push_back(M);
  }
  return make_representation(p, group_from_name(j.value("group", "su3")), imgs);
}

ModelFamily family_from_json(const json& j) {
  ModelFamily fam;
  fam.delta = j.value("delta", 0.05);
  int idx = 0;
  for (const auto& ja : j.at("arcs")) {
    ReducibleArc A;
    A.name = ja.value("name", std::to_string(idx));
    A.t_knots = ja.at("t_knots").get<std::vector<double>>();
    A.a_knots = ja.at("a_knots").get<std::vector<double>>();
    A.b = ja.at("b").get<double>();
    A.closed = ja.value("closed", false);
    A.sf_h_base = ja.value("sf_h_base", 0);
    A.cs_value = ja.value("cs_value", 0.0);
    A.sf_hperp_offset = ja.value("sf_hperp_offset", 0);
    if (ja.contains("extra_modes"))
      for (const auto& jm : ja.at("extra_modes"))
        A.extra_modes.push_back({jm.at("a_knots").get<std::vector<double>>(), jm.at("b").get<double>()});
    fam.arcs.push_back(A);
    ++idx;
  }
  validate_family(fam);
  return fam;
}

json family_to_json(const ModelFamily& fam) {
  json arcs = json::array();
  for (const auto& A : fam.arcs) {
    json ja = {{"name", A.name},
               {"t_knots", A.t_knots},
               {"a_knots", A.a_knots},
               {"b", A.b},
               {"closed", A.closed},
               {"sf_h_base", A.sf_h_base},
               {"cs_value", A.cs_value},
               {"sf_hperp_offset", A.sf_hperp_offset}};
    if (!A.extra_modes.empty()) {
      json ms = json::array();
      for (const auto& m : A.extra_modes) ms.push_back({{"a_knots", m.a_knots}, {"b", m.b}});
      ja["extra_modes"] = ms;
    }
    arcs.push_back(ja);
  }
  return {{"arcs", arcs}, {"delta", fam.delta}};
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_atomic(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write '" + tmp + "'");
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for '" + tmp + "'");
  }
  if (std::rename(tmp.c_str(), path.c_str()) != 0) {
    std::remove(tmp.c_str());
    throw std::runtime_error("cannot rename onto '" + path + "'");
  }
}

}  // namespace su3kit
