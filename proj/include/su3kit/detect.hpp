#pragma once

#include <string>
#include <vector>

#include "su3kit/foxcoh.hpp"
#include "su3kit/presentation.hpp"
#include "su3kit/repvariety.hpp"

namespace su3kit {

// su(3) values on the generators, extended by z(uv) = z(u) + Ad_rho(u) z(v)
using CrossedHom = std::vector<Mat3>;

double crossed_relator_residual(const Representation& rho, const CrossedHom& z);
// throws std::invalid_argument when check is set and some relator value exceeds tol
Mat3 crossed_extend(const Representation& rho, const CrossedHom& z, const Word& w, bool check = true,
                    double tol = 1e-8);
// d/dt tr rho_t(w) at 0 for rho_t(x_i) = exp(t z_i) rho(x_i)
cplx trace_derivative(const Representation& rho, const CrossedHom& z, const Word& w);

CrossedHom coboundary_hom(const Representation& rho, const Mat3& v);
// flattened module cochain to ambient su(3) values
CrossedHom crossed_from_cochain(const Representation& rho, const CoefficientModule& mod,
                                const Eigen::VectorXd& z);

struct DetectConfig {
  int max_len = 4;
  int family_k = 12;
  double tol = 1e-9;
  bool parallel = true;
};

struct DetectResult {
  bool found = false;
  Word word;
  std::string branch;   // generator, short-word, family-LkM, family-LkMLkM
  cplx derivative{0.0, 0.0};
  double max_abs_tested = 0.0;
  int tested = 0;
};

DetectResult find_detecting_loop(const Representation& rho, const CrossedHom& z, const DetectConfig& cfg = {});

struct ThreeEigResult {
  bool found = false;
  Word word;
  std::string branch;   // generator, product, word-scan
  double gap = 0.0;
};
ThreeEigResult three_eigenvalue_element(const Representation& rho, int max_len = 4, double gap_tol = 1e-8);

struct PsiPhi {
  Eigen::Matrix4d psi_diag;   // 2[[s,0,-u,t],[0,s,-t,-u],[-u,-t,-s,0],[t,-u,0,-s]]
  Eigen::Matrix4d phi;
  Eigen::Matrix4d psi_off;
};
// L = [[alpha, beta], [-conj beta, conj alpha]], alpha = r + i s, beta = t + i u
PsiPhi psi_phi_matrices(const Mat2& L);

struct SpanResult {
  bool uii_ok = false;
  bool uij_ok = false;
  int uii_rank = 0;
  int phi_rank = 0;
  int psi_rank = 0;
  int uij_rank = 0;
  double uii_sigma_min = 0.0;
  double uij_sigma_min = 0.0;
};
SpanResult span_checks(const Mat2& x, const Mat2& y, double tol = 1e-8);

struct SpanBlock {
  int i = 0, j = 0;
  int rank = 0;
  int expected = 0;
};

struct SpanSearchConfig {
  int max_len = 8;
  double kernel_tol = 1e-8;
  double cond_tol = 1e-6;
  double rank_tol = 1e-8;
};

struct SpanSearchReport {
  bool ok = false;
  bool vacuous = false;
  bool kernel_words_found = false;
  int dimH1 = 0;
  int m = 0;
  int rank = 0;
  int expected = 0;
  std::vector<Word> dual_words;
  std::vector<Word> loop_words;   // x, y, xy, x^2
  std::vector<SpanBlock> blocks;
  std::vector<SpanBlock> deficient;
  std::string message;
};

// Hessian spans from dual pairing data already in dual coordinates (m quaternionic blocks)
SpanSearchReport hessian_span_synthetic(int m, const Mat2& x, const Mat2& y, double rank_tol = 1e-8);
SpanSearchReport hessian_span_search(const Representation& rho, const SpanSearchConfig& cfg = {});

}  // namespace su3kit
