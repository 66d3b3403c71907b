#include "su3kit/detect.hpp"

#include <Eigen/SVD>
#include <cmath>
#include <stdexcept>

#include "su3kit/holcalc.hpp"

namespace su3kit {

namespace {

// value and holonomy along w, no relator check
std::pair<Mat3, Mat3> extend_raw(const std::vector<Mat3>& images, const CrossedHom& z, const Word& w) {
  Mat3 Z = Mat3::Zero(), G = Mat3::Identity();
  for (const auto& l : w) {
    const Mat3& g = images[l.gen];
    if (l.exp > 0) {
      Z += G * z[l.gen] * G.adjoint();
      G = G * g;
    } else {
      Mat3 gi = g.adjoint();
      G = G * gi;
      Z -= G * z[l.gen] * G.adjoint();
    }
  }
  return {Z, G};
}

int rank_with(const Eigen::MatrixXd& A, double tol, double* smin = nullptr) {
  if (A.rows() == 0 || A.cols() == 0) {
    if (smin) *smin = 0.0;
    return 0;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A);
  const auto& s = svd.singularValues();
  int r = 0;
  for (int i = 0; i < s.size(); ++i)
    if (s(i) > tol) ++r;
  if (smin) *smin = s(s.size() - 1);
  return r;
}

Eigen::VectorXd flat(const Eigen::Matrix4d& M) { return Eigen::Map<const Eigen::VectorXd>(M.data(), 16); }

}  // namespace

double crossed_relator_residual(const Representation& rho, const CrossedHom& z) {
  double r = 0.0;
  for (const auto& w : rho.presentation.relators) r = std::max(r, extend_raw(rho.images, z, w).first.norm());
  return r;
}

Mat3 crossed_extend(const Representation& rho, const CrossedHom& z, const Word& w, bool check, double tol) {
  if (static_cast<int>(z.size()) != rho.presentation.ngens())
    throw std::invalid_argument("crossed_extend: one value per generator required");
  if (check && crossed_relator_residual(rho, z) > tol)
    throw std::invalid_argument("crossed_extend: values are not a cocycle on the relators");
  return extend_raw(rho.images, z, w).first;
}

cplx trace_derivative(const Representation& rho, const CrossedHom& z, const Word& w) {
  auto [Z, G] = extend_raw(rho.images, z, w);
  return (Z * G).trace();
}

CrossedHom coboundary_hom(const Representation& rho, const Mat3& v) {
  CrossedHom z;
  for (const auto& g : rho.images) z.push_back(v - g * v * g.adjoint());
  return z;
}

CrossedHom crossed_from_cochain(const Representation& rho, const CoefficientModule& mod, const Eigen::VectorXd& z) {
  const int d = module_dim(mod.tag);
  CrossedHom out;
  for (int i = 0; i < rho.presentation.ngens(); ++i)
    out.push_back(module_to_matrix(mod, z.segment(i * d, d)));
  return out;
}

DetectResult find_detecting_loop(const Representation& rho, const CrossedHom& z, const DetectConfig& cfg) {
  if (static_cast<int>(z.size()) != rho.presentation.ngens())
    throw std::invalid_argument("find_detecting_loop: one value per generator required");
  const int n = rho.presentation.ngens();
  // candidates in search order; evaluated in parallel blocks, scanned in order so the
  // first passing word wins regardless of thread count
  std::vector<std::pair<Word, const char*>> cand;
  for (auto& w : enumerate_words(n, std::max(1, cfg.max_len))) {
    const char* branch = w.size() == 1 ? "generator" : "short-word";
    cand.emplace_back(std::move(w), branch);
  }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      if (a == b) continue;
      const Word L{{a, 1}}, M{{b, 1}};
      for (int k = 1; k <= cfg.family_k; ++k) {
        Word Lk = word_power(L, k);
        cand.emplace_back(word_concat(Lk, M), "family-LkM");
        cand.emplace_back(word_concat(word_concat(Lk, M), word_concat(word_invert(Lk), word_invert(M))),
                          "family-LkMLkM");
      }
    }
  DetectResult res;
  const int total = static_cast<int>(cand.size());
  const int block = cfg.parallel ? 256 : 1;
  std::vector<cplx> d(block);
  for (int lo = 0; lo < total; lo += block) {
    const int hi = std::min(total, lo + block);
#pragma omp parallel for schedule(static) if (cfg.parallel)
    for (int i = lo; i < hi; ++i) d[i - lo] = trace_derivative(rho, z, cand[i].first);
    for (int i = lo; i < hi; ++i) {
      const cplx v = d[i - lo];
      ++res.tested;
      res.max_abs_tested = std::max(res.max_abs_tested, std::abs(v));
      if (std::abs(v) > cfg.tol) {
        res.found = true;
        res.word = cand[i].first;
        res.branch = cand[i].second;
        res.derivative = v;
        return res;
      }
    }
  }
  return res;
}

ThreeEigResult three_eigenvalue_element(const Representation& rho, int max_len, double gap_tol) {
  const int n = rho.presentation.ngens();
  ThreeEigResult res;
  auto test = [&](const Word& w, const char* branch) {
    double g = eigen_gap(word_holonomy(rho, w));
    if (g > gap_tol) {
      res.found = true;
      res.word = w;
      res.branch = branch;
      res.gap = g;
      return true;
    }
    return false;
  };
  for (int i = 0; i < n; ++i)
    if (test(Word{{i, 1}}, "generator")) return res;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (test(Word{{i, 1}, {j, 1}}, "product")) return res;
      if (test(Word{{i, -1}, {j, 1}}, "product")) return res;
    }
  for (const auto& w : enumerate_words(n, max_len))
    if (test(w, "word-scan")) return res;
  return res;
}

PsiPhi psi_phi_matrices(const Mat2& L) {
  const double r = L(0, 0).real(), s = L(0, 0).imag(), t = L(0, 1).real(), u = L(0, 1).imag();
  PsiPhi m;
  m.psi_diag << s, 0, -u, t,
                0, s, -t, -u,
                -u, -t, -s, 0,
                t, -u, 0, -s;
  m.psi_diag *= 2.0;
  m.phi << r, -s, t, -u,
           s, r, u, t,
           -t, -u, r, s,
           u, -t, -s, r;
  m.psi_off << s, 1 - r, u, t,
               r - 1, s, -t, u,
               u, -t, -s, 1 - r,
               t, u, r - 1, -s;
  return m;
}

SpanResult span_checks(const Mat2& x, const Mat2& y, double tol) {
  const Mat2 xy = x * y, x2 = x * x;
  SpanResult r;
  Eigen::MatrixXd D(16, 4);
  D.col(0) = flat(-2.0 * Eigen::Matrix4d::Identity());
  D.col(1) = flat(psi_phi_matrices(x).psi_diag);
  D.col(2) = flat(psi_phi_matrices(y).psi_diag);
  D.col(3) = flat(psi_phi_matrices(xy).psi_diag);
  r.uii_rank = rank_with(D, tol, &r.uii_sigma_min);
  r.uii_ok = r.uii_rank == 4;

  Eigen::MatrixXd P(16, 4), S(16, 4), C(16, 8);
  const Mat2 I = Mat2::Identity();
  const Mat2 phis[4] = {I, x, y, xy};
  const Mat2 psis[4] = {x, x2, y, xy};
  for (int k = 0; k < 4; ++k) {
    P.col(k) = flat(psi_phi_matrices(phis[k]).phi);
    S.col(k) = flat(psi_phi_matrices(psis[k]).psi_off);
  }
  C << P, S;
  r.phi_rank = rank_with(P, tol);
  r.psi_rank = rank_with(S, tol);
  r.uij_rank = rank_with(C, tol, &r.uij_sigma_min);
  r.uij_ok = r.phi_rank == 4 && r.psi_rank == 4 && r.uij_rank == 8;
  return r;
}

namespace {

HperpVector unit_hperp(int c) {
  Eigen::Vector4d e = Eigen::Vector4d::Zero();
  e(c) = 1.0;
  Vec2c v = hperp_to_c2(e);
  return {v(0), v(1)};
}

// spans of the Hessian forms in dual coordinates; loops = {x, y, xy, x^2} as SU(2) (+) 1
void span_core(int m, const std::array<Mat3, 4>& loops, double rank_tol, SpanSearchReport& rep) {
  const int D = 4 * m;
  const Mat3 &X = loops[0], &Y = loops[1], &XY = loops[2], &X2 = loops[3];
  auto xi = [&](int p, int k) { return p / 4 == k ? unit_hperp(p % 4) : HperpVector{}; };
  // one form: D x D matrix of Re or Im of the Hessian. The ordered form is the one that agrees
  // with the integrated second derivative for ell-gammai-gammaj; the symmetrized one loses a
  // direction when L^2 = -I
  auto form = [&](HessCase c, const Mat3& L, int i, int j, bool imag) {
    Eigen::MatrixXd B(D, D);
    for (int p = 0; p < D; ++p)
      for (int q = 0; q < D; ++q) {
        HessInputs in{L, xi(p, i), xi(q, i), xi(p, j), xi(q, j)};
        cplx v = hessian_ordered_form(c, in);
        B(p, q) = imag ? v.imag() : v.real();
      }
    return B;
  };
  std::vector<Eigen::MatrixXd> all;
  rep.blocks.clear();
  rep.deficient.clear();
  rep.expected = 0;
  const Mat3 I = Mat3::Identity();
  for (int i = 0; i < m; ++i) {
    std::vector<Eigen::MatrixXd> fs = {form(HessCase::GammaGamma, I, i, i, false),
                                       form(HessCase::EllGamma, X, i, i, true),
                                       form(HessCase::EllGamma, Y, i, i, true),
                                       form(HessCase::EllGamma, XY, i, i, true)};
    Eigen::MatrixXd S(16, fs.size());
    for (size_t f = 0; f < fs.size(); ++f) {
      Eigen::Matrix4d blk = fs[f].block(4 * i, 4 * i, 4, 4);
      S.col(f) = flat(blk);
    }
    SpanBlock b{i, i, rank_with(S, rank_tol), 4};
    rep.blocks.push_back(b);
    if (b.rank < b.expected) rep.deficient.push_back(b);
    rep.expected += 4;
    all.insert(all.end(), fs.begin(), fs.end());
  }
  for (int i = 0; i < m; ++i)
    for (int j = i + 1; j < m; ++j) {
      std::vector<Eigen::MatrixXd> fs = {form(HessCase::GammaIGammaJ, I, i, j, false),
                                         form(HessCase::Conj, X, i, j, false),
                                         form(HessCase::Conj, Y, i, j, false),
                                         form(HessCase::Conj, XY, i, j, false),
                                         form(HessCase::EllGammaIGammaJ, X, i, j, true),
                                         form(HessCase::EllGammaIGammaJ, X2, i, j, true),
                                         form(HessCase::EllGammaIGammaJ, Y, i, j, true),
                                         form(HessCase::EllGammaIGammaJ, XY, i, j, true)};
      Eigen::MatrixXd S(16, fs.size());
      for (size_t f = 0; f < fs.size(); ++f) {
        Eigen::Matrix4d blk = fs[f].block(4 * i, 4 * j, 4, 4);
        S.col(f) = flat(blk);
      }
      SpanBlock b{i, j, rank_with(S, rank_tol), 8};
      rep.blocks.push_back(b);
      if (b.rank < b.expected) rep.deficient.push_back(b);
      rep.expected += 8;
      all.insert(all.end(), fs.begin(), fs.end());
    }
  Eigen::MatrixXd A(D * D, all.size());
  for (size_t f = 0; f < all.size(); ++f) A.col(f) = Eigen::Map<const Eigen::VectorXd>(all[f].data(), D * D);
  rep.rank = rank_with(A, rank_tol);
  rep.ok = rep.deficient.empty() && rep.rank == rep.expected;
  if (!rep.ok) rep.message = "Hessian span deficient";
}

}  // namespace

SpanSearchReport hessian_span_synthetic(int m, const Mat2& x, const Mat2& y, double rank_tol) {
  if (m < 0) throw std::invalid_argument("hessian_span_synthetic: m must be >= 0");
  SpanSearchReport rep;
  rep.m = m;
  rep.dimH1 = 4 * m;
  rep.kernel_words_found = true;
  if (m == 0) {
    rep.ok = rep.vacuous = true;
    return rep;
  }
  span_core(m, {embed_su2(x), embed_su2(y), embed_su2(x * y), embed_su2(x * x)}, rank_tol, rep);
  return rep;
}

SpanSearchReport hessian_span_search(const Representation& rho, const SpanSearchConfig& cfg) {
  auto st = classify_stabilizer(rho);
  if (st.tag != StabTag::ReducibleU1)
    throw std::invalid_argument("hessian_span_search: representation is not ReducibleU1");
  CoefficientModule mod{ModuleTag::HperpPart, st.frame};
  Eigen::MatrixXd H = h1_basis(rho, mod);
  SpanSearchReport rep;
  rep.dimH1 = static_cast<int>(H.cols());
  if (rep.dimH1 == 0) {
    rep.ok = rep.vacuous = rep.kernel_words_found = true;
    return rep;
  }
  if (rep.dimH1 % 4) {
    rep.message = "dim H1 not divisible by 4";
    return rep;
  }
  rep.m = rep.dimH1 / 4;
  const int n = rho.presentation.ngens();
  const Mat3 F = st.frame->g;

  // loop elements: first pair of noncommuting generator images, in frame coordinates
  int ix = -1, iy = -1;
  for (int a = 0; a < n && ix < 0; ++a)
    for (int b = a + 1; b < n; ++b) {
      const Mat3 &A = rho.images[a], &B = rho.images[b];
      if ((A * B - B * A).norm() > 1e-6) {
        ix = a;
        iy = b;
        break;
      }
    }
  if (ix < 0) {
    rep.message = "no noncommuting pair of generator images";
    return rep;
  }
  rep.loop_words = {Word{{ix, 1}}, Word{{iy, 1}}, Word{{ix, 1}, {iy, 1}}, Word{{ix, 1}, {ix, 1}}};
  std::array<Mat3, 4> loops;
  for (int k = 0; k < 4; ++k) loops[k] = F.adjoint() * word_holonomy(rho, rep.loop_words[k]) * F;

  // kernel words with an H-linear pairing against H1, chosen greedily
  std::vector<CrossedHom> zs;
  for (int c = 0; c < rep.dimH1; ++c) zs.push_back(crossed_from_cochain(rho, mod, H.col(c)));
  Eigen::MatrixXd T(0, rep.dimH1);
  for (const auto& w : enumerate_words(n, cfg.max_len)) {
    if ((word_holonomy(rho, w) - Mat3::Identity()).norm() > cfg.kernel_tol) continue;
    Eigen::MatrixXd Tw(4, rep.dimH1);
    for (int c = 0; c < rep.dimH1; ++c)
      Tw.col(c) = module_from_matrix(mod, extend_raw(rho.images, zs[c], w).first);
    Eigen::MatrixXd T2(T.rows() + 4, rep.dimH1);
    T2 << T, Tw;
    double smin = 0.0;
    int r = rank_with(T2.transpose(), cfg.cond_tol, &smin);
    if (r == T2.rows()) {
      T = T2;
      rep.dual_words.push_back(w);
      if (T.rows() == rep.dimH1) break;
    }
  }
  if (T.rows() < rep.dimH1) {
    rep.message = "kernel words not found within length " + std::to_string(cfg.max_len);
    return rep;
  }
  rep.kernel_words_found = true;
  for (const auto& L : loops) {
    double off = std::abs(L(0, 2)) + std::abs(L(1, 2)) + std::abs(L(2, 0)) + std::abs(L(2, 1));
    if (off > 1e-8 || std::abs(L(2, 2) - 1.0) > 1e-8) {
      rep.message = "loop holonomies are not of the form SU(2) (+) 1 in the frame";
      return rep;
    }
  }
  // in the basis T^-1 e_p the pairing with word k is the p-th unit vector of block k
  span_core(rep.m, loops, cfg.rank_tol, rep);
  return rep;
}

}  // namespace su3kit
