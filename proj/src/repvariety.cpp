#include "su3kit/repvariety.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace su3kit {

std::string stab_name(StabTag t) {
  switch (t) {
    case StabTag::Central: return "Central";
    case StabTag::ReducibleU1: return "ReducibleU1";
    case StabTag::AbelianLarge: return "AbelianLarge";
    case StabTag::Irreducible: return "Irreducible";
  }
  return "?";
}

double relator_residual(const GroupPresentation& p, const std::vector<Mat3>& images) {
  double r = 0.0;
  for (const auto& w : p.relators) r = std::max(r, (word_product(images, w) - Mat3::Identity()).norm());
  return r;
}

Representation make_representation(const GroupPresentation& p, GroupKind g, std::vector<Mat3> images) {
  if (static_cast<int>(images.size()) != p.ngens())
    throw std::invalid_argument("make_representation: image count does not match generators");
  Representation rho{p, g, std::move(images), 0.0};
  rho.residual = relator_residual(p, rho.images);
  return rho;
}

Mat3 word_holonomy(const Representation& rho, const Word& w) { return word_product(rho.images, w); }

namespace {

struct Problem {
  const GroupPresentation& p;
  std::vector<Mat3> basis;   // tangent directions at each generator
  int n() const { return p.ngens(); }
  int db() const { return static_cast<int>(basis.size()); }
  int rows() const { return 18 * static_cast<int>(p.relators.size()); }
  int cols() const { return n() * db(); }
};

Eigen::VectorXd residual_vec(const Problem& pr, const std::vector<Mat3>& g) {
  Eigen::VectorXd R(pr.rows());
  int row = 0;
  for (const auto& w : pr.p.relators) {
    Mat3 D = word_product(g, w) - Mat3::Identity();
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b) {
        R(row++) = D(a, b).real();
        R(row++) = D(a, b).imag();
      }
  }
  return R;
}

Eigen::MatrixXd jacobian(const Problem& pr, const std::vector<Mat3>& g) {
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(pr.rows(), pr.cols());
  int row0 = 0;
  for (const auto& w : pr.p.relators) {
    const size_t L = w.size();
    std::vector<Mat3> A(L), pre(L + 1), suf(L + 1);
    for (size_t i = 0; i < L; ++i) A[i] = w[i].exp > 0 ? g[w[i].gen] : Mat3(g[w[i].gen].adjoint());
    pre[0] = Mat3::Identity();
    for (size_t i = 0; i < L; ++i) pre[i + 1] = pre[i] * A[i];
    suf[L] = Mat3::Identity();
    for (size_t i = L; i-- > 0;) suf[i] = A[i] * suf[i + 1];
    for (size_t i = 0; i < L; ++i) {
      const int k = w[i].gen;
      for (int b = 0; b < pr.db(); ++b) {
        Mat3 dA = w[i].exp > 0 ? Mat3(pr.basis[b] * g[k]) : Mat3(-g[k].adjoint() * pr.basis[b]);
        Mat3 D = pre[i] * dA * suf[i + 1];
        int r = row0, c = k * pr.db() + b;
        for (int a = 0; a < 3; ++a)
          for (int bb = 0; bb < 3; ++bb) {
            J(r++, c) += D(a, bb).real();
            J(r++, c) += D(a, bb).imag();
          }
      }
    }
    row0 += 18;
  }
  return J;
}

std::vector<Mat3> retract(const Problem& pr, const std::vector<Mat3>& g, const Eigen::VectorXd& x,
                          bool su2) {
  std::vector<Mat3> out(g.size());
  for (int k = 0; k < pr.n(); ++k) {
    Mat3 X = Mat3::Zero();
    for (int b = 0; b < pr.db(); ++b) X += x(k * pr.db() + b) * pr.basis[b];
    Mat3 m = expm_skew(X) * g[k];
    out[k] = su2 ? embed_su2(project_su2(upper_block(m))) : project_su3(m);
  }
  return out;
}

std::vector<Mat3> random_start(const Problem& pr, std::mt19937_64& rng, bool su2) {
  std::normal_distribution<double> nd(0.0, 1.5);
  std::vector<Mat3> g(pr.n(), Mat3::Identity());
  Eigen::VectorXd x(pr.cols());
  for (int i = 0; i < pr.cols(); ++i) x(i) = nd(rng);
  return retract(pr, g, x, su2);
}

// gradient descent warm-up, then damped Gauss-Newton (the Newton polish for a
// zero-residual least-squares problem)
std::vector<Mat3> minimize(const Problem& pr, std::vector<Mat3> g, const SolveConfig& cfg, bool su2) {
  if (pr.p.relators.empty()) return g;
  Eigen::VectorXd R = residual_vec(pr, g);
  double F = 0.5 * R.squaredNorm();
  const double stop = 0.01 * cfg.tol_residual;
  for (int it = 0; it < 20 && relator_residual(pr.p, g) > stop; ++it) {
    Eigen::MatrixXd J = jacobian(pr, g);
    Eigen::VectorXd grad = J.transpose() * R;
    double t = 1.0;
    bool moved = false;
    for (int bt = 0; bt < 30; ++bt, t *= 0.5) {
      auto g2 = retract(pr, g, -t * grad, su2);
      Eigen::VectorXd R2 = residual_vec(pr, g2);
      double F2 = 0.5 * R2.squaredNorm();
      if (F2 <= F - 1e-4 * t * grad.squaredNorm()) {
        g = std::move(g2);
        R = R2;
        F = F2;
        moved = true;
        break;
      }
    }
    if (!moved) break;
  }
  double mu = -1.0;
  for (int it = 0; it < cfg.max_iter; ++it) {
    if (relator_residual(pr.p, g) <= stop) break;
    Eigen::MatrixXd J = jacobian(pr, g);
    Eigen::MatrixXd H = J.transpose() * J;
    Eigen::VectorXd grad = J.transpose() * R;
    if (mu < 0) mu = 1e-3 * std::max(1e-12, H.diagonal().maxCoeff());
    bool accepted = false;
    for (int tries = 0; tries < 40; ++tries) {
      Eigen::MatrixXd A = H;
      A.diagonal().array() += mu;
      Eigen::VectorXd dx = A.ldlt().solve(-grad);
      auto g2 = retract(pr, g, dx, su2);
      Eigen::VectorXd R2 = residual_vec(pr, g2);
      double F2 = 0.5 * R2.squaredNorm();
      if (F2 < F) {
        g = std::move(g2);
        R = R2;
        F = F2;
        mu = std::max(mu / 3.0, 1e-15);
        accepted = true;
        break;
      }
      mu *= 4.0;
      if (mu > 1e12) break;
    }
    if (!accepted) break;
  }
  return g;
}

}  // namespace

SolveResult solve_representations(const GroupPresentation& p, GroupKind group, const SolveConfig& cfg) {
  if (cfg.starts < 1) throw std::invalid_argument("solve_representations: starts must be >= 1");
  const bool su2 = group == GroupKind::SU2inSU3;
  Problem pr{p, {}};
  const auto& B = su3_basis();
  if (su2)
    pr.basis = {B[0], B[1], B[2]};
  else
    pr.basis.assign(B.begin(), B.end());

  std::vector<std::optional<Representation>> slots(cfg.starts);
#pragma omp parallel for schedule(dynamic) if (cfg.parallel)
  for (int s = 0; s < cfg.starts; ++s) {
    std::vector<Mat3> g;
    if (s == 0) {
      g.assign(p.ngens(), Mat3::Identity());
    } else {
      std::seed_seq seq{static_cast<std::uint32_t>(cfg.seed & 0xffffffffu),
                        static_cast<std::uint32_t>(cfg.seed >> 32), static_cast<std::uint32_t>(s)};
      std::mt19937_64 rng(seq);
      g = random_start(pr, rng, su2);
    }
    g = minimize(pr, std::move(g), cfg, su2);
    double r = relator_residual(p, g);
    if (r <= cfg.tol_residual) slots[s] = Representation{p, group, std::move(g), r};
  }
  SolveResult out;
  out.starts = cfg.starts;
  for (auto& s : slots)
    if (s) out.reps.push_back(std::move(*s));
  out.converged = static_cast<int>(out.reps.size());
  out.dropped = cfg.starts - out.converged;
  return out;
}

StabilizerClass classify_stabilizer(const Representation& rho, double null_tol, double max_residual) {
  if (rho.residual > max_residual)
    throw std::invalid_argument("classify_stabilizer: residual too large");
  const auto& B = su3_basis();
  const int n = static_cast<int>(rho.images.size());
  Eigen::MatrixXd C = Eigen::MatrixXd::Zero(std::max(1, 18 * n), 8);
  for (int i = 0; i < n; ++i) {
    const Mat3& g = rho.images[i];
    for (int b = 0; b < 8; ++b) {
      Mat3 D = B[b] * g - g * B[b];
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c) {
          C(18 * i + 6 * a + 2 * c, b) = D(a, c).real();
          C(18 * i + 6 * a + 2 * c + 1, b) = D(a, c).imag();
        }
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(C, Eigen::ComputeFullV);
  Eigen::VectorXd sv = svd.singularValues();
  StabilizerClass out;
  out.singular_values.assign(sv.data(), sv.data() + sv.size());
  const double smax = sv.size() ? sv(0) : 0.0;
  const double thr = null_tol * smax;
  int null = 0;
  for (int k = 0; k < 8; ++k) {
    double s = k < sv.size() ? sv(k) : 0.0;
    if (smax == 0.0 || s <= thr) ++null;
    else if (s < 10.0 * thr) out.flagged = true;
    if (smax > 0.0 && s <= thr && s > 0.1 * thr) out.flagged = true;
  }
  out.commutant_dim = null;
  if (null == 8) out.tag = StabTag::Central;
  else if (null == 0) out.tag = StabTag::Irreducible;
  else if (null == 1) out.tag = StabTag::ReducibleU1;
  else out.tag = StabTag::AbelianLarge;

  if (out.tag == StabTag::ReducibleU1) {
    Eigen::Matrix<double, 8, 1> v = svd.matrixV().col(7);
    Mat3 u = su3_from_coords(v);
    out.u1_generator = u;
    bool block = true;
    for (const auto& g : rho.images) block = block && frame_fits(ReductionFrame{}, g, 1e-12);
    ReductionFrame fr;
    if (!block) {
      Mat3 H = Mat3(cplx(0, -1) * u);
      H = 0.5 * (H + H.adjoint()).eval();
      Eigen::SelfAdjointEigenSolver<Mat3> es(H);
      Eigen::Vector3d ev = es.eigenvalues();
      // the repeated eigenvalue pair goes first
      int lone = std::abs(ev(0) - ev(1)) < std::abs(ev(1) - ev(2)) ? 2 : 0;
      int a = lone == 2 ? 0 : 1, b = lone == 2 ? 1 : 2;
      Mat3 g;
      g.col(0) = es.eigenvectors().col(a);
      g.col(1) = es.eigenvectors().col(b);
      g.col(2) = es.eigenvectors().col(lone);
      g.col(2) *= std::exp(cplx(0, -1) * std::arg(g.determinant()));
      fr.g = g;
    }
    for (const auto& g : rho.images)
      if (!frame_fits(fr, g, kFrameTol)) out.flagged = true;
    out.frame = fr;
  }
  return out;
}

std::vector<cplx> fingerprint(const Representation& rho, int word_len) {
  std::vector<cplx> f;
  for (const auto& w : enumerate_words(rho.presentation.ngens(), word_len))
    f.push_back(word_holonomy(rho, w).trace());
  return f;
}

std::vector<RepClass> deduplicate(const std::vector<Representation>& reps, double tol, int word_len) {
  std::vector<RepClass> classes;
  for (const auto& r : reps) {
    auto fp = fingerprint(r, word_len);
    bool merged = false;
    for (auto& c : classes) {
      double d = 0.0;
      for (size_t i = 0; i < fp.size(); ++i) d = std::max(d, std::abs(fp[i] - c.fingerprint[i]));
      if (d <= tol) {
        ++c.members;
        if (r.residual < c.rep.residual) {
          c.rep = r;
          c.fingerprint = fp;
        }
        merged = true;
        break;
      }
    }
    if (!merged) classes.push_back({r, fp, 1});
  }
  auto key = [](const RepClass& c) {
    std::vector<long long> k;
    for (const auto& z : c.fingerprint) {
      k.push_back(std::llround(z.real() * 1e6));
      k.push_back(std::llround(z.imag() * 1e6));
    }
    return k;
  };
  std::stable_sort(classes.begin(), classes.end(),
                   [&](const RepClass& a, const RepClass& b) { return key(a) > key(b); });
  return classes;
}

}  // namespace su3kit
