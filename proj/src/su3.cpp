#include "su3kit/su3.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <stdexcept>

namespace su3kit {

namespace {
const cplx I1(0.0, 1.0);
}

Mat3 project_su3(const Mat3& M) {
  Eigen::JacobiSVD<Mat3> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(2) < 1e-12 * s(0) || !std::isfinite(s(0)))
    throw std::invalid_argument("project_su3: singular matrix");
  Mat3 W = svd.matrixU() * svd.matrixV().adjoint();
  cplx d = W.determinant();
  W *= std::exp(-I1 * std::arg(d) / 3.0);
  return W;
}

Mat2 project_su2(const Mat2& M) {
  Eigen::JacobiSVD<Mat2> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  if (!(s(0) > 0.0) || s(1) < 1e-12 * s(0))
    throw std::invalid_argument("project_su2: singular matrix");
  Mat2 W = svd.matrixU() * svd.matrixV().adjoint();
  W *= std::exp(-I1 * std::arg(W.determinant()) / 2.0);
  return W;
}

bool is_su3(const Mat3& M, double tol) {
  return (M.adjoint() * M - Mat3::Identity()).norm() <= tol &&
         std::abs(M.determinant() - 1.0) <= tol;
}

bool is_su3_algebra(const Mat3& X, double tol) {
  return (X + X.adjoint()).norm() <= tol && std::abs(X.trace()) <= tol;
}

std::pair<cplx, cplx> char_poly(const Mat3& M) {
  cplx t = M.trace();
  return {t, std::conj(t)};
}

std::array<cplx, 3> char_poly_roots(cplx c2, cplx c1) {
  // companion matrix eigenvalues, then a Newton step on each root
  Mat3 C = Mat3::Zero();
  C(0, 2) = 1.0;
  C(1, 0) = 1.0;
  C(1, 2) = -c1;
  C(2, 1) = 1.0;
  C(2, 2) = c2;
  Eigen::ComplexEigenSolver<Mat3> es(C, false);
  std::array<cplx, 3> r;
  for (int i = 0; i < 3; ++i) {
    cplx x = es.eigenvalues()(i);
    for (int it = 0; it < 2; ++it) {
      cplx p = ((x - c2) * x + c1) * x - 1.0;
      cplx dp = (3.0 * x - 2.0 * c2) * x + c1;
      if (std::abs(dp) < 1e-8) break;
      x -= p / dp;
    }
    r[i] = x;
  }
  return r;
}

bool same_class(const Mat3& M, const Mat3& N, double tol) {
  return std::abs(M.trace() - N.trace()) <= tol;
}

double eigen_gap(const Mat3& M) {
  // Schur rather than the cubic: a repeated root of the cubic is only resolved to ~eps^(1/k)
  Eigen::ComplexSchur<Mat3> cs(M, false);
  const auto r = cs.matrixT().diagonal();
  return std::min({std::abs(r[0] - r[1]), std::abs(r[0] - r[2]), std::abs(r[1] - r[2])});
}

Mat3 expm_skew(const Mat3& X) {
  Mat3 H = -I1 * X;
  H = 0.5 * (H + H.adjoint()).eval();
  Eigen::SelfAdjointEigenSolver<Mat3> es(H);
  Eigen::Vector3cd e;
  for (int i = 0; i < 3; ++i) e(i) = std::exp(I1 * es.eigenvalues()(i));
  return es.eigenvectors() * e.asDiagonal() * es.eigenvectors().adjoint();
}

Mat3 logm_unitary(const Mat3& U) {
  // unitary matrices are normal; the complex Schur form is diagonal
  Eigen::ComplexSchur<Mat3> cs(U);
  Mat3 T = cs.matrixT();
  Mat3 D = Mat3::Zero();
  for (int i = 0; i < 3; ++i) D(i, i) = I1 * std::arg(T(i, i));
  Mat3 L = cs.matrixU() * D * cs.matrixU().adjoint();
  return 0.5 * (L - L.adjoint());
}

Mat3 embed_su2(const Mat2& A) {
  Mat3 M = Mat3::Identity();
  M.topLeftCorner<2, 2>() = A;
  return M;
}

Mat2 upper_block(const Mat3& M) { return M.topLeftCorner<2, 2>(); }

const std::array<Mat3, 8>& su3_basis() {
  static const std::array<Mat3, 8> basis = [] {
    std::array<Mat3, 8> b;
    for (auto& m : b) m.setZero();
    const double r = 1.0 / std::sqrt(2.0);
    // lambda_1 .. lambda_8
    b[0](0, 1) = b[0](1, 0) = 1.0;
    b[1](0, 1) = -I1;
    b[1](1, 0) = I1;
    b[2](0, 0) = 1.0;
    b[2](1, 1) = -1.0;
    b[3](0, 2) = b[3](2, 0) = 1.0;
    b[4](0, 2) = -I1;
    b[4](2, 0) = I1;
    b[5](1, 2) = b[5](2, 1) = 1.0;
    b[6](1, 2) = -I1;
    b[6](2, 1) = I1;
    const double s3 = 1.0 / std::sqrt(3.0);
    b[7](0, 0) = s3;
    b[7](1, 1) = s3;
    b[7](2, 2) = -2.0 * s3;
    for (auto& m : b) m *= I1 * r;
    return b;
  }();
  return basis;
}

double killing_pair(const Mat3& a, const Mat3& b) { return -(a * b).trace().real(); }

Eigen::Matrix<double, 8, 1> su3_coords(const Mat3& X) {
  Eigen::Matrix<double, 8, 1> x;
  const auto& B = su3_basis();
  for (int k = 0; k < 8; ++k) x(k) = killing_pair(B[k], X);
  return x;
}

Mat3 su3_from_coords(const Eigen::Matrix<double, 8, 1>& x) {
  Mat3 X = Mat3::Zero();
  const auto& B = su3_basis();
  for (int k = 0; k < 8; ++k) X += x(k) * B[k];
  return X;
}

Mat3 hperp_matrix(const HperpVector& p) {
  Mat3 X = Mat3::Zero();
  X(0, 2) = p.z1;
  X(1, 2) = p.z2;
  X(2, 0) = -std::conj(p.z1);
  X(2, 1) = -std::conj(p.z2);
  return X;
}

HperpVector hperp_of(const Mat3& X) { return {X(0, 2), X(1, 2)}; }

HSplit split_h_hperp(const Mat3& v, const ReductionFrame& frame) {
  if (!is_su3(frame.g, kFrameTol)) throw std::invalid_argument("split_h_hperp: invalid frame");
  Mat3 w = frame.g.adjoint() * v * frame.g;
  // project the corner part onto the skew pattern, the rest is the block part
  HperpVector p{0.5 * (w(0, 2) - std::conj(w(2, 0))), 0.5 * (w(1, 2) - std::conj(w(2, 1)))};
  Mat3 h = w;
  h(0, 2) = h(1, 2) = h(2, 0) = h(2, 1) = 0.0;
  return {h, p};
}

Mat3 join_h_hperp(const Mat3& h, const HperpVector& perp, const ReductionFrame& frame) {
  return frame.g * (h + hperp_matrix(perp)) * frame.g.adjoint();
}

bool frame_fits(const ReductionFrame& frame, const Mat3& M, double tol) {
  Mat3 w = frame.g.adjoint() * M * frame.g;
  double off = std::abs(w(0, 2)) + std::abs(w(1, 2)) + std::abs(w(2, 0)) + std::abs(w(2, 1));
  return off <= tol;
}

Mat3 u_generator() {
  Mat3 u = Mat3::Zero();
  u(0, 0) = I1 / 3.0;
  u(1, 1) = I1 / 3.0;
  u(2, 2) = -2.0 * I1 / 3.0;
  return u;
}

HperpVector j_action(const HperpVector& p) {
  Mat3 x = hperp_matrix(p);
  Mat3 u = u_generator();
  return hperp_of(u * x - x * u);
}

Mat3 g_eta_conjugator(double eta) {
  const double r = 1.0 / std::sqrt(2.0);
  cplx e = std::exp(I1 * eta);
  Mat3 P = Mat3::Zero();
  P(0, 0) = r;
  P(0, 2) = r;
  P(1, 0) = r * e;
  P(1, 2) = -r * e;
  P(2, 1) = 1.0;
  return P;
}

namespace {
// residual terms |A - e^{ik eta} B|^2
struct EtaTerm {
  cplx A, B;
  double k;
};

std::array<EtaTerm, 3> eta_terms(const Mat3& M) {
  return {EtaTerm{M(1, 0), M(0, 1), 2.0}, EtaTerm{M(1, 2), M(0, 2), 1.0},
          EtaTerm{M(2, 1), M(2, 0), -1.0}};
}

double eta_r(const Mat3& M, double eta, double* d1, double* d2) {
  double r = std::norm(M(0, 0) - M(1, 1));
  double g1 = 0.0, g2 = 0.0;
  for (const auto& t : eta_terms(M)) {
    cplx e = std::exp(I1 * t.k * eta);
    cplx c = std::conj(t.A) * e * t.B;
    r += std::norm(t.A) + std::norm(t.B) - 2.0 * c.real();
    g1 += 2.0 * t.k * c.imag();
    g2 += 2.0 * t.k * t.k * c.real();
  }
  if (d1) *d1 = g1;
  if (d2) *d2 = g2;
  return r;
}
}  // namespace

// direct form; the expanded sum in eta_r cancels badly near a zero
double g_eta_residual(const Mat3& M, double eta) {
  double r = std::norm(M(0, 0) - M(1, 1));
  for (const auto& t : eta_terms(M)) r += std::norm(t.A - std::exp(I1 * t.k * eta) * t.B);
  return std::sqrt(r);
}

std::optional<double> g_eta_find(const Mat3& M, double tol) {
  const int n = 1024;
  const double two_pi = 2.0 * M_PI;
  int best = 0;
  double best_r = eta_r(M, 0.0, nullptr, nullptr);
  for (int i = 1; i < n; ++i) {
    double r = eta_r(M, two_pi * i / n, nullptr, nullptr);
    if (r < best_r - 1e-15) {
      best_r = r;
      best = i;
    }
  }
  double eta = two_pi * best / n;
  for (int it = 0; it < 30; ++it) {
    double g1, g2;
    eta_r(M, eta, &g1, &g2);
    if (g2 <= 1e-14 || std::abs(g1) < 1e-16) break;
    double step = g1 / g2;
    eta -= step;
    if (std::abs(step) < 1e-15) break;
  }
  eta = std::fmod(eta, two_pi);
  if (eta < 0) eta += two_pi;
  if (g_eta_residual(M, eta) <= tol) return eta;
  return std::nullopt;
}

Quat quat_mul(const Quat& p, const Quat& q) {
  // (a + J b)(c + J d) = (ac - conj(b) d) + J (conj(a) d + b c)
  return {p.z1 * q.z1 - std::conj(p.z2) * q.z2, std::conj(p.z1) * q.z2 + p.z2 * q.z1};
}

Quat phi_su2(const Mat2& A) { return {A(0, 0), A(1, 0)}; }

Quat quat_of(const Vec2c& v) { return {v(0), v(1)}; }

Vec2c vec_of(const Quat& q) { return Vec2c(q.z1, q.z2); }

Vec2c right_mul(const Vec2c& v, const Quat& h) {
  return Vec2c(h.z1 * v(0) - h.z2 * std::conj(v(1)), h.z2 * std::conj(v(0)) + h.z1 * v(1));
}

}  // namespace su3kit
