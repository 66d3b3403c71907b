#include "su3kit/holcalc.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

namespace su3kit {

namespace {

constexpr double kPi = std::numbers::pi;

// cubic Lagrange interpolation at fractional grid position x in [0, N]
Mat3 interp(const std::vector<Mat3>& s, double x) {
  const int N = static_cast<int>(s.size()) - 1;
  int i0 = static_cast<int>(std::floor(x)) - 1;
  i0 = std::clamp(i0, 0, N - 3);
  Mat3 out = Mat3::Zero();
  for (int a = 0; a < 4; ++a) {
    double w = 1.0;
    for (int b = 0; b < 4; ++b)
      if (b != a) w *= (x - (i0 + b)) / static_cast<double>(a - b);
    out += w * s[i0 + a];
  }
  return out;
}

// one Newton-Schulz step toward the polar factor, then fix the determinant phase
Mat3 reunitarize(const Mat3& P) {
  Mat3 Q = 0.5 * P * (3.0 * Mat3::Identity() - P.adjoint() * P);
  return Q * std::exp(cplx(0.0, -std::arg(Q.determinant()) / 3.0));
}

Mat3 rk4_step(const Mat3& P, const Mat3& a0, const Mat3& am, const Mat3& a1, double h) {
  Mat3 k1 = -a0 * P;
  Mat3 k2 = -am * (P + 0.5 * h * k1);
  Mat3 k3 = -am * (P + 0.5 * h * k2);
  Mat3 k4 = -a1 * (P + h * k3);
  return reunitarize(P + (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
}

void same_grid(const LoopConnection& A, const LoopConnection& a) {
  if (A.samples.size() != a.samples.size()) throw std::invalid_argument("loop grids do not match");
}

}  // namespace

LoopConnection make_loop(int N, const std::function<Mat3(double)>& f) {
  LoopConnection A;
  A.samples.resize(N + 1);
  for (int k = 0; k <= N; ++k) A.samples[k] = f(static_cast<double>(k) / N);
  return A;
}

LoopConnection loop_axpy(const LoopConnection& A, double t, const LoopConnection& a) {
  same_grid(A, a);
  LoopConnection B = A;
  for (size_t k = 0; k < B.samples.size(); ++k) B.samples[k] += t * a.samples[k];
  return B;
}

LoopConnection loop_conjugate(const LoopConnection& A, const Mat3& g) {
  LoopConnection B = A;
  for (auto& s : B.samples) s = g * s * g.adjoint();
  return B;
}

void check_loop(const LoopConnection& A) {
  const int N = A.N();
  if (N < 16 || N % 2) throw std::invalid_argument("loop grid must have even N >= 16");
  for (const auto& s : A.samples)
    if (!is_su3_algebra(s, 1e-9)) throw std::invalid_argument("loop sample is not in su(3)");
}

std::vector<Mat3> transport_path(const LoopConnection& A) {
  const int N = A.N();
  const double h = 1.0 / N;
  std::vector<Mat3> P(N + 1);
  P[0] = Mat3::Identity();
  for (int k = 0; k < N; ++k)
    P[k + 1] = rk4_step(P[k], A.samples[k], interp(A.samples, k + 0.5), A.samples[k + 1], h);
  return P;
}

Mat3 parallel_transport(const LoopConnection& A, double u) {
  const int N = A.N();
  u = std::clamp(u, 0.0, 1.0);
  const double h = 1.0 / N;
  const int full = std::min(N, static_cast<int>(std::floor(u * N)));
  Mat3 P = Mat3::Identity();
  for (int k = 0; k < full; ++k)
    P = rk4_step(P, A.samples[k], interp(A.samples, k + 0.5), A.samples[k + 1], h);
  const double rest = u * N - full;
  if (full < N && rest > 1e-14)
    P = rk4_step(P, A.samples[full], interp(A.samples, full + 0.5 * rest), interp(A.samples, full + rest),
                 rest * h);
  return P;
}

Mat3 holonomy(const LoopConnection& A) { return transport_path(A).back(); }

Mat3 simpson(const std::vector<Mat3>& f, double h) {
  const int N = static_cast<int>(f.size()) - 1;
  Mat3 s = f[0] + f[N];
  for (int k = 1; k < N; ++k) s += (k % 2 ? 4.0 : 2.0) * f[k];
  return (h / 3.0) * s;
}

std::vector<Mat3> cumulative_simpson(const std::vector<Mat3>& f, double h) {
  const int N = static_cast<int>(f.size()) - 1;
  std::vector<Mat3> F(N + 1);
  F[0] = Mat3::Zero();
  for (int j = 0; j + 2 <= N; j += 2) {
    F[j + 1] = F[j] + (h / 12.0) * (5.0 * f[j] + 8.0 * f[j + 1] - f[j + 2]);
    F[j + 2] = F[j] + (h / 3.0) * (f[j] + 4.0 * f[j + 1] + f[j + 2]);
  }
  return F;
}

HolonomyDerivatives holonomy_derivatives(const LoopConnection& A, const LoopConnection& a,
                                         const LoopConnection& b) {
  same_grid(A, a);
  same_grid(A, b);
  const int N = A.N();
  if (N < 2 || N % 2) throw std::invalid_argument("holonomy_derivatives: N must be even");
  const double h = 1.0 / N;
  auto P = transport_path(A);
  std::vector<Mat3> at(N + 1), bt(N + 1);
  for (int k = 0; k <= N; ++k) {
    at[k] = P[k].adjoint() * a.samples[k] * P[k];
    bt[k] = P[k].adjoint() * b.samples[k] * P[k];
  }
  const Mat3& hol = P[N];
  auto Ia = cumulative_simpson(at, h);
  auto Ib = cumulative_simpson(bt, h);
  std::vector<Mat3> g(N + 1);
  for (int k = 0; k <= N; ++k) g[k] = at[k] * Ib[k] + bt[k] * Ia[k];
  HolonomyDerivatives out;
  out.first = -hol * Ia[N];
  out.second_tr = (hol * simpson(g, h)).trace();
  return out;
}

double TracePolynomial::value(cplx z) const {
  double v = 0.0;
  for (auto [p, q, c] : terms) v += c * std::pow(z.real(), p) * std::pow(z.imag(), q);
  return v;
}

std::pair<double, double> TracePolynomial::gradient(cplx z) const {
  double gx = 0.0, gy = 0.0;
  for (auto [p, q, c] : terms) {
    if (p > 0) gx += c * p * std::pow(z.real(), p - 1) * std::pow(z.imag(), q);
    if (q > 0) gy += c * q * std::pow(z.real(), p) * std::pow(z.imag(), q - 1);
  }
  return {gx, gy};
}

double TracePolynomial::coefficient_norm() const {
  double s = 0.0;
  for (auto [p, q, c] : terms) s += std::abs(c);
  return s;
}

EtaProfile eta_profile(int nr, int nth) {
  EtaProfile e;
  double total = 0.0;
  for (int i = 0; i < nr; ++i) {
    const double r = (i + 0.5) / nr;
    const double s = r / 0.9;
    const double bump = s < 1.0 ? (1.0 - s * s) * (1.0 - s * s) : 0.0;
    for (int j = 0; j < nth; ++j) {
      const double th = 2.0 * kPi * j / nth;
      e.x.push_back(r * std::cos(th));
      e.y.push_back(r * std::sin(th));
      e.w.push_back(bump * r);
      total += bump * r;
    }
  }
  for (auto& w : e.w) w /= total;
  return e;
}

double perturbation_value_at(const PerturbationSpec& spec, const LoopConnection& a, double t, bool parallel) {
  const auto& e = spec.eta;
  const int n = static_cast<int>(e.w.size());
  std::vector<double> vals(n, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k < n; ++k) {
    if (e.w[k] == 0.0) continue;
    LoopConnection A = spec.family(e.x[k], e.y[k]);
    if (t != 0.0) A = loop_axpy(A, t, a);
    vals[k] = e.w[k] * spec.tau.value(holonomy(A).trace());
  }
  double p = 0.0;
  for (double v : vals) p += v;
  return p;
}

double perturbation_value(const PerturbationSpec& spec) {
  return perturbation_value_at(spec, LoopConnection{}, 0.0);
}

double perturbation_derivative(const PerturbationSpec& spec, const LoopConnection& a, bool parallel) {
  const auto& e = spec.eta;
  const int n = static_cast<int>(e.w.size());
  std::vector<double> vals(n, 0.0);
#pragma omp parallel for schedule(static) if (parallel)
  for (int k = 0; k < n; ++k) {
    if (e.w[k] == 0.0) continue;
    LoopConnection A = spec.family(e.x[k], e.y[k]);
    auto d = holonomy_derivatives(A, a, a);
    cplx z = holonomy(A).trace();
    cplx dz = d.first.trace();
    auto [gx, gy] = spec.tau.gradient(z);
    vals[k] = e.w[k] * (gx * dz.real() + gy * dz.imag());
  }
  double p = 0.0;
  for (double v : vals) p += v;
  return p;
}

LoopConnection random_loop(std::mt19937_64& rng, int N, double scale) {
  std::normal_distribution<double> nd(0.0, scale);
  const auto& B = su3_basis();
  std::array<Mat3, 4> c;
  for (auto& X : c) {
    X = Mat3::Zero();
    for (int i = 0; i < 8; ++i) X += nd(rng) * B[i];
  }
  return make_loop(N, [&](double u) {
    const double w = 2 * kPi * u;
    return Mat3(c[0] + c[1] * std::cos(w) + c[2] * std::sin(w) + c[3] * std::cos(2 * w));
  });
}

DerivativeFdReport derivative_fd_check(int samples, int N, std::uint64_t seed, bool parallel) {
  std::mt19937_64 rng(seed);
  std::vector<std::array<LoopConnection, 3>> in;
  for (int k = 0; k < samples; ++k)
    in.push_back({random_loop(rng, N, 0.5), random_loop(rng, N, 0.35), random_loop(rng, N, 0.35)});
  std::vector<double> e1(samples), e2(samples);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int k = 0; k < samples; ++k) {
    const auto& [A, a, b] = in[k];
    auto d = holonomy_derivatives(A, a, b);
    const double h1 = 1e-4, h2 = 1e-3;
    Mat3 fd = (holonomy(loop_axpy(A, h1, a)) - holonomy(loop_axpy(A, -h1, a))) / (2 * h1);
    e1[k] = (d.first - fd).norm();
    auto T = [&](double s, double t) { return holonomy(loop_axpy(loop_axpy(A, s, a), t, b)).trace(); };
    cplx fd2 = (T(h2, h2) - T(h2, -h2) - T(-h2, h2) + T(-h2, -h2)) / (4 * h2 * h2);
    e2[k] = std::abs(d.second_tr - fd2);
  }
  DerivativeFdReport rep;
  rep.samples = samples;
  for (int k = 0; k < samples; ++k) {
    rep.max_first_error = std::max(rep.max_first_error, e1[k]);
    rep.max_second_error = std::max(rep.max_second_error, e2[k]);
  }
  return rep;
}

double loop_norm(const LoopConnection& a) {
  const int N = a.N();
  std::vector<Mat3> f(N + 1);
  for (int k = 0; k <= N; ++k) f[k] = Mat3::Identity() * a.samples[k].squaredNorm();
  return std::sqrt(simpson(f, 1.0 / N)(0, 0).real());
}

GradientNormReport perturbation_gradient_norm_check(const PerturbationSpec& spec, int samples,
                                                    std::uint64_t seed) {
  GradientNormReport rep;
  rep.samples = samples;
  for (auto [p, q, c] : spec.tau.terms) {
    const int d = p + q;
    if (d > 0) rep.bound += std::abs(c) * d * std::pow(3.0, d - 1);
  }
  rep.bound *= std::sqrt(3.0);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const int N = spec.family(0.0, 0.0).N();
  const auto& B = su3_basis();
  for (int s = 0; s < samples; ++s) {
    std::array<Eigen::Matrix<double, 8, 1>, 3> c;
    for (auto& v : c)
      for (int i = 0; i < 8; ++i) v(i) = nd(rng);
    LoopConnection a = make_loop(N, [&](double u) {
      Eigen::Matrix<double, 8, 1> x = c[0] + c[1] * std::cos(2 * kPi * u) + c[2] * std::sin(2 * kPi * u);
      Mat3 X = Mat3::Zero();
      for (int i = 0; i < 8; ++i) X += x(i) * B[i];
      return X;
    });
    const double na = loop_norm(a);
    rep.max_ratio = std::max(rep.max_ratio, std::abs(perturbation_derivative(spec, a)) / na);
  }
  return rep;
}

std::string hess_case_name(HessCase c) {
  switch (c) {
    case HessCase::GammaGamma: return "gamma-gamma";
    case HessCase::EllGamma: return "ell-gamma";
    case HessCase::GammaIGammaJ: return "gammai-gammaj";
    case HessCase::Conj: return "conj";
    case HessCase::EllGammaIGammaJ: return "ell-gammai-gammaj";
  }
  return "?";
}

HessCase hess_case_from_name(const std::string& s) {
  for (auto c : {HessCase::GammaGamma, HessCase::EllGamma, HessCase::GammaIGammaJ, HessCase::Conj,
                 HessCase::EllGammaIGammaJ})
    if (hess_case_name(c) == s) return c;
  throw std::invalid_argument("unknown Hessian case '" + s + "'");
}

namespace {
void check_block(const Mat3& L) {
  double off = std::abs(L(0, 2)) + std::abs(L(1, 2)) + std::abs(L(2, 0)) + std::abs(L(2, 1));
  if (off > 1e-8 || std::abs(L(2, 2) - 1.0) > 1e-8 || !is_su3(L, 1e-8))
    throw std::invalid_argument("L must be an SU(2) element embedded as L^ (+) 1");
}
}  // namespace

cplx hessian_closed_form(HessCase c, const HessInputs& in) {
  check_block(in.L);
  const Mat3& L = in.L;
  const Mat3 xi = hperp_matrix(in.xi_i), zi = hperp_matrix(in.zeta_i);
  const Mat3 xj = hperp_matrix(in.xi_j), zj = hperp_matrix(in.zeta_j);
  switch (c) {
    case HessCase::GammaGamma: return 2.0 * (xi * zi).trace();
    case HessCase::EllGamma: return (L * (xi * zi + zi * xi)).trace();
    case HessCase::GammaIGammaJ: return ((xi + xj) * (zi + zj)).trace();
    case HessCase::Conj: {
      Mat3 a = xi + L * xj * L.adjoint(), b = zi + L * zj * L.adjoint();
      return (a * b).trace();
    }
    case HessCase::EllGammaIGammaJ: return (L * (xi + xj) * (zi + zj)).trace();
  }
  return 0.0;
}

cplx hessian_closed_form_sym(HessCase c, const HessInputs& in) {
  HessInputs sw = in;
  std::swap(sw.xi_i, sw.zeta_i);
  std::swap(sw.xi_j, sw.zeta_j);
  return 0.5 * (hessian_closed_form(c, in) + hessian_closed_form(c, sw));
}

cplx hessian_ordered_form(HessCase c, const HessInputs& in) {
  if (c != HessCase::EllGammaIGammaJ) return hessian_closed_form_sym(c, in);
  check_block(in.L);
  const Mat3& L = in.L;
  const Mat3 xi = hperp_matrix(in.xi_i), zi = hperp_matrix(in.zeta_i);
  const Mat3 xj = hperp_matrix(in.xi_j), zj = hperp_matrix(in.zeta_j);
  // gamma_j runs after gamma_i, so only the (later j, earlier i) cross products survive
  return (L * (0.5 * (xi * zi + zi * xi) + 0.5 * (xj * zj + zj * xj) + xj * zi + zj * xi)).trace();
}

double hessian_normalization(HessCase c) {
  return (c == HessCase::GammaGamma || c == HessCase::EllGamma) ? 2.0 : 1.0;
}

SynthesizedLoop synthesize_hessian_loop(HessCase c, const HessInputs& in, std::uint64_t seed, int N) {
  check_block(in.L);
  enum Kind { G_I, G_J, ELL, ELL_INV };
  std::vector<Kind> segs;
  switch (c) {
    case HessCase::GammaGamma: segs = {G_I}; break;
    case HessCase::EllGamma: segs = {ELL, G_I}; break;
    case HessCase::GammaIGammaJ: segs = {G_I, G_J}; break;
    case HessCase::Conj: segs = {G_I, ELL_INV, G_J, ELL}; break;
    case HessCase::EllGammaIGammaJ: segs = {ELL, G_I, G_J}; break;
  }
  const int k = static_cast<int>(segs.size());
  if (N % (2 * k) != 0) throw std::invalid_argument("synthesize_hessian_loop: N must be a multiple of 2k");

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  const auto& B = su3_basis();
  auto rand_hperp = [&](double s) {
    return hperp_matrix({cplx(s * nd(rng), s * nd(rng)), cplx(s * nd(rng), s * nd(rng))});
  };
  const Mat3 logL = logm_unitary(in.L);
  const bool has_ell_total = c == HessCase::EllGamma || c == HessCase::EllGammaIGammaJ;

  struct Seg {
    Mat3 X;         // A = k c(tau) X on the segment
    bool ell;
    double amp;     // c amplitude on gamma segments
    Mat3 xa, xb;    // prescribed integrals of alpha for a and b
    Mat3 Ea, Eb;    // exact parts
    Mat3 H;         // segment holonomy
  };
  std::vector<Seg> S;
  for (Kind kd : segs) {
    Seg s;
    s.ell = kd == ELL || kd == ELL_INV;
    s.amp = 0.8 + 0.4 * std::abs(nd(rng));
    if (s.ell) {
      s.X = kd == ELL ? Mat3(-logL) : logL;
      s.H = kd == ELL ? in.L : Mat3(in.L.adjoint());
      s.xa = s.xb = Mat3::Zero();
    } else {
      s.X = nd(rng) * B[0] + nd(rng) * B[1] + nd(rng) * B[2];
      s.H = Mat3::Identity();
      s.xa = hperp_matrix(kd == G_I ? in.xi_i : in.xi_j);
      s.xb = hperp_matrix(kd == G_I ? in.zeta_i : in.zeta_j);
    }
    // exact parts only integrate out when the whole loop has trivial holonomy
    s.Ea = has_ell_total ? Mat3::Zero() : rand_hperp(0.5);
    s.Eb = has_ell_total ? Mat3::Zero() : rand_hperp(0.5);
    S.push_back(s);
  }

  auto c_of = [&](const Seg& s, double tau) {
    const double w = 1.0 - std::cos(2 * kPi * tau);
    return s.ell ? w : s.amp * std::sin(2 * kPi * tau) * w;
  };
  auto C_of = [&](const Seg& s, double tau) {
    if (s.ell) return tau - std::sin(2 * kPi * tau) / (2 * kPi);
    return s.amp * ((1.0 - std::cos(2 * kPi * tau)) / (2 * kPi) - (1.0 - std::cos(4 * kPi * tau)) / (8 * kPi));
  };

  SynthesizedLoop out;
  out.A.samples.resize(N + 1);
  out.a.samples.resize(N + 1);
  out.b.samples.resize(N + 1);
  const int per = N / k;
  for (int idx = 0; idx <= N; ++idx) {
    int i = std::min(idx / per, k - 1);
    double tau = static_cast<double>(idx - i * per) / per;
    const Seg& s = S[i];
    const double w = 1.0 - std::cos(2 * kPi * tau);
    const double e = std::sin(2 * kPi * tau) * w;
    const Mat3 P = expm_skew(-C_of(s, tau) * s.X);
    Mat3 alpha_a = w * s.xa + e * s.Ea;
    Mat3 alpha_b = w * s.xb + e * s.Eb;
    out.A.samples[idx] = static_cast<double>(k) * c_of(s, tau) * s.X;
    out.a.samples[idx] = static_cast<double>(k) * P * alpha_a * P.adjoint();
    out.b.samples[idx] = static_cast<double>(k) * P * alpha_b * P.adjoint();
  }
  for (Kind kd : segs)
    out.segments.push_back(kd == G_I ? "gamma_i" : kd == G_J ? "gamma_j" : kd == ELL ? "ell" : "ell^-1");
  return out;
}

HessianCheck hessian_synthesis_check(HessCase c, const HessInputs& in, std::uint64_t seed, int N) {
  auto loop = synthesize_hessian_loop(c, in, seed, N);
  HessianCheck r;
  r.closed = hessian_closed_form_sym(c, in);
  r.ordered = hessian_ordered_form(c, in);
  auto d = holonomy_derivatives(loop.A, loop.a, loop.b);
  r.numeric = hessian_normalization(c) * d.second_tr;
  r.error = std::abs(r.closed - r.numeric);
  r.ordered_error = std::abs(r.ordered - r.numeric);
  const bool has_ell = c == HessCase::EllGamma || c == HessCase::EllGammaIGammaJ;
  r.holonomy_error = (holonomy(loop.A) - (has_ell ? in.L : Mat3::Identity())).norm();
  return r;
}

HessInputs random_hess_inputs(std::mt19937_64& rng) {
  std::normal_distribution<double> nd;
  double q[4];
  double n = 0.0;
  for (double& x : q) {
    x = nd(rng);
    n += x * x;
  }
  n = std::sqrt(n);
  const cplx al(q[0] / n, q[1] / n), be(q[2] / n, q[3] / n);
  HessInputs in;
  in.L = Mat3::Identity();
  in.L(0, 0) = al;
  in.L(0, 1) = -std::conj(be);
  in.L(1, 0) = be;
  in.L(1, 1) = std::conj(al);
  for (HperpVector* v : {&in.xi_i, &in.zeta_i, &in.xi_j, &in.zeta_j}) *v = {{nd(rng), nd(rng)}, {nd(rng), nd(rng)}};
  return in;
}

std::vector<HessianBatch> hessian_batch_check(int samples, std::uint64_t seed, int N, bool parallel) {
  const HessCase cases[5] = {HessCase::GammaGamma, HessCase::EllGamma, HessCase::GammaIGammaJ, HessCase::Conj,
                             HessCase::EllGammaIGammaJ};
  std::mt19937_64 rng(seed);
  std::vector<HessInputs> in;
  std::vector<std::uint64_t> seeds;
  for (int k = 0; k < 5 * samples; ++k) {
    in.push_back(random_hess_inputs(rng));
    seeds.push_back(rng());
  }
  std::vector<HessianCheck> out(in.size());
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int k = 0; k < 5 * samples; ++k) out[k] = hessian_synthesis_check(cases[k / samples], in[k], seeds[k], N);
  std::vector<HessianBatch> res;
  for (int c = 0; c < 5; ++c) {
    HessianBatch b;
    b.c = cases[c];
    b.samples = samples;
    for (int k = c * samples; k < (c + 1) * samples; ++k) {
      b.max_error = std::max(b.max_error, out[k].error);
      b.max_ordered_error = std::max(b.max_ordered_error, out[k].ordered_error);
      b.max_holonomy_error = std::max(b.max_holonomy_error, out[k].holonomy_error);
    }
    res.push_back(b);
  }
  return res;
}

}  // namespace su3kit
