#include "su3kit/bifurcation.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace su3kit {

namespace {

int sgn(double x) { return (x > 0) - (x < 0); }

// signs of g at the samples with exact zeros resolved from neighbours
std::vector<int> resolved_signs(const std::vector<double>& g) {
  const size_t n = g.size();
  std::vector<int> sg(n);
  for (size_t k = 0; k < n; ++k) sg[k] = sgn(g[k]);
  for (size_t k = 0; k < n; ++k) {
    if (sg[k] != 0) continue;
    int left = k > 0 ? sgn(g[k - 1]) : 0, right = k + 1 < n ? sgn(g[k + 1]) : 0;
    if ((k > 0 && left == 0) || (k + 1 < n && right == 0) || (left == 0 && right == 0))
      throw std::domain_error("spectral_flow: non-transverse crossing at sample resolution");
    sg[k] = k > 0 ? left : right;   // the crossing is counted on the far side of the sample
  }
  return sg;
}

int count_crossings(const std::vector<double>& g) {
  auto sg = resolved_signs(g);
  int c = 0;
  for (size_t k = 0; k + 1 < sg.size(); ++k) {
    if (sg[k] < 0 && sg[k + 1] > 0) ++c;
    if (sg[k] > 0 && sg[k + 1] < 0) --c;
  }
  return c;
}

double hermite(double p0, double p1, double m0, double m1, double h, double x) {
  const double x2 = x * x, x3 = x2 * x;
  return (2 * x3 - 3 * x2 + 1) * p0 + (x3 - 2 * x2 + x) * h * m0 + (-2 * x3 + 3 * x2) * p1 +
         (x3 - x2) * h * m1;
}
double hermite_d(double p0, double p1, double m0, double m1, double h, double x) {
  const double x2 = x * x;
  return ((6 * x2 - 6 * x) * p0 + (3 * x2 - 4 * x + 1) * h * m0 + (-6 * x2 + 6 * x) * p1 +
          (3 * x2 - 2 * x) * h * m1) / h;
}

}  // namespace

int spectral_flow(const EigenPath& path, double delta) {
  const size_t n = path.s.size();
  if (n < 2) return 0;
  const double s0 = path.s.front(), s1 = path.s.back();
  int total = 0;
  for (const auto& br : path.branches) {
    if (br.lambda.size() != n) throw std::invalid_argument("spectral_flow: branch length mismatch");
    std::vector<double> g(n);
    for (size_t k = 0; k < n; ++k) g[k] = br.lambda[k] - (-delta + 2 * delta * (path.s[k] - s0) / (s1 - s0));
    total += br.multiplicity * count_crossings(g);
  }
  return total;
}

int spectral_flow_fn(const std::function<double(double)>& lambda, double s0, double s1, int multiplicity,
                     double delta, int samples) {
  if (s1 <= s0) return 0;
  for (int attempt = 0; attempt < 4; ++attempt, samples = 2 * samples + 1) {
    std::vector<double> g(samples + 1);
    bool hit = false;
    for (int k = 0; k <= samples; ++k) {
      const double u = static_cast<double>(k) / samples;
      g[k] = lambda(s0 + u * (s1 - s0)) - (-delta + 2 * delta * u);
      if (g[k] == 0.0) hit = true;
    }
    if (hit) continue;
    return multiplicity * count_crossings(g);
  }
  throw std::domain_error("spectral_flow: crossing not resolved after refinement");
}

int kernel_dim(const EigenPath& path, int k, double tol) {
  int d = 0;
  for (const auto& br : path.branches)
    if (std::abs(br.lambda.at(k)) <= tol) d += br.multiplicity;
  return d;
}

double ReducibleArc::t(double s) const {
  const int K = static_cast<int>(t_knots.size());
  const double h = 1.0 / (K - 1);
  s = std::clamp(s, 0.0, 1.0);
  int k = std::min(K - 2, static_cast<int>(s / h));
  const double x = (s - k * h) / h;
  return (1 - x) * t_knots[k] + x * t_knots[k + 1];
}

namespace {
double knot_slope(const std::vector<double>& v, bool closed, int k, double h) {
  const int K = static_cast<int>(v.size());
  if (closed) {
    // v[K-1] == v[0]; neighbours wrap over the duplicated endpoint
    int km = k == 0 ? K - 2 : k - 1;
    int kp = k == K - 1 ? 1 : k + 1;
    return (v[kp] - v[km]) / (2 * h);
  }
  if (k == 0) return (v[1] - v[0]) / h;
  if (k == K - 1) return (v[K - 1] - v[K - 2]) / h;
  return (v[k + 1] - v[k - 1]) / (2 * h);
}
}  // namespace

double ReducibleArc::a(double s, int mode) const {
  const auto& v = mode == 0 ? a_knots : extra_modes.at(mode - 1).a_knots;
  const int K = static_cast<int>(v.size());
  const double h = 1.0 / (K - 1);
  s = std::clamp(s, 0.0, 1.0);
  int k = std::min(K - 2, static_cast<int>(s / h));
  const double x = (s - k * h) / h;
  return hermite(v[k], v[k + 1], knot_slope(v, closed, k, h), knot_slope(v, closed, k + 1, h), h, x);
}

double ReducibleArc::da(double s, int mode) const {
  const auto& v = mode == 0 ? a_knots : extra_modes.at(mode - 1).a_knots;
  const int K = static_cast<int>(v.size());
  const double h = 1.0 / (K - 1);
  s = std::clamp(s, 0.0, 1.0);
  int k = std::min(K - 2, static_cast<int>(s / h));
  const double x = (s - k * h) / h;
  return hermite_d(v[k], v[k + 1], knot_slope(v, closed, k, h), knot_slope(v, closed, k + 1, h), h, x);
}

int ReducibleArc::folds_before(double s) const {
  const int K = static_cast<int>(t_knots.size());
  const double h = 1.0 / (K - 1);
  int f = 0;
  for (int k = 1; k + 1 < K; ++k)
    if (k * h < s && (t_knots[k] - t_knots[k - 1]) * (t_knots[k + 1] - t_knots[k]) < 0) ++f;
  return f;
}

int ReducibleArc::parity(double s) const { return ((sf_h_base + folds_before(s)) % 2 == 0) ? 1 : -1; }

void validate_family(const ModelFamily& fam) {
  if (!(fam.delta > 0)) throw std::invalid_argument("delta must be positive");
  for (size_t i = 0; i < fam.arcs.size(); ++i) {
    const auto& A = fam.arcs[i];
    const std::string who = "arc " + (A.name.empty() ? std::to_string(i) : A.name) + ": ";
    const size_t K = A.t_knots.size();
    if (K < 2 || K != A.a_knots.size()) throw std::invalid_argument(who + "t_knots and a_knots need equal length >= 2");
    for (int m = 0; m < A.modes(); ++m) {
      if (A.b_of(m) == 0.0) throw std::invalid_argument(who + "b = 0 is not generic");
      if (m > 0 && A.extra_modes[m - 1].a_knots.size() != K)
        throw std::invalid_argument(who + "every mode needs one a value per t knot");
    }
    if (A.sf_hperp_offset % 2) throw std::invalid_argument(who + "sf_hperp_offset must be even");
    for (double t : A.t_knots)
      if (t < -1.0 || t > 1.0) throw std::invalid_argument(who + "t outside [-1,1]");
    for (size_t k = 0; k + 1 < K; ++k)
      if (A.t_knots[k] == A.t_knots[k + 1]) throw std::invalid_argument(who + "t must not be constant on a segment");
    if (A.closed) {
      if (K < 3) throw std::invalid_argument(who + "closed arcs need at least 3 knots");
      bool match = A.t_knots.front() == A.t_knots.back();
      for (int m = 0; m < A.modes(); ++m) {
        const auto& v = m == 0 ? A.a_knots : A.extra_modes[m - 1].a_knots;
        match = match && v.front() == v.back();
      }
      if (!match) throw std::invalid_argument(who + "closed arc data must match at s = 0 and 1");
      // parity is tracked from s = 0, so the seam must not be a turning point of t
      if ((A.t_knots[1] - A.t_knots[0]) * (A.t_knots[K - 1] - A.t_knots[K - 2]) < 0)
        throw std::invalid_argument(who + "closed arc must not turn at s = 0");
    } else {
      if (std::abs(A.t_knots.front()) != 1.0 || std::abs(A.t_knots.back()) != 1.0)
        throw std::invalid_argument(who + "open arcs must end on t = -1 or t = +1");
    }
    if (A.modes() > 1) {
      const int M = 2048;
      for (int k = 0; k <= M; ++k) {
        const double s = static_cast<double>(k) / M;
        int live = 0;
        for (int m = 0; m < A.modes(); ++m) live += A.a(s, m) * A.b_of(m) < 0;
        if (live > 1) throw std::invalid_argument(who + "two modes carry irreducibles at the same point");
      }
    }
  }
}

std::vector<BifurcationPoint> bifurcation_points(const ReducibleArc& arc) {
  const int M = 4096;
  std::vector<BifurcationPoint> out;
  for (int m = 0; m < arc.modes(); ++m) {
    double prev = arc.a(0.0, m);
    if (prev == 0.0 && !arc.closed) throw std::domain_error("bifurcation_points: zero at an endpoint");
    for (int k = 1; k <= M; ++k) {
      double s = static_cast<double>(k) / M;
      double cur = arc.a(s, m);
      if (cur == 0.0) {
        double d = arc.da(s, m);
        if (std::abs(d) < 1e-9) throw std::domain_error("bifurcation_points: tangential zero");
        out.push_back({s, sgn(d), m});
        prev = cur;
        continue;
      }
      if (prev != 0.0 && sgn(prev) != sgn(cur)) {
        double lo = s - 1.0 / M, hi = s;
        for (int it = 0; it < 60; ++it) {
          double mid = 0.5 * (lo + hi);
          if (sgn(arc.a(mid, m)) == sgn(arc.a(lo, m))) lo = mid;
          else hi = mid;
        }
        double z = 0.5 * (lo + hi), d = arc.da(z, m);
        if (std::abs(d) < 1e-9) throw std::domain_error("bifurcation_points: tangential zero");
        out.push_back({z, sgn(d), m});
      }
      prev = cur;
    }
  }
  std::stable_sort(out.begin(), out.end(), [](const auto& p, const auto& q) { return p.s < q.s; });
  return out;
}

int sf_hperp(const ReducibleArc& arc, double s, double delta) {
  int total = arc.sf_hperp_offset;
  for (int m = 0; m < arc.modes(); ++m) {
    auto lam = [&](double x) { return 2.0 * arc.a(x, m); };
    // the count does not depend on delta below the smallest nonzero endpoint eigenvalue
    double d = delta;
    for (double e : {lam(0.0), lam(s)})
      if (e != 0.0) d = std::min(d, 0.5 * std::abs(e));
    total += spectral_flow_fn(lam, 0.0, s, 2, d);
  }
  return total;
}

Slice moduli_slice(const ModelFamily& fam, double t) {
  Slice sl;
  sl.t = t;
  for (size_t i = 0; i < fam.arcs.size(); ++i) {
    const auto& A = fam.arcs[i];
    const int K = static_cast<int>(A.t_knots.size());
    const double h = 1.0 / (K - 1);
    for (int k = 0; k + 1 < K; ++k) {
      const double t0 = A.t_knots[k], t1 = A.t_knots[k + 1];
      const bool last = k + 2 == K && !A.closed;
      const double x = (t - t0) / (t1 - t0);
      if (!(x >= 0.0 && (x < 1.0 || (last && x <= 1.0)))) continue;
      const double s = std::min(1.0, (k + x) * h);
      for (int m = 0; m < A.modes(); ++m)
        if (std::abs(A.a(s, m)) < 1e-12) throw std::domain_error("moduli_slice: t is not a regular value");
      ReduciblePoint r{static_cast<int>(i), s, A.a(s), A.parity(s), sf_hperp(A, s, fam.delta)};
      sl.reducibles.push_back(r);
      sl.lambda_dp += 0.5 * r.parity * (r.sf_hperp - 4.0 * A.cs_value + 2.0);
      for (int m = 0; m < A.modes(); ++m) {
        const double a = A.a(s, m), b = A.b_of(m);
        if (a * b < 0) {
          IrreduciblePoint p{static_cast<int>(i), s, -a / (2 * b), -r.parity * sgn(b), m};
          sl.irreducibles.push_back(p);
          sl.lambda_prime += p.sign;
        }
      }
    }
  }
  return sl;
}

AuditResult wall_crossing_audit(const ModelFamily& fam) {
  validate_family(fam);
  AuditResult res;
  res.minus = moduli_slice(fam, -1.0);
  res.plus = moduli_slice(fam, 1.0);
  res.check_b = true;
  for (size_t i = 0; i < fam.arcs.size(); ++i) {
    const auto& A = fam.arcs[i];
    ArcAudit au;
    au.name = A.name.empty() ? std::to_string(i) : A.name;
    au.closed = A.closed;
    au.points = bifurcation_points(A);
    int sum = 0;
    for (const auto& p : au.points) sum += p.sign;
    au.sf_endpoints = sf_hperp(A, 1.0, fam.delta) - A.sf_hperp_offset;
    if (A.closed) {
      au.b = 0;
      au.orientation = 0;
      if (sum != 0) {
        au.ok = false;
        au.problem = "closed arc with nonzero signed bifurcation count";
      }
      if (A.folds_before(1.0) % 2) {
        au.ok = false;
        au.problem = "closed arc with an odd number of folds";
      }
    } else {
      const int e0 = A.parity(0.0), e1 = A.parity(1.0);
      const int t0 = A.t_knots.front() > 0 ? 1 : -1, t1 = A.t_knots.back() > 0 ? 1 : -1;
      au.orientation = t1 * e1;
      au.b = au.orientation * sum;
      if (t0 * e0 != -t1 * e1) {
        au.ok = false;
        au.problem = "endpoint orientations are inconsistent";
      }
      if (au.sf_endpoints % 2 || 2 * au.b != au.orientation * au.sf_endpoints) {
        au.ok = false;
        au.problem = "b(C) differs from half the hperp spectral flow";
      }
    }
    if (!au.ok) {
      res.check_b = false;
      res.failures.push_back("arc " + au.name + ": " + au.problem);
    }
    res.bifurcation_total += au.b;
    res.arcs.push_back(au);
  }
  res.check_a = res.plus.lambda_prime - res.minus.lambda_prime == res.bifurcation_total;
  if (!res.check_a) res.failures.push_back("lambda' jump differs from the bifurcation total");
  const double dm = res.minus.lambda_prime - res.minus.lambda_dp;
  const double dp = res.plus.lambda_prime - res.plus.lambda_dp;
  res.check_c = std::abs(dm - dp) < 1e-9;
  if (!res.check_c) res.failures.push_back("lambda' - lambda'' differs between t = -1 and t = +1");
  res.ok = res.check_a && res.check_b && res.check_c;
  return res;
}

std::vector<AuditResult> audit_families(const std::vector<ModelFamily>& fams, bool parallel) {
  const int n = static_cast<int>(fams.size());
  std::vector<AuditResult> out(n);
  std::vector<std::string> err(n);
#pragma omp parallel for schedule(dynamic) if (parallel)
  for (int i = 0; i < n; ++i) {
    try {
      out[i] = wall_crossing_audit(fams[i]);
    } catch (const std::exception& e) {
      err[i] = e.what();
    }
  }
  for (int i = 0; i < n; ++i)
    if (!err[i].empty()) throw std::invalid_argument("family " + std::to_string(i) + ": " + err[i]);
  return out;
}

namespace {

std::vector<double> random_knots(std::mt19937_64& rng, int K) {
  std::normal_distribution<double> nd(0.0, 0.6);
  std::vector<double> v(K);
  for (auto& x : v) {
    x = nd(rng);
    if (std::abs(x) < 0.05) x = x < 0 ? -0.05 : 0.05;
  }
  return v;
}

ReducibleArc random_arc(std::mt19937_64& rng, int idx) {
  std::uniform_real_distribution<double> U(0.0, 1.0);
  std::uniform_int_distribution<int> kind(0, 2), ksz(4, 8), base(0, 3), off(-2, 2);
  ReducibleArc A;
  A.name = "r" + std::to_string(idx);
  A.b = (U(rng) < 0.5 ? -1.0 : 1.0) * (0.5 + 1.5 * U(rng));
  A.sf_h_base = base(rng);
  A.cs_value = std::round(4.0 * U(rng)) / 4.0;   // 4 cs integral keeps lambda'' in (1/2)Z
  A.sf_hperp_offset = 2 * off(rng);
  const int K = ksz(rng);
  switch (kind(rng)) {
    case 0: {   // monotone open arc, either direction
      std::vector<double> in(K - 2);
      for (auto& x : in) x = -0.95 + 1.9 * U(rng);
      std::sort(in.begin(), in.end());
      A.t_knots.push_back(-1.0);
      for (double x : in) A.t_knots.push_back(x);
      A.t_knots.push_back(1.0);
      for (size_t k = 1; k < A.t_knots.size(); ++k)
        if (A.t_knots[k] <= A.t_knots[k - 1]) A.t_knots[k] = std::min(1.0, A.t_knots[k - 1] + 1e-3);
      A.t_knots.back() = 1.0;
      if (U(rng) < 0.5) std::reverse(A.t_knots.begin(), A.t_knots.end());
      break;
    }
    case 1: {   // U-shaped open arc with both ends on one side
      const double e = U(rng) < 0.5 ? -1.0 : 1.0;
      const double turn = -0.8 * e * U(rng);
      const int Kh = K / 2;
      A.t_knots.assign(2 * Kh + 1, 0.0);
      for (int k = 0; k <= Kh; ++k) {
        const double x = e + (turn - e) * static_cast<double>(k) / Kh;
        A.t_knots[k] = x;
        A.t_knots[2 * Kh - k] = x;
      }
      // break the mirror symmetry of the interior knots without moving ends or turn
      for (int k = Kh + 1; k < 2 * Kh; ++k) A.t_knots[k] += 0.3 * (A.t_knots[k - 1] - A.t_knots[k]) * U(rng);
      break;
    }
    default: {   // closed loop around a centre, seam at a non-turning point
      const double c = -0.4 + 0.8 * U(rng), w = 0.05 + 0.45 * U(rng);
      A.closed = true;
      A.t_knots = {c, c + w, c, c - w, c};
      break;
    }
  }
  A.a_knots = random_knots(rng, static_cast<int>(A.t_knots.size()));
  if (A.closed) A.a_knots.back() = A.a_knots.front();
  return A;
}

}  // namespace

ModelFamily random_family(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<int> narcs(1, 4);
  ModelFamily fam;
  fam.delta = 0.05;
  const int n = narcs(rng);
  for (int i = 0; i < n; ++i) {
    for (;;) {
      ReducibleArc A = random_arc(rng, i);
      try {
        ModelFamily one{{A}, fam.delta};
        validate_family(one);
        bifurcation_points(A);
        moduli_slice(one, -1.0);
        moduli_slice(one, 1.0);
      } catch (const std::exception&) {
        continue;
      }
      fam.arcs.push_back(std::move(A));
      break;
    }
  }
  return fam;
}

std::vector<SweepRow> sweep(const ModelFamily& fam, int points) {
  std::vector<SweepRow> rows;
  for (int k = 0; k < points; ++k) {
    const double t = points == 1 ? 0.0 : -1.0 + 2.0 * k / (points - 1);
    try {
      Slice sl = moduli_slice(fam, t);
      rows.push_back({t, sl.lambda_prime, sl.lambda_dp});
    } catch (const std::domain_error&) {
    }
  }
  return rows;
}

}  // namespace su3kit
