#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace su3kit {

// one eigenvalue branch sampled on a common s grid
struct EigenBranch {
  std::vector<double> lambda;
  int multiplicity = 1;
};

struct EigenPath {
  std::vector<double> s;
  std::vector<EigenBranch> branches;
};

// Signed count of crossings of the eigenvalue graphs with the segment from (s0,-delta) to
// (s1,delta), weighted by multiplicity. A sample lying exactly on the segment is resolved from
// its neighbours; a run of such samples throws std::domain_error (non-transverse).
int spectral_flow(const EigenPath& path, double delta);
// same for a function on [s0, s1]; samples are refined when a sample hits the segment
int spectral_flow_fn(const std::function<double(double)>& lambda, double s0, double s1, int multiplicity,
                     double delta, int samples = 2048);
// multiplicity-weighted count of branches with lambda(s_k) == 0
int kernel_dim(const EigenPath& path, int k, double tol = 0.0);

// a further multiplicity-two hperp eigenvalue 2a(s) on the same arc with its own quartic term;
// model f = sum_k a_k |z_k|^2 + b_k |z_k|^4, with the regions a_k b_k < 0 pairwise disjoint so
// every critical orbit is an isolated circle
struct HperpMode {
  std::vector<double> a_knots;
  double b = -1.0;
};

struct ReducibleArc {
  std::string name;
  std::vector<double> t_knots;   // piecewise linear in s, knots at s = k/(K-1)
  std::vector<double> a_knots;   // Catmull-Rom cubic through the same knots (periodic if closed)
  double b = -1.0;               // quartic coefficient, nonzero
  bool closed = false;
  int sf_h_base = 0;             // parity input for (-1)^Sf at s = 0
  double cs_value = 0.0;
  int sf_hperp_offset = 0;       // hperp flow from the product connection to s = 0, even
  std::vector<HperpMode> extra_modes;

  int modes() const { return 1 + static_cast<int>(extra_modes.size()); }
  double b_of(int mode) const { return mode == 0 ? b : extra_modes.at(mode - 1).b; }
  double t(double s) const;
  double a(double s, int mode = 0) const;
  double da(double s, int mode = 0) const;
  int folds_before(double s) const;
  int parity(double s) const;    // +1 or -1
};

struct ModelFamily {
  std::vector<ReducibleArc> arcs;
  double delta = 0.05;
};

// throws std::invalid_argument with the arc name on malformed data
void validate_family(const ModelFamily& fam);

struct BifurcationPoint {
  double s = 0.0;
  int sign = 0;
  int mode = 0;
};
// zeros of every a_k(s) with sign(a_k'(s)), sorted by s; throws std::domain_error at a
// tangential zero
std::vector<BifurcationPoint> bifurcation_points(const ReducibleArc& arc);

// Sf of the hperp Hessian diag(2a_k) (each multiplicity two) from the product connection to the
// arc point s
int sf_hperp(const ReducibleArc& arc, double s, double delta);

struct ReduciblePoint {
  int arc = 0;
  double s = 0.0;
  double a = 0.0;
  int parity = 1;
  int sf_hperp = 0;
};
struct IrreduciblePoint {
  int arc = 0;
  double s = 0.0;
  double radius2 = 0.0;   // |z|^2 = -a / (2b)
  int sign = 0;
  int mode = 0;
};
struct Slice {
  double t = 0.0;
  std::vector<ReduciblePoint> reducibles;
  std::vector<IrreduciblePoint> irreducibles;
  int lambda_prime = 0;
  double lambda_dp = 0.0;   // (1/2) sum parity (Sf_hperp - 4 cs + 2)
};

// throws std::domain_error when t is not a regular value
Slice moduli_slice(const ModelFamily& fam, double t);

struct ArcAudit {
  std::string name;
  bool closed = false;
  int b = 0;
  int sf_endpoints = 0;   // hperp spectral flow along the whole arc
  int orientation = 0;
  std::vector<BifurcationPoint> points;
  bool ok = true;
  std::string problem;
};

struct AuditResult {
  Slice minus, plus;
  std::vector<ArcAudit> arcs;
  int bifurcation_total = 0;
  bool check_a = false;   // lambda'(+1) - lambda'(-1) = sum b
  bool check_b = false;   // per-arc b rules
  bool check_c = false;   // lambda' - lambda'' equal at both ends
  bool ok = false;
  std::vector<std::string> failures;
};

AuditResult wall_crossing_audit(const ModelFamily& fam);
// independent audits; parallel = false is the serial reference
std::vector<AuditResult> audit_families(const std::vector<ModelFamily>& fams, bool parallel = true);

// Random consistent family: 1-4 arcs, each a monotone or U-shaped open arc or a closed loop,
// Hermite a(s) through Gaussian knots, random signs of b, random parity, CS and offset inputs.
// Draws with a tangential zero are rejected and redrawn.
ModelFamily random_family(std::uint64_t seed);

struct SweepRow {
  double t = 0.0;
  int lambda_prime = 0;
  double lambda_dp = 0.0;
};
// regular t on a uniform grid of [-1,1]; non-regular grid points are skipped
std::vector<SweepRow> sweep(const ModelFamily& fam, int points = 41);

}  // namespace su3kit
