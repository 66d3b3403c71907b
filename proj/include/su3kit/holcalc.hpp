#pragma once

#include <cstdint>
#include <functional>
#include <random>
#include <string>
#include <tuple>
#include <vector>

#include "su3kit/su3.hpp"

namespace su3kit {

// su(3)-valued function on [0,1] sampled at u_k = k/N, k = 0..N (N even, N >= 16)
struct LoopConnection {
  std::vector<Mat3> samples;
  int N() const { return static_cast<int>(samples.size()) - 1; }
};

LoopConnection make_loop(int N, const std::function<Mat3(double)>& f);
LoopConnection loop_axpy(const LoopConnection& A, double t, const LoopConnection& a);   // A + t a
LoopConnection loop_conjugate(const LoopConnection& A, const Mat3& g);                 // g A g^-1
void check_loop(const LoopConnection& A);   // throws std::invalid_argument

// P' = -a P, P(0) = I; RK4 with cubic midpoint interpolation and re-unitarization per step
std::vector<Mat3> transport_path(const LoopConnection& A);
Mat3 parallel_transport(const LoopConnection& A, double u);
Mat3 holonomy(const LoopConnection& A);

// composite Simpson on the grid
Mat3 simpson(const std::vector<Mat3>& f, double h);
std::vector<Mat3> cumulative_simpson(const std::vector<Mat3>& f, double h);

struct HolonomyDerivatives {
  Mat3 first;       // d/dt hol(A + t a) at 0  =  -hol(A) * int a~
  cplx second_tr;   // d^2/ds dt tr hol(A + s a + t b) at 0
};

// a, b are raw tangents; internally moved to the parallel-transport trivialization
HolonomyDerivatives holonomy_derivatives(const LoopConnection& A, const LoopConnection& a,
                                         const LoopConnection& b);

// tau(z) = sum c * (Re z)^p (Im z)^q, p + q <= 3
struct TracePolynomial {
  std::vector<std::tuple<int, int, double>> terms;
  double value(cplx z) const;
  std::pair<double, double> gradient(cplx z) const;
  double coefficient_norm() const;   // sum |c|, the C^3 proxy
};

// radial bump (1 - (r/0.9)^2)^2 on a polar midpoint grid of the unit disk, weights sum to 1
struct EtaProfile {
  std::vector<double> x, y, w;
};
EtaProfile eta_profile(int nr = 32, int nth = 32);

struct PerturbationSpec {
  TracePolynomial tau;
  EtaProfile eta;
  std::function<LoopConnection(double, double)> family;
};

double perturbation_value(const PerturbationSpec& spec);
// p evaluated with every loop of the family shifted by t*a
// parallel = false runs the same sum serially, in the same order
double perturbation_value_at(const PerturbationSpec& spec, const LoopConnection& a, double t, bool parallel = true);
double perturbation_derivative(const PerturbationSpec& spec, const LoopConnection& a, bool parallel = true);

// c0 + c1 cos 2pi u + c2 sin 2pi u + c3 cos 4pi u, each c_k with N(0, scale^2) coordinates in
// the orthonormal su(3) basis
LoopConnection random_loop(std::mt19937_64& rng, int N, double scale);

struct DerivativeFdReport {
  int samples = 0;
  double max_first_error = 0.0;    // Frobenius, central difference with step 1e-4
  double max_second_error = 0.0;   // mixed partial of the trace, step 1e-3
};
// formula vs finite differences on random (A, a, b); loops drawn serially, evaluated in parallel
DerivativeFdReport derivative_fd_check(int samples, int N, std::uint64_t seed, bool parallel = true);

// L2 norm sqrt(int |a|_F^2)
double loop_norm(const LoopConnection& a);

struct GradientNormReport {
  int samples = 0;
  double max_ratio = 0.0;   // sup |Dp(A)(a)| / |a|
  double bound = 0.0;       // sqrt(3) * sum |c| (p+q) 3^(p+q-1)
};
GradientNormReport perturbation_gradient_norm_check(const PerturbationSpec& spec, int samples,
                                                    std::uint64_t seed);

enum class HessCase { GammaGamma, EllGamma, GammaIGammaJ, Conj, EllGammaIGammaJ };
std::string hess_case_name(HessCase c);
HessCase hess_case_from_name(const std::string& s);

struct HessInputs {
  Mat3 L = Mat3::Identity();   // SU(2) (+) 1
  HperpVector xi_i, zeta_i, xi_j, zeta_j;
};

// trace expressions as stated for each case; throws if L is not of block form
cplx hessian_closed_form(HessCase c, const HessInputs& in);
// closed form symmetrized in (xi, zeta)
cplx hessian_closed_form_sym(HessCase c, const HessInputs& in);
// Hessian of the synthesized loop in terms of the segment integrals. Equals the symmetrized
// closed form except for ell-gammai-gammaj, where the segment order makes the cross term
// tr(L (xi_j zeta_i + zeta_j xi_i)) rather than the average of both orders.
cplx hessian_ordered_form(HessCase c, const HessInputs& in);
// closed form divided by the mixed second partial of tr hol
double hessian_normalization(HessCase c);

struct SynthesizedLoop {
  LoopConnection A, a, b;
  std::vector<std::string> segments;
};
SynthesizedLoop synthesize_hessian_loop(HessCase c, const HessInputs& in, std::uint64_t seed, int N = 768);

struct HessianCheck {
  cplx closed{0.0, 0.0};
  cplx numeric{0.0, 0.0};   // normalization * mixed partial from the double integral
  cplx ordered{0.0, 0.0};
  double error = 0.0;           // |closed - numeric|
  double ordered_error = 0.0;   // |ordered - numeric|
  double holonomy_error = 0.0;   // |hol - expected loop holonomy|
};
HessianCheck hessian_synthesis_check(HessCase c, const HessInputs& in, std::uint64_t seed, int N = 768);

// L random in SU(2) (+) 1, hperp inputs with standard Gaussian coordinates
HessInputs random_hess_inputs(std::mt19937_64& rng);

struct HessianBatch {
  HessCase c = HessCase::GammaGamma;
  int samples = 0;
  double max_error = 0.0;
  double max_ordered_error = 0.0;
  double max_holonomy_error = 0.0;
};
// every case on `samples` random inputs; inputs drawn serially, checks run in parallel
std::vector<HessianBatch> hessian_batch_check(int samples, std::uint64_t seed, int N = 768, bool parallel = true);

}  // namespace su3kit
