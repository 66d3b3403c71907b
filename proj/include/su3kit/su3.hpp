#pragma once

#include <Eigen/Dense>
#include <array>
#include <complex>
#include <optional>
#include <utility>

namespace su3kit {

using cplx = std::complex<double>;
using Mat2 = Eigen::Matrix2cd;
using Mat3 = Eigen::Matrix3cd;
using Vec2c = Eigen::Vector2cd;

constexpr double kGroupTol = 1e-10;
constexpr double kFrameTol = 1e-8;

// Nearest SU(3) element: polar factor, then divide out a cube root of the determinant.
// Throws std::invalid_argument on (numerically) singular input.
Mat3 project_su3(const Mat3& M);
Mat2 project_su2(const Mat2& M);

bool is_su3(const Mat3& M, double tol = kGroupTol);
bool is_su3_algebra(const Mat3& X, double tol = kGroupTol);

// (c2, c1) with p(x) = x^3 - c2 x^2 + c1 x - 1
std::pair<cplx, cplx> char_poly(const Mat3& M);
std::array<cplx, 3> char_poly_roots(cplx c2, cplx c1);
bool same_class(const Mat3& M, const Mat3& N, double tol = 1e-6);

// smallest pairwise distance between eigenvalues
double eigen_gap(const Mat3& M);

Mat3 expm_skew(const Mat3& X);      // exp of a skew-Hermitian matrix, exactly unitary
Mat3 logm_unitary(const Mat3& U);   // principal skew-Hermitian log

Mat3 embed_su2(const Mat2& A);      // A (+) 1
Mat2 upper_block(const Mat3& M);

// orthonormal basis of su(3) for <a,b> = -Re tr(ab): i*lambda_k/sqrt(2), Gell-Mann order
const std::array<Mat3, 8>& su3_basis();
Eigen::Matrix<double, 8, 1> su3_coords(const Mat3& X);
Mat3 su3_from_coords(const Eigen::Matrix<double, 8, 1>& x);
double killing_pair(const Mat3& a, const Mat3& b);   // -Re tr(ab)

// complement of s(u(2)+u(1)): corner entries (0,2)=z1, (1,2)=z2
struct HperpVector {
  cplx z1{0.0, 0.0};
  cplx z2{0.0, 0.0};
};

struct ReductionFrame {
  Mat3 g = Mat3::Identity();   // g^-1 M g is block diagonal for every image M
};

Mat3 hperp_matrix(const HperpVector& p);
HperpVector hperp_of(const Mat3& X);   // reads the corner entries, no projection

struct HSplit {
  Mat3 h;
  HperpVector perp;
};
HSplit split_h_hperp(const Mat3& v, const ReductionFrame& frame);
Mat3 join_h_hperp(const Mat3& h, const HperpVector& perp, const ReductionFrame& frame);
bool frame_fits(const ReductionFrame& frame, const Mat3& M, double tol = kFrameTol);

Mat3 u_generator();                      // diag(i/3, i/3, -2i/3)
HperpVector j_action(const HperpVector& p);  // [u, x] in corner coordinates

// G_eta pattern and its block-diagonalizing conjugator
Mat3 g_eta_conjugator(double eta);
double g_eta_residual(const Mat3& M, double eta);
std::optional<double> g_eta_find(const Mat3& M, double tol = 1e-8);

// Quaternions h = z1 + J z2 with J z = conj(z) J, J^2 = -1.
struct Quat {
  cplx z1{1.0, 0.0};
  cplx z2{0.0, 0.0};
};
Quat quat_mul(const Quat& p, const Quat& q);
Quat phi_su2(const Mat2& A);                  // [[a,-conj b],[b,conj a]] -> a + J b
Quat quat_of(const Vec2c& v);                 // F(v1,v2) = v1 + J v2
Vec2c vec_of(const Quat& q);
Vec2c right_mul(const Vec2c& v, const Quat& h);  // v.h

}  // namespace su3kit
