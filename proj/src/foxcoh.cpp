#include "su3kit/foxcoh.hpp"

#include <Eigen/SVD>
#include <algorithm>
#include <random>
#include <stdexcept>

namespace su3kit {

CochainMatrices cochain_matrices(const Representation& rho, const CoefficientModule& mod) {
  const auto& p = rho.presentation;
  const int n = p.ngens(), m = static_cast<int>(p.relators.size()), d = module_dim(mod.tag);
  CochainMatrices out;
  out.cocycle = Eigen::MatrixXd::Zero(m * d, n * d);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j)
      out.cocycle.block(i * d, j * d, d, d) =
          evaluate_group_ring(fox_derivative(p.relators[i], j, n), rho.images, mod);
  out.coboundary = Eigen::MatrixXd::Zero(n * d, d);
  for (int i = 0; i < n; ++i)
    out.coboundary.block(i * d, 0, d, d) =
        Eigen::MatrixXd::Identity(d, d) - module_action(mod, rho.images[i]);
  return out;
}

namespace {

struct RankInfo {
  int rank = 0;
  bool flagged = false;
  std::vector<double> sv;
  Eigen::MatrixXd U, V;
};

RankInfo rank_of(const Eigen::MatrixXd& A, double tol) {
  RankInfo r;
  const int rows = static_cast<int>(A.rows()), cols = static_cast<int>(A.cols());
  if (rows == 0 || cols == 0) {
    r.U = Eigen::MatrixXd::Identity(rows, rows);
    r.V = Eigen::MatrixXd::Identity(cols, cols);
    return r;
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(A, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  r.sv.assign(s.data(), s.data() + s.size());
  const double thr = tol * std::max(1.0, s.size() ? s(0) : 0.0);
  for (double x : r.sv) {
    if (x > thr) ++r.rank;
    if (x > 0.1 * thr && x < 10.0 * thr) r.flagged = true;
  }
  r.U = svd.matrixU();
  r.V = svd.matrixV();
  return r;
}

}  // namespace

CohomologySummary cohomology_summary(const Representation& rho, const CoefficientModule& mod, double tol) {
  auto cm = cochain_matrices(rho, mod);
  const int d = module_dim(mod.tag), n = rho.presentation.ngens();
  auto zc = rank_of(cm.cocycle, tol);
  auto bc = rank_of(cm.coboundary, tol);
  CohomologySummary s;
  s.module_dim = d;
  s.dimZ1 = n * d - zc.rank;
  s.dimB1 = bc.rank;
  s.dimH0 = d - bc.rank;
  s.dimH1 = s.dimZ1 - s.dimB1;
  s.flagged = zc.flagged || bc.flagged;
  s.cocycle_sv = zc.sv;
  s.coboundary_sv = bc.sv;
  return s;
}

Eigen::MatrixXd z1_basis(const Representation& rho, const CoefficientModule& mod, double tol) {
  auto cm = cochain_matrices(rho, mod);
  auto zc = rank_of(cm.cocycle, tol);
  const int cols = static_cast<int>(cm.cocycle.cols());
  return zc.V.rightCols(cols - zc.rank);
}

Eigen::MatrixXd b1_basis(const Representation& rho, const CoefficientModule& mod, double tol) {
  auto cm = cochain_matrices(rho, mod);
  auto bc = rank_of(cm.coboundary, tol);
  return bc.U.leftCols(bc.rank);
}

Eigen::MatrixXd h1_basis(const Representation& rho, const CoefficientModule& mod, double tol) {
  Eigen::MatrixXd Z = z1_basis(rho, mod, tol);
  Eigen::MatrixXd Q = b1_basis(rho, mod, tol);
  const int h1 = static_cast<int>(Z.cols() - Q.cols());
  if (h1 <= 0) return Eigen::MatrixXd(Z.rows(), 0);
  Eigen::MatrixXd R = Z - Q * (Q.transpose() * Z);
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(R, Eigen::ComputeThinU);
  return svd.matrixU().leftCols(h1);
}

Eigen::VectorXd cochain_right_mul(const Eigen::VectorXd& z, const Quat& h) {
  Eigen::VectorXd out(z.size());
  for (int k = 0; k + 4 <= z.size(); k += 4) {
    Eigen::Vector4d x = z.segment<4>(k);
    out.segment<4>(k) = c2_to_hperp(right_mul(hperp_to_c2(x), h));
  }
  return out;
}

QuaternionReport quaternion_structure_check(const Representation& rho, int trials, std::uint64_t seed,
                                            double tol) {
  auto st = classify_stabilizer(rho);
  if (st.tag != StabTag::ReducibleU1)
    throw std::invalid_argument("quaternion_structure_check: representation is not ReducibleU1");
  CoefficientModule mod{ModuleTag::HperpPart, st.frame};
  auto cm = cochain_matrices(rho, mod);
  Eigen::MatrixXd Z = z1_basis(rho, mod, tol);
  Eigen::MatrixXd Q = b1_basis(rho, mod, tol);
  auto cs = cohomology_summary(rho, mod, tol);

  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  auto rand_vec = [&](int k) {
    Eigen::VectorXd v(k);
    for (int i = 0; i < k; ++i) v(i) = nd(rng);
    return v;
  };
  auto rand_quat = [&] {
    Quat h{cplx(nd(rng), nd(rng)), cplx(nd(rng), nd(rng))};
    double s = std::sqrt(std::norm(h.z1) + std::norm(h.z2));
    return Quat{h.z1 / s, h.z2 / s};
  };
  QuaternionReport rep;
  rep.trials = trials;
  for (int t = 0; t < trials; ++t) {
    Quat h = rand_quat();
    if (Z.cols() > 0) {
      Eigen::VectorXd z = Z * rand_vec(static_cast<int>(Z.cols()));
      z /= z.norm();
      Eigen::VectorXd zh = cochain_right_mul(z, h);
      double r = cm.cocycle.rows() ? (cm.cocycle * zh).norm() : 0.0;
      rep.max_cocycle_residual = std::max(rep.max_cocycle_residual, r);
    }
    if (Q.cols() > 0) {
      Eigen::VectorXd b = cm.coboundary * rand_vec(4);
      if (b.norm() > 0) b /= b.norm();
      Eigen::VectorXd bh = cochain_right_mul(b, h);
      double r = (bh - Q * (Q.transpose() * bh)).norm();
      rep.max_coboundary_residual = std::max(rep.max_coboundary_residual, r);
    }
  }
  rep.dimH1 = cs.dimH1;
  rep.divisible_by_4 = cs.dimH1 % 4 == 0;
  rep.ok = rep.divisible_by_4 && rep.max_cocycle_residual <= tol && rep.max_coboundary_residual <= tol;
  return rep;
}

}  // namespace su3kit
