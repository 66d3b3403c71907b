#pragma once

#include <cstdint>
#include <vector>

#include "su3kit/modules.hpp"
#include "su3kit/repvariety.hpp"

namespace su3kit {

struct CochainMatrices {
  Eigen::MatrixXd cocycle;      // (m*d) x (n*d): block (i,j) evaluates dr_i/dx_j
  Eigen::MatrixXd coboundary;   // (n*d) x d: block i is I - rho(x_i)
};

CochainMatrices cochain_matrices(const Representation& rho, const CoefficientModule& mod);

struct CohomologySummary {
  int module_dim = 0;
  int dimZ1 = 0;
  int dimB1 = 0;
  int dimH1 = 0;
  int dimH0 = 0;
  bool flagged = false;   // some singular value sits within a factor 10 of the threshold
  std::vector<double> cocycle_sv;
  std::vector<double> coboundary_sv;
};

// threshold is tol * max(1, largest singular value)
CohomologySummary cohomology_summary(const Representation& rho, const CoefficientModule& mod,
                                     double tol = 1e-8);

// columns are flattened cochains (v_1, ..., v_n) in module coordinates
Eigen::MatrixXd z1_basis(const Representation& rho, const CoefficientModule& mod, double tol = 1e-8);
Eigen::MatrixXd b1_basis(const Representation& rho, const CoefficientModule& mod, double tol = 1e-8);
// orthonormal basis of Z1 perpendicular to B1
Eigen::MatrixXd h1_basis(const Representation& rho, const CoefficientModule& mod, double tol = 1e-8);

// coordinates of a flattened hperp cochain multiplied on the right by a quaternion
Eigen::VectorXd cochain_right_mul(const Eigen::VectorXd& z, const Quat& h);

struct QuaternionReport {
  int trials = 0;
  double max_cocycle_residual = 0.0;
  double max_coboundary_residual = 0.0;
  int dimH1 = 0;
  bool divisible_by_4 = false;
  bool ok = false;
};

// throws std::invalid_argument unless rho classifies as ReducibleU1
QuaternionReport quaternion_structure_check(const Representation& rho, int trials, std::uint64_t seed,
                                            double tol = 1e-8);

}  // namespace su3kit
