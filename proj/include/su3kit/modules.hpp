#pragma once

#include <optional>
#include <string>
#include <vector>

#include "su3kit/su3.hpp"

namespace su3kit {

enum class ModuleTag { Su3Adjoint, HPart, HperpPart, Su2Adjoint };

// Real coefficient module. Bases are orthonormal for -Re tr(ab) and live in frame
// coordinates; h/hperp need a frame, su2-adjoint defaults to the standard block.
struct CoefficientModule {
  ModuleTag tag = ModuleTag::Su3Adjoint;
  std::optional<ReductionFrame> frame;
};

int module_dim(ModuleTag tag);
std::string module_name(ModuleTag tag);
ModuleTag module_from_name(const std::string& s);   // throws std::invalid_argument

const std::vector<Mat3>& module_basis(ModuleTag tag);

// Matrix of v -> g v g^-1 in the module basis. Throws std::invalid_argument when
// the module needs a frame and none is given.
Eigen::MatrixXd module_action(const CoefficientModule& mod, const Mat3& g);

Mat3 module_to_matrix(const CoefficientModule& mod, const Eigen::VectorXd& x);
Eigen::VectorXd module_from_matrix(const CoefficientModule& mod, const Mat3& X);

// hperp coordinates (sqrt2 Re z1, sqrt2 Im z1, sqrt2 Re z2, sqrt2 Im z2) <-> (z1, z2)
Vec2c hperp_to_c2(const Eigen::Vector4d& x);
Eigen::Vector4d c2_to_hperp(const Vec2c& v);

}  // namespace su3kit
