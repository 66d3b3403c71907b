#include "su3kit/modules.hpp"

#include <cmath>
#include <stdexcept>

namespace su3kit {

int module_dim(ModuleTag tag) {
  switch (tag) {
    case ModuleTag::Su3Adjoint: return 8;
    case ModuleTag::HPart: return 4;
    case ModuleTag::HperpPart: return 4;
    case ModuleTag::Su2Adjoint: return 3;
  }
  return 0;
}

std::string module_name(ModuleTag tag) {
  switch (tag) {
    case ModuleTag::Su3Adjoint: return "su3-adjoint";
    case ModuleTag::HPart: return "h-part";
    case ModuleTag::HperpPart: return "hperp-part";
    case ModuleTag::Su2Adjoint: return "su2-adjoint";
  }
  return "?";
}

ModuleTag module_from_name(const std::string& s) {
  if (s == "su3-adjoint" || s == "su3") return ModuleTag::Su3Adjoint;
  if (s == "h-part" || s == "h") return ModuleTag::HPart;
  if (s == "hperp-part" || s == "hperp") return ModuleTag::HperpPart;
  if (s == "su2-adjoint" || s == "su2") return ModuleTag::Su2Adjoint;
  throw std::invalid_argument("unknown coefficient module '" + s + "'");
}

const std::vector<Mat3>& module_basis(ModuleTag tag) {
  static const std::vector<Mat3> su3(su3_basis().begin(), su3_basis().end());
  static const std::vector<Mat3> h = {su3_basis()[0], su3_basis()[1], su3_basis()[2], su3_basis()[7]};
  static const std::vector<Mat3> su2 = {su3_basis()[0], su3_basis()[1], su3_basis()[2]};
  static const std::vector<Mat3> hperp = [] {
    const double r = 1.0 / std::sqrt(2.0);
    const cplx i(0.0, 1.0);
    return std::vector<Mat3>{hperp_matrix({r, 0.0}), hperp_matrix({i * r, 0.0}),
                             hperp_matrix({0.0, r}), hperp_matrix({0.0, i * r})};
  }();
  switch (tag) {
    case ModuleTag::Su3Adjoint: return su3;
    case ModuleTag::HPart: return h;
    case ModuleTag::HperpPart: return hperp;
    case ModuleTag::Su2Adjoint: return su2;
  }
  return su3;
}

namespace {
Mat3 frame_of(const CoefficientModule& mod) {
  if (mod.tag == ModuleTag::HPart || mod.tag == ModuleTag::HperpPart) {
    if (!mod.frame)
      throw std::invalid_argument(module_name(mod.tag) + " requires a reduction frame");
    return mod.frame->g;
  }
  if (mod.tag == ModuleTag::Su2Adjoint && mod.frame) return mod.frame->g;
  return Mat3::Identity();
}
}  // namespace

Eigen::MatrixXd module_action(const CoefficientModule& mod, const Mat3& g) {
  const Mat3 F = frame_of(mod);
  const Mat3 gf = F.adjoint() * g * F;
  const Mat3 gi = gf.adjoint();
  const auto& B = module_basis(mod.tag);
  const int d = static_cast<int>(B.size());
  Eigen::MatrixXd P(d, d);
  for (int k = 0; k < d; ++k) {
    Mat3 img = gf * B[k] * gi;
    for (int j = 0; j < d; ++j) P(j, k) = killing_pair(B[j], img);
  }
  return P;
}

Mat3 module_to_matrix(const CoefficientModule& mod, const Eigen::VectorXd& x) {
  const Mat3 F = frame_of(mod);
  const auto& B = module_basis(mod.tag);
  Mat3 X = Mat3::Zero();
  for (size_t k = 0; k < B.size(); ++k) X += x(static_cast<int>(k)) * B[k];
  return F * X * F.adjoint();
}

Eigen::VectorXd module_from_matrix(const CoefficientModule& mod, const Mat3& X) {
  const Mat3 F = frame_of(mod);
  const Mat3 Xf = F.adjoint() * X * F;
  const auto& B = module_basis(mod.tag);
  Eigen::VectorXd x(B.size());
  for (size_t k = 0; k < B.size(); ++k) x(static_cast<int>(k)) = killing_pair(B[k], Xf);
  return x;
}

Vec2c hperp_to_c2(const Eigen::Vector4d& x) {
  const double r = 1.0 / std::sqrt(2.0);
  return Vec2c(cplx(x(0), x(1)) * r, cplx(x(2), x(3)) * r);
}

Eigen::Vector4d c2_to_hperp(const Vec2c& v) {
  const double s = std::sqrt(2.0);
  return Eigen::Vector4d(s * v(0).real(), s * v(0).imag(), s * v(1).real(), s * v(1).imag());
}

}  // namespace su3kit
