#pragma once

#include <json.hpp>
#include <string>

#include "su3kit/bifurcation.hpp"
#include "su3kit/presentation.hpp"
#include "su3kit/repvariety.hpp"

namespace su3kit {

using json = nlohmann::json;

// row-major arrays of [re, im]
json matrix_to_json(const Eigen::MatrixXcd& M);
Eigen::MatrixXcd matrix_from_json(const json& j);
Mat3 mat3_from_json(const json& j);
Mat2 mat2_from_json(const json& j);

json presentation_to_json(const GroupPresentation& p);
GroupPresentation presentation_from_json(const json& j);   // validates indices and exponents

std::string group_name(GroupKind g);
GroupKind group_from_name(const std::string& s);

json representation_to_json(const Representation& rho);
Representation representation_from_json(const json& j);

ModelFamily family_from_json(const json& j);
json family_to_json(const ModelFamily& fam);

std::string read_file(const std::string& path);   // throws std::runtime_error
void write_atomic(const std::string& path, const std::string& content);

}  // namespace su3kit
