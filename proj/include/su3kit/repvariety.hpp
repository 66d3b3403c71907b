#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "su3kit/presentation.hpp"
#include "su3kit/su3.hpp"

namespace su3kit {

enum class GroupKind { SU2inSU3, SU3 };

struct Representation {
  GroupPresentation presentation;
  GroupKind group = GroupKind::SU3;
  std::vector<Mat3> images;
  double residual = 0.0;
};

enum class StabTag { Central, ReducibleU1, AbelianLarge, Irreducible };
std::string stab_name(StabTag t);

struct StabilizerClass {
  StabTag tag = StabTag::Irreducible;
  int commutant_dim = 0;
  bool flagged = false;                  // singular values close to the threshold
  std::optional<ReductionFrame> frame;   // ReducibleU1 only
  std::optional<Mat3> u1_generator;      // ReducibleU1 only, ambient coordinates
  std::vector<double> singular_values;
};

double relator_residual(const GroupPresentation& p, const std::vector<Mat3>& images);
Representation make_representation(const GroupPresentation& p, GroupKind g, std::vector<Mat3> images);
Mat3 word_holonomy(const Representation& rho, const Word& w);

struct SolveConfig {
  std::uint64_t seed = 0;
  int starts = 256;
  int max_iter = 300;
  double tol_residual = 1e-10;
  bool parallel = true;
};

struct SolveResult {
  std::vector<Representation> reps;   // converged runs in start order
  int starts = 0;
  int converged = 0;
  int dropped = 0;
};

SolveResult solve_representations(const GroupPresentation& p, GroupKind group, const SolveConfig& cfg);

// null threshold is relative to the largest singular value; throws std::invalid_argument
// when the residual exceeds max_residual
StabilizerClass classify_stabilizer(const Representation& rho, double null_tol = 1e-6,
                                    double max_residual = 1e-8);

std::vector<cplx> fingerprint(const Representation& rho, int word_len = 3);

struct RepClass {
  Representation rep;
  std::vector<cplx> fingerprint;
  int members = 1;
};
std::vector<RepClass> deduplicate(const std::vector<Representation>& reps, double tol = 1e-6,
                                  int word_len = 3);

}  // namespace su3kit
