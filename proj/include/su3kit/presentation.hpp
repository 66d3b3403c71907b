#pragma once

#include <Eigen/Dense>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "su3kit/modules.hpp"
#include "su3kit/su3.hpp"

namespace su3kit {

struct Letter {
  int gen = 0;
  int exp = 1;   // +1 or -1
  bool operator==(const Letter&) const = default;
};
using Word = std::vector<Letter>;

struct GroupPresentation {
  std::vector<std::string> generators;
  std::vector<Word> relators;
  int ngens() const { return static_cast<int>(generators.size()); }
  bool operator==(const GroupPresentation&) const = default;
};

struct ParseError : std::runtime_error {
  size_t pos;
  ParseError(const std::string& msg, size_t p)
      : std::runtime_error("position " + std::to_string(p) + ": " + msg), pos(p) {}
};

// "<" gens "|" relators ">"; relator = word or "lhs = rhs"; word factors joined by '*',
// each factor a generator or parenthesized word with optional ^n; "1" is the empty word.
GroupPresentation parse_presentation(std::string_view text);

Word word_reduce(const Word& w);
Word word_invert(const Word& w);
Word word_concat(const Word& u, const Word& v);
Word word_power(const Word& w, int k);
std::string word_to_string(const Word& w, const std::vector<std::string>& names);
std::string presentation_to_string(const GroupPresentation& p);

// reduced words of length 1..max_len, ordered by length then lexicographically in
// x0, x0^-1, x1, x1^-1, ...
std::vector<Word> enumerate_words(int ngens, int max_len);

struct GroupRingTerm {
  long long coeff = 0;
  Word prefix;
};
struct GroupRingElement {
  std::vector<GroupRingTerm> terms;   // reduced, pairwise distinct prefixes, nonzero coefficients
};

GroupRingElement fox_derivative(const Word& r, int j, int ngens);

Mat3 word_product(const std::vector<Mat3>& images, const Word& w);
Eigen::MatrixXd evaluate_group_ring(const GroupRingElement& e, const std::vector<Mat3>& images,
                                    const CoefficientModule& mod);

// relator exponent-sum matrix (rows relators, columns generators)
Eigen::MatrixXi abelianization_matrix(const GroupPresentation& p);
// H_1 = Z^n / rowspace is trivial
bool is_homology_sphere(const GroupPresentation& p);

}  // namespace su3kit
