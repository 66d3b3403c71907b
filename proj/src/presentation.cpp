#include "su3kit/presentation.hpp"

#include <cctype>
#include <cstdlib>
#include <map>
#include <sstream>

namespace su3kit {

namespace {

class Parser {
 public:
  explicit Parser(std::string_view s) : s_(s) {}

  GroupPresentation run() {
    GroupPresentation p;
    skip();
    expect('<');
    skip();
    if (peek() == '|' || peek() == '>') throw ParseError("empty generator list", pos_);
    for (;;) {
      skip();
      size_t at = pos_;
      std::string name = ident();
      for (const auto& g : p.generators)
        if (g == name) throw ParseError("duplicate generator '" + name + "'", at);
      p.generators.push_back(name);
      skip();
      if (peek() == ',') {
        ++pos_;
        continue;
      }
      break;
    }
    gens_ = &p.generators;
    skip();
    if (peek() == '|') {
      ++pos_;
      skip();
      if (peek() != '>') {
        for (;;) {
          p.relators.push_back(word_reduce(relator()));
          skip();
          if (peek() == ';') {
            ++pos_;
            skip();
            if (peek() == '>') break;   // tolerate a trailing separator
            continue;
          }
          break;
        }
      }
    }
    skip();
    expect('>');
    skip();
    if (pos_ != s_.size()) throw ParseError("trailing characters after '>'", pos_);
    return p;
  }

 private:
  std::string_view s_;
  size_t pos_ = 0;
  const std::vector<std::string>* gens_ = nullptr;

  char peek() const { return pos_ < s_.size() ? s_[pos_] : '\0'; }
  void skip() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
  }
  void expect(char c) {
    if (peek() != c) {
      std::string got = pos_ < s_.size() ? std::string("'") + s_[pos_] + "'" : "end of input";
      throw ParseError(std::string("expected '") + c + "', found " + got, pos_);
    }
    ++pos_;
  }
  std::string ident() {
    size_t start = pos_;
    if (!(std::isalpha(static_cast<unsigned char>(peek())) || peek() == '_'))
      throw ParseError("expected identifier", pos_);
    while (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_') ++pos_;
    return std::string(s_.substr(start, pos_ - start));
  }
  Word relator() {
    Word lhs = word();
    skip();
    if (peek() == '=') {
      ++pos_;
      Word rhs = word();
      return word_concat(lhs, word_invert(rhs));
    }
    return lhs;
  }
  Word word() {
    Word w = factor();
    for (;;) {
      skip();
      if (peek() != '*') break;
      ++pos_;
      Word f = factor();
      w.insert(w.end(), f.begin(), f.end());
    }
    return w;
  }
  Word factor() {
    skip();
    Word base;
    if (peek() == '(') {
      ++pos_;
      base = word();
      skip();
      expect(')');
    } else if (peek() == '1') {
      ++pos_;
    } else {
      size_t at = pos_;
      std::string name = ident();
      int idx = -1;
      for (size_t i = 0; i < gens_->size(); ++i)
        if ((*gens_)[i] == name) idx = static_cast<int>(i);
      if (idx < 0) throw ParseError("unknown generator '" + name + "'", at);
      base.push_back({idx, 1});
    }
    skip();
    if (peek() == '^') {
      ++pos_;
      skip();
      size_t at = pos_;
      bool neg = false;
      if (peek() == '-') {
        neg = true;
        ++pos_;
      }
      if (!std::isdigit(static_cast<unsigned char>(peek()))) throw ParseError("expected exponent", at);
      long k = 0;
      while (std::isdigit(static_cast<unsigned char>(peek()))) {
        k = k * 10 + (s_[pos_] - '0');
        if (k > 100000) throw ParseError("exponent too large", at);
        ++pos_;
      }
      return word_power(base, neg ? -static_cast<int>(k) : static_cast<int>(k));
    }
    return base;
  }
};

}  // namespace

GroupPresentation parse_presentation(std::string_view text) { return Parser(text).run(); }

Word word_reduce(const Word& w) {
  Word out;
  out.reserve(w.size());
  for (const auto& l : w) {
    if (!out.empty() && out.back().gen == l.gen && out.back().exp == -l.exp)
      out.pop_back();
    else
      out.push_back(l);
  }
  return out;
}

Word word_invert(const Word& w) {
  Word out(w.rbegin(), w.rend());
  for (auto& l : out) l.exp = -l.exp;
  return out;
}

Word word_concat(const Word& u, const Word& v) {
  Word w = u;
  w.insert(w.end(), v.begin(), v.end());
  return word_reduce(w);
}

Word word_power(const Word& w, int k) {
  Word base = k < 0 ? word_invert(w) : w;
  Word out;
  for (int i = 0; i < std::abs(k); ++i) out.insert(out.end(), base.begin(), base.end());
  return word_reduce(out);
}

std::string word_to_string(const Word& w, const std::vector<std::string>& names) {
  if (w.empty()) return "1";
  std::ostringstream os;
  for (size_t i = 0; i < w.size(); ++i) {
    if (i) os << '*';
    os << names.at(w[i].gen);
    if (w[i].exp < 0) os << "^-1";
  }
  return os.str();
}

std::string presentation_to_string(const GroupPresentation& p) {
  std::ostringstream os;
  os << '<';
  for (size_t i = 0; i < p.generators.size(); ++i) os << (i ? "," : "") << p.generators[i];
  os << " | ";
  for (size_t i = 0; i < p.relators.size(); ++i)
    os << (i ? "; " : "") << word_to_string(p.relators[i], p.generators);
  os << '>';
  return os.str();
}

std::vector<Word> enumerate_words(int ngens, int max_len) {
  std::vector<Word> out;
  std::vector<Word> layer = {Word{}};
  for (int len = 1; len <= max_len; ++len) {
    std::vector<Word> next;
    for (const auto& w : layer) {
      for (int g = 0; g < ngens; ++g) {
        for (int e : {1, -1}) {
          if (!w.empty() && w.back().gen == g && w.back().exp == -e) continue;
          Word v = w;
          v.push_back({g, e});
          next.push_back(std::move(v));
        }
      }
    }
    out.insert(out.end(), next.begin(), next.end());
    layer = std::move(next);
  }
  return out;
}

GroupRingElement fox_derivative(const Word& r, int j, int ngens) {
  if (j < 0 || j >= ngens) throw std::out_of_range("fox_derivative: generator index out of range");
  GroupRingElement e;
  auto add = [&](long long c, const Word& prefix) {
    Word p = word_reduce(prefix);
    for (auto& t : e.terms)
      if (t.prefix == p) {
        t.coeff += c;
        return;
      }
    e.terms.push_back({c, p});
  };
  Word prefix;
  for (const auto& l : r) {
    if (l.gen == j) {
      if (l.exp > 0) {
        add(1, prefix);
      } else {
        Word q = prefix;
        q.push_back(l);
        add(-1, q);
      }
    }
    prefix.push_back(l);
  }
  std::erase_if(e.terms, [](const GroupRingTerm& t) { return t.coeff == 0; });
  return e;
}

Mat3 word_product(const std::vector<Mat3>& images, const Word& w) {
  Mat3 M = Mat3::Identity();
  for (const auto& l : w) {
    const Mat3& g = images.at(static_cast<size_t>(l.gen));
    if (l.exp > 0)
      M = M * g;
    else
      M = M * g.adjoint();
  }
  return M;
}

Eigen::MatrixXd evaluate_group_ring(const GroupRingElement& e, const std::vector<Mat3>& images,
                                    const CoefficientModule& mod) {
  const int d = module_dim(mod.tag);
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(d, d);
  for (const auto& t : e.terms)
    out += static_cast<double>(t.coeff) * module_action(mod, word_product(images, t.prefix));
  return out;
}

Eigen::MatrixXi abelianization_matrix(const GroupPresentation& p) {
  Eigen::MatrixXi A = Eigen::MatrixXi::Zero(static_cast<int>(p.relators.size()), p.ngens());
  for (size_t i = 0; i < p.relators.size(); ++i)
    for (const auto& l : p.relators[i]) A(static_cast<int>(i), l.gen) += l.exp;
  return A;
}

bool is_homology_sphere(const GroupPresentation& p) {
  // row-style Hermite reduction over Z; the lattice is Z^n iff n unit pivots appear
  Eigen::MatrixXi A0 = abelianization_matrix(p);
  const int m = static_cast<int>(A0.rows()), n = static_cast<int>(A0.cols());
  std::vector<std::vector<long long>> A(m, std::vector<long long>(n));
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < n; ++j) A[i][j] = A0(i, j);
  int row = 0;
  for (int c = 0; c < n; ++c) {
    for (;;) {
      int piv = -1;
      for (int i = row; i < m; ++i)
        if (A[i][c] != 0 && (piv < 0 || std::llabs(A[i][c]) < std::llabs(A[piv][c]))) piv = i;
      if (piv < 0) return false;
      std::swap(A[row], A[piv]);
      bool done = true;
      for (int i = row + 1; i < m; ++i) {
        if (A[i][c] == 0) continue;
        long long q = A[i][c] / A[row][c];
        for (int j = c; j < n; ++j) A[i][j] -= q * A[row][j];
        if (A[i][c] != 0) done = false;
      }
      if (done) break;
    }
    if (std::llabs(A[row][c]) != 1) return false;
    ++row;
  }
  return true;
}

}  // namespace su3kit
