#include <doctest.h>

#include <map>
#include <random>
#include <set>

#include "oracles.hpp"
#include "su3kit/presentation.hpp"

using namespace su3kit;

namespace {
Word W(std::initializer_list<std::pair<int, int>> l) {
  Word w;
  for (auto [g, e] : l) w.push_back({g, e});
  return w;
}

Word random_word(std::mt19937_64& rng, int n, int len) {
  std::uniform_int_distribution<int> g(0, n - 1), e(0, 1);
  Word w;
  for (int i = 0; i < len; ++i) w.push_back({g(rng), e(rng) ? 1 : -1});
  return w;
}

// group ring elements as maps prefix -> coefficient, after reduction
std::map<std::vector<std::pair<int, int>>, long long> as_map(const GroupRingElement& e) {
  std::map<std::vector<std::pair<int, int>>, long long> m;
  for (const auto& t : e.terms) {
    std::vector<std::pair<int, int>> k;
    for (const auto& l : word_reduce(t.prefix)) k.push_back({l.gen, l.exp});
    m[k] += t.coeff;
  }
  std::erase_if(m, [](const auto& kv) { return kv.second == 0; });
  return m;
}
}  // namespace

TEST_SUITE("presentation") {
  TEST_CASE("trefoil equation becomes a length six relator") {
    auto p = parse_presentation("<x,y | x*y*x = y*x*y>");
    CHECK(p.ngens() == 2);
    REQUIRE(p.relators.size() == 1);
    CHECK(p.relators[0] == W({{0, 1}, {1, 1}, {0, 1}, {1, -1}, {0, -1}, {1, -1}}));
  }

  TEST_CASE("trivial group") {
    auto p = parse_presentation("<a | a>");
    CHECK(p.ngens() == 1);
    REQUIRE(p.relators.size() == 1);
    CHECK(p.relators[0] == W({{0, 1}}));
    CHECK(is_homology_sphere(p));
  }

  TEST_CASE("binary icosahedral presentation expands powers") {
    auto p = parse_presentation("<s,t | (s*t)^2 = s^3; s^3 = t^5>");
    REQUIRE(p.relators.size() == 2);
    // by hand: stst s^-3 and s^3 t^-5
    CHECK(p.relators[0] == W({{0, 1}, {1, 1}, {0, 1}, {1, 1}, {0, -1}, {0, -1}, {0, -1}}));
    CHECK(p.relators[1] == W({{0, 1}, {0, 1}, {0, 1}, {1, -1}, {1, -1}, {1, -1}, {1, -1}, {1, -1}}));
    CHECK(is_homology_sphere(p));
  }

  TEST_CASE("parse errors carry positions") {
    try {
      parse_presentation("<x,y | x*z>");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(e.pos == 9);
      CHECK(std::string(e.what()).find("unknown generator") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_presentation("< | x>"), ParseError);
    CHECK_THROWS_AS(parse_presentation("<x,x | x>"), ParseError);
    CHECK_THROWS_AS(parse_presentation("<x | x^>"), ParseError);
    CHECK_THROWS_AS(parse_presentation("<x | x> junk"), ParseError);
    CHECK_THROWS_AS(parse_presentation("<x | x"), ParseError);
  }

  TEST_CASE("empty relator list, trailing separator, identity word") {
    CHECK(parse_presentation("<x,y | >").relators.empty());
    CHECK(parse_presentation("<x,y>").relators.empty());
    CHECK(parse_presentation("<x | x^2;>").relators.size() == 1);
    auto p = parse_presentation("<x | x*x^-1 = 1>");
    REQUIRE(p.relators.size() == 1);
    CHECK(p.relators[0].empty());
  }

  TEST_CASE("round trip through the printer") {
    for (const char* s : {"<x,y | x*y*x = y*x*y>", "<s,t | (s*t)^2 = s^3; s^3 = t^5>", "<a | a>",
                          "<a,b,c | a*b^-1*c; c^3>"}) {
      auto p = parse_presentation(s);
      CHECK(parse_presentation(presentation_to_string(p)) == p);
    }
  }

  TEST_CASE("reduce, invert, concat") {
    CHECK(word_reduce(W({{0, 1}, {0, -1}})).empty());
    CHECK(word_invert(W({{0, 1}, {1, 1}})) == W({{1, -1}, {0, -1}}));
    CHECK(word_concat(W({{0, 1}, {1, 1}}), W({{1, -1}, {2, 1}})) == W({{0, 1}, {2, 1}}));
    std::mt19937_64 rng(1);
    for (int i = 0; i < 200; ++i) {
      Word w = random_word(rng, 3, 14);
      Word r = word_reduce(w);
      CHECK(word_reduce(r) == r);
      for (size_t k = 0; k + 1 < r.size(); ++k)
        CHECK_FALSE((r[k].gen == r[k + 1].gen && r[k].exp == -r[k + 1].exp));
      CHECK(word_concat(w, word_invert(w)).empty());
    }
  }

  TEST_CASE("enumerated words are reduced, distinct, and counted correctly") {
    auto ws = enumerate_words(2, 3);
    // 4 + 4*3 + 4*9
    CHECK(ws.size() == 52);
    std::set<std::vector<std::pair<int, int>>> seen;
    for (const auto& w : ws) {
      CHECK(word_reduce(w) == w);
      std::vector<std::pair<int, int>> k;
      for (auto l : w) k.push_back({l.gen, l.exp});
      seen.insert(k);
    }
    CHECK(seen.size() == ws.size());
  }

  TEST_CASE("fox derivative examples") {
    auto d = fox_derivative(W({{0, 1}}), 0, 1);
    REQUIRE(d.terms.size() == 1);
    CHECK(d.terms[0].coeff == 1);
    CHECK(d.terms[0].prefix.empty());

    auto e = as_map(fox_derivative(W({{0, 1}, {1, 1}, {0, 1}}), 0, 2));
    std::map<std::vector<std::pair<int, int>>, long long> want{{{}, 1}, {{{0, 1}, {1, 1}}, 1}};
    CHECK(e == want);

    // x x^-1 as an unreduced word: 1 - (x x^-1), which evaluates to zero
    auto f = fox_derivative(W({{0, 1}, {0, -1}}), 0, 1);
    std::mt19937_64 rng(3);
    std::vector<Mat3> imgs{oracle::random_su3(rng)};
    CHECK(evaluate_group_ring(f, imgs, CoefficientModule{ModuleTag::Su3Adjoint, {}}).norm() < 1e-12);
    CHECK_THROWS_AS(fox_derivative(W({{0, 1}}), 2, 2), std::out_of_range);
  }

  TEST_CASE("fox product rule on random words") {
    std::mt19937_64 rng(5);
    for (int i = 0; i < 200; ++i) {
      Word u = word_reduce(random_word(rng, 3, 6)), v = word_reduce(random_word(rng, 3, 6));
      for (int j = 0; j < 3; ++j) {
        auto lhs = as_map(fox_derivative(word_concat(u, v), j, 3));
        auto rhs = as_map(fox_derivative(u, j, 3));
        for (const auto& t : fox_derivative(v, j, 3).terms) {
          std::vector<std::pair<int, int>> k;
          for (const auto& l : word_concat(u, t.prefix)) k.push_back({l.gen, l.exp});
          rhs[k] += t.coeff;
        }
        std::erase_if(rhs, [](const auto& kv) { return kv.second == 0; });
        CHECK(lhs == rhs);
      }
    }
  }

  TEST_CASE("fundamental formula: relator map linearization") {
    // For rho_t(x_j) = exp(t X_j) rho(x_j), d/dt rho_t(r) rho(r)^-1 = sum_j (dr/dx_j) X_j
    // with the group ring acting by the adjoint action.
    std::mt19937_64 rng(7);
    auto p = parse_presentation("<x,y | x*y*x = y*x*y>");
    std::vector<Mat3> imgs{oracle::random_su3(rng), oracle::random_su3(rng)};
    std::vector<Mat3> X{oracle::random_su3_alg(rng), oracle::random_su3_alg(rng)};
    const double h = 1e-5;
    auto rel = [&](double t) {
      std::vector<Mat3> g{oracle::expm_taylor(t * X[0]) * imgs[0], oracle::expm_taylor(t * X[1]) * imgs[1]};
      Mat3 M = Mat3::Identity();
      for (auto l : p.relators[0]) M = M * (l.exp > 0 ? g[l.gen] : Mat3(g[l.gen].adjoint()));
      return M;
    };
    Mat3 R0 = rel(0.0);
    Mat3 fd = (rel(h) - rel(-h)) / (2 * h) * R0.adjoint();
    CoefficientModule mod{ModuleTag::Su3Adjoint, {}};
    Eigen::VectorXd lin = Eigen::VectorXd::Zero(8);
    for (int j = 0; j < 2; ++j)
      lin += evaluate_group_ring(fox_derivative(p.relators[0], j, 2), imgs, mod) * module_from_matrix(mod, X[j]);
    CHECK((module_from_matrix(mod, fd) - lin).norm() < 1e-8);
  }

  TEST_CASE("evaluate: identity element and central prefix") {
    std::mt19937_64 rng(9);
    GroupRingElement one{{{1, {}}}};
    std::vector<Mat3> imgs{oracle::random_su3(rng)};
    CHECK((evaluate_group_ring(one, imgs, {ModuleTag::Su3Adjoint, {}}) - Eigen::MatrixXd::Identity(8, 8)).norm() <
          1e-14);
    const cplx w = std::exp(cplx(0, 2 * oracle::kPi / 3));
    std::vector<Mat3> central{w * Mat3::Identity()};
    GroupRingElement x{{{1, {{0, 1}}}}};
    CHECK((evaluate_group_ring(x, central, {ModuleTag::Su3Adjoint, {}}) - Eigen::MatrixXd::Identity(8, 8)).norm() <
          1e-12);
    CHECK_THROWS_AS(evaluate_group_ring(x, imgs, {ModuleTag::HperpPart, {}}), std::invalid_argument);
  }

  TEST_CASE("homology sphere check") {
    CHECK(is_homology_sphere(parse_presentation("<s,t | (s*t)^2 = s^3; s^3 = t^5>")));
    CHECK_FALSE(is_homology_sphere(parse_presentation("<x,y | x*y*x = y*x*y>")));   // trefoil: H1 = Z
    CHECK_FALSE(is_homology_sphere(parse_presentation("<x | x^2>")));
    CHECK_FALSE(is_homology_sphere(parse_presentation("<x,y | >")));
    CHECK(is_homology_sphere(parse_presentation("<s,t | (s*t)^2 = s^3; s^3 = t^7>")));
  }
}
