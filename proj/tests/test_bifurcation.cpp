#include <doctest.h>

#include <cmath>
#include <random>

#include "su3kit/bifurcation.hpp"
#include "su3kit/serialize.hpp"

using namespace su3kit;

namespace {
EigenPath grid_path(int n) {
  EigenPath p;
  for (int k = 0; k < n; ++k) p.s.push_back(static_cast<double>(k) / (n - 1));
  return p;
}

EigenPath sub_path(const EigenPath& p, size_t lo, size_t hi) {
  EigenPath q;
  q.s.assign(p.s.begin() + lo, p.s.begin() + hi + 1);
  for (const auto& b : p.branches) {
    EigenBranch c;
    c.multiplicity = b.multiplicity;
    c.lambda.assign(b.lambda.begin() + lo, b.lambda.begin() + hi + 1);
    q.branches.push_back(c);
  }
  return q;
}

// values bounded away from the crossing window, zeros only at the split sample
EigenPath random_path(std::mt19937_64& rng, double delta, int split) {
  std::uniform_int_distribution<int> nb(1, 4), mult(1, 3), n(6, 30);
  std::uniform_real_distribution<double> U(2 * delta, 1.0);
  std::bernoulli_distribution coin(0.5);
  EigenPath p = grid_path(std::max(split + 2, n(rng)));
  const int B = nb(rng);
  for (int b = 0; b < B; ++b) {
    EigenBranch br;
    br.multiplicity = mult(rng);
    for (size_t k = 0; k < p.s.size(); ++k) br.lambda.push_back((coin(rng) ? 1 : -1) * U(rng));
    if (coin(rng)) br.lambda[split] = 0.0;
    p.branches.push_back(br);
  }
  return p;
}

ReducibleArc pitchfork() {
  ReducibleArc A;
  A.name = "p";
  A.t_knots = {-1.0, 1.0};
  A.a_knots = {-1.0, 1.0};
  A.b = -1.0;
  return A;
}

ModelFamily load(const char* name) {
  return family_from_json(json::parse(read_file(std::string(SU3KIT_DATA) + "/" + name)));
}

// independent hperp flow along an arc: every mode sampled as a multiplicity-two branch
int sampled_hperp_flow(const ReducibleArc& A, double delta) {
  EigenPath p = grid_path(20001);
  for (int m = 0; m < A.modes(); ++m) {
    EigenBranch b;
    b.multiplicity = 2;
    for (double s : p.s) b.lambda.push_back(2 * A.a(s, m));
    p.branches.push_back(b);
  }
  double d = delta;
  for (int m = 0; m < A.modes(); ++m) d = std::min({d, std::abs(A.a(0.0, m)), std::abs(A.a(1.0, m))});
  return spectral_flow(p, d);
}
}  // namespace

TEST_SUITE("bifurcation") {
  TEST_CASE("spectral flow examples") {
    EigenPath p = grid_path(101);
    EigenBranch up, zero, down;
    for (double s : p.s) {
      up.lambda.push_back(s - 0.5);
      zero.lambda.push_back(0.0 * s);
      down.lambda.push_back(0.5 - s);
    }
    down.multiplicity = 2;
    p.branches = {up};
    CHECK(spectral_flow(p, 0.05) == 1);
    p.branches = {down};
    CHECK(spectral_flow(p, 0.05) == -2);
    // a constant zero gives -dim ker at any sampling: the tilted segment makes it transverse
    EigenPath z2 = grid_path(2);
    z2.branches = {EigenBranch{{0.0, 0.0}, 1}};
    CHECK(spectral_flow(z2, 0.05) == -1);
    EigenPath z3 = grid_path(3);
    z3.branches = {EigenBranch{{0.0, 0.0, 0.0}, 1}};
    CHECK(spectral_flow(z3, 0.05) == -1);
    p.branches = {zero};
    CHECK(spectral_flow(p, 0.05) == -1);
    // a branch lying on the tilted segment for three samples is non-transverse
    EigenPath on = grid_path(5);
    on.branches = {EigenBranch{{1.0, -0.025, 0.0, 0.025, -1.0}, 1}};
    CHECK_THROWS_AS(spectral_flow(on, 0.05), std::domain_error);
    CHECK(spectral_flow_fn([](double s) { return s - 0.5; }, 0.0, 1.0, 1, 0.05) == 1);
    CHECK(spectral_flow_fn([](double s) { return 0.5 - s; }, 0.0, 1.0, 2, 0.05) == -2);
    CHECK(spectral_flow_fn([](double) { return 0.0; }, 0.0, 1.0, 1, 0.05) == -1);
    CHECK(spectral_flow_fn([](double s) { return std::cos(4 * s); }, 0.0, 1.0, 1, 0.05) == -1);
    CHECK(spectral_flow_fn([](double s) { return std::cos(6 * s); }, 0.0, 1.0, 1, 0.05) == 0);
    EigenPath bad = grid_path(3);
    bad.branches = {EigenBranch{{1.0, 2.0}, 1}};
    CHECK_THROWS_AS(spectral_flow(bad, 0.05), std::invalid_argument);
  }

  TEST_CASE("spectral flow additivity on random sampled paths") {
    std::mt19937_64 rng(71);
    const double delta = 0.05;
    for (int i = 0; i < 500; ++i) {
      std::uniform_int_distribution<int> sp(1, 20);
      const int split = sp(rng);
      EigenPath p = random_path(rng, delta, split);
      const size_t last = p.s.size() - 1;
      for (auto& b : p.branches) {   // endpoints away from zero
        if (b.lambda[0] == 0.0) b.lambda[0] = 0.5;
        if (b.lambda[last] == 0.0) b.lambda[last] = -0.5;
      }
      int lhs = spectral_flow(sub_path(p, 0, split), delta) + spectral_flow(sub_path(p, split, last), delta);
      CHECK(lhs == spectral_flow(p, delta) - kernel_dim(p, split));
    }
  }

  TEST_CASE("homotopy invariance under small interior perturbations") {
    std::mt19937_64 rng(72);
    const double delta = 0.05;
    std::uniform_real_distribution<double> e(-0.49 * delta, 0.49 * delta), U(-1.0, 1.0);
    for (int i = 0; i < 300; ++i) {
      EigenPath p = grid_path(25);
      for (int b = 0; b < 3; ++b) {
        EigenBranch br;
        br.multiplicity = 1 + b;
        for (int k = 0; k < 25; ++k) br.lambda.push_back(U(rng));
        p.branches.push_back(br);
      }
      EigenPath q = p;
      for (auto& b : q.branches)
        for (size_t k = 1; k + 1 < b.lambda.size(); ++k) b.lambda[k] += e(rng);
      CHECK(spectral_flow(p, delta) == spectral_flow(q, delta));
    }
  }

  TEST_CASE("kernel dimension") {
    EigenPath p = grid_path(3);
    p.branches = {EigenBranch{{1, 0, 1}, 2}, EigenBranch{{0, 0, 1}, 1}, EigenBranch{{1, 1e-13, 1}, 1}};
    CHECK(kernel_dim(p, 0) == 1);
    CHECK(kernel_dim(p, 1) == 3);
    CHECK(kernel_dim(p, 1, 1e-12) == 4);
    CHECK(kernel_dim(p, 2) == 0);
  }

  TEST_CASE("pitchfork slices") {
    ModelFamily fam{{pitchfork()}, 0.05};
    auto lo = moduli_slice(fam, -0.5);
    REQUIRE(lo.reducibles.size() == 1);
    CHECK(lo.irreducibles.empty());
    auto hi = moduli_slice(fam, 0.5);
    REQUIRE(hi.irreducibles.size() == 1);
    CHECK(hi.irreducibles[0].radius2 == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(2 * hi.reducibles[0].a == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(hi.reducibles[0].sf_hperp == 2);
    CHECK(lo.reducibles[0].sf_hperp == 0);
    CHECK_THROWS_AS(moduli_slice(fam, 0.0), std::domain_error);
  }

  TEST_CASE("bifurcation points") {
    auto p = bifurcation_points(pitchfork());
    REQUIRE(p.size() == 1);
    CHECK(p[0].s == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(p[0].sign == 1);

    ReducibleArc c;
    c.closed = true;
    c.b = 1.0;
    for (int k = 0; k <= 16; ++k) {
      c.t_knots.push_back(0.3 * std::sin(2 * M_PI * k / 16.0));
      c.a_knots.push_back(std::cos(2 * M_PI * k / 16.0));
    }
    c.t_knots.back() = c.t_knots.front();
    c.a_knots.back() = c.a_knots.front();
    auto q = bifurcation_points(c);
    REQUIRE(q.size() == 2);
    CHECK(q[0].s == doctest::Approx(0.25).epsilon(1e-3));
    CHECK(q[0].sign == -1);
    CHECK(q[1].s == doctest::Approx(0.75).epsilon(1e-3));
    CHECK(q[1].sign == 1);

    ReducibleArc pos = pitchfork();
    pos.a_knots = {0.3, 0.8};
    CHECK(bifurcation_points(pos).empty());

    ReducibleArc tang = pitchfork();
    tang.t_knots = {-1.0, 0.0, 1.0};
    tang.a_knots = {0.5, 0.0, 0.5};
    CHECK_THROWS_AS(bifurcation_points(tang), std::domain_error);
  }

  TEST_CASE("audit: empty family and a single pitchfork") {
    auto e = wall_crossing_audit(ModelFamily{});
    CHECK(e.ok);
    CHECK(e.minus.lambda_prime == 0);
    CHECK(e.plus.lambda_prime == 0);
    CHECK(e.bifurcation_total == 0);

    auto r = wall_crossing_audit(load("pitchfork.json"));
    CHECK(r.ok);
    CHECK(r.plus.lambda_prime - r.minus.lambda_prime == 1);
    REQUIRE(r.arcs.size() == 1);
    CHECK(r.arcs[0].b == 1);
    CHECK(r.arcs[0].sf_endpoints == 2);
    CHECK(r.minus.lambda_prime - r.minus.lambda_dp == doctest::Approx(r.plus.lambda_prime - r.plus.lambda_dp));
  }

  TEST_CASE("three-arc scenario") {
    auto fam = load("three_arcs.json");
    auto r = wall_crossing_audit(fam);
    CHECK(r.ok);
    REQUIRE(r.arcs.size() == 3);
    CHECK(r.arcs[0].closed);
    CHECK(r.arcs[0].b == 0);
    CHECK(r.arcs[0].sf_endpoints == 0);
    CHECK(r.arcs[0].points.size() == 2);
    CHECK(r.arcs[1].b == 1);
    CHECK(r.arcs[1].orientation * r.arcs[1].sf_endpoints == 2);
    CHECK(r.arcs[2].b == 2);
    // left to right the bottom flow is -4; along its orientation it is 4
    CHECK(r.arcs[2].sf_endpoints == -4);
    CHECK(r.arcs[2].orientation * r.arcs[2].sf_endpoints == 4);
    for (size_t i = 0; i < fam.arcs.size(); ++i)
      CHECK(sampled_hperp_flow(fam.arcs[i], fam.delta) == r.arcs[i].sf_endpoints);
    CHECK(r.check_c);
    // the free per-arc offset does not change the audit
    for (int off : {-4, 2, 6}) {
      auto f2 = fam;
      for (auto& A : f2.arcs) A.sf_hperp_offset = off;
      auto r2 = wall_crossing_audit(f2);
      CHECK(r2.ok);
      CHECK(r2.minus.lambda_prime - r2.minus.lambda_dp == doctest::Approx(r.minus.lambda_prime - r.minus.lambda_dp));
    }
  }

  TEST_CASE("randomized families: closed arcs, open arcs, invariance") {
    std::vector<ModelFamily> fams;
    for (std::uint64_t seed = 1; seed <= 100; ++seed) fams.push_back(random_family(seed));
    auto res = audit_families(fams);
    auto ser = audit_families(fams, false);
    int closed = 0, open = 0, folded = 0;
    for (size_t f = 0; f < fams.size(); ++f) {
      const auto& r = res[f];
      CHECK(r.ok);
      CHECK(r.check_a);
      CHECK(r.check_b);
      CHECK(r.check_c);
      CHECK(r.minus.lambda_prime - r.minus.lambda_dp == doctest::Approx(r.plus.lambda_prime - r.plus.lambda_dp));
      CHECK(std::abs(2 * r.plus.lambda_dp - std::round(2 * r.plus.lambda_dp)) < 1e-12);
      CHECK(ser[f].plus.lambda_prime == r.plus.lambda_prime);
      CHECK(ser[f].plus.lambda_dp == r.plus.lambda_dp);
      for (size_t i = 0; i < r.arcs.size(); ++i) {
        const auto& au = r.arcs[i];
        const auto& A = fams[f].arcs[i];
        CHECK(au.sf_endpoints % 2 == 0);
        if (A.closed) {
          ++closed;
          CHECK(au.b == 0);
        } else {
          ++open;
          CHECK(2 * au.b == au.orientation * sampled_hperp_flow(A, fams[f].delta));
        }
        folded += A.folds_before(1.0) > 0;
      }
      for (const auto& p : r.minus.reducibles) CHECK(p.sf_hperp % 2 == 0);
      for (const auto& p : r.plus.reducibles) CHECK(p.sf_hperp % 2 == 0);
    }
    // the generator exercises every arc shape
    CHECK(closed > 10);
    CHECK(open > 10);
    CHECK(folded > 10);
    // same seed, same family
    CHECK(family_to_json(random_family(7)) == family_to_json(random_family(7)));
  }

  TEST_CASE("validation names the offending arc") {
    auto expect = [](ModelFamily f, const std::string& what) {
      try {
        validate_family(f);
        FAIL("expected invalid_argument");
      } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find(what) != std::string::npos);
      }
    };
    ReducibleArc A = pitchfork();
    A.name = "bad";
    auto with = [&](auto edit) {
      ReducibleArc B = A;
      edit(B);
      return ModelFamily{{pitchfork(), B}, 0.05};
    };
    expect(with([](ReducibleArc& B) { B.b = 0.0; }), "arc bad: b = 0");
    expect(with([](ReducibleArc& B) { B.a_knots.push_back(1.0); }), "arc bad");
    expect(with([](ReducibleArc& B) { B.sf_hperp_offset = 1; }), "even");
    expect(with([](ReducibleArc& B) { B.t_knots = {-1.0, 1.5}; }), "outside");
    expect(with([](ReducibleArc& B) { B.t_knots = {-1.0, 0.5}; }), "open arcs");
    expect(with([](ReducibleArc& B) {
             B.closed = true;
             B.t_knots = {0.0, 0.5, 0.0};
             B.a_knots = {1.0, 0.5, 1.0};
           }),
           "turn at s = 0");
    expect(with([](ReducibleArc& B) {
             B.closed = true;
             B.t_knots = {0.0, 0.5, 0.0, -0.5, 0.1};
             B.a_knots = {1.0, 0.5, 1.0, 0.5, 1.0};
           }),
           "match");
    expect(with([](ReducibleArc& B) { B.extra_modes.push_back({{-1.0, 1.0}, -1.0}); }), "two modes");
    expect(with([](ReducibleArc& B) { B.extra_modes.push_back({{-1.0, 0.0, 1.0}, 1.0}); }), "one a value");
    CHECK_THROWS_AS(validate_family(ModelFamily{{}, 0.0}), std::invalid_argument);
  }

  TEST_CASE("sweep skips non-regular grid points") {
    ModelFamily fam{{pitchfork()}, 0.05};
    auto rows = sweep(fam, 41);
    CHECK(rows.size() == 40);   // t = 0 is the bifurcation
    CHECK(rows.front().t == -1.0);
    CHECK(rows.back().t == 1.0);
    for (const auto& r : rows) CHECK(r.lambda_prime == (r.t > 0 ? 1 : 0));
  }
}
