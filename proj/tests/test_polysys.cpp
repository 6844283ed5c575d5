#include <doctest.h>

#include <random>
#include <stdexcept>

#include "rpr/lagrangian.hpp"
#include "rpr/polysys.hpp"

using namespace rpr;

namespace {

VarTablePtr table(std::vector<std::string> n) { return std::make_shared<const VarTable>(std::move(n)); }

bool same(const Polynomial& a, const Polynomial& b) { return (a - b).is_zero(); }

}  // namespace

TEST_CASE("differentiation") {
  const auto V = table({"x", "y", "l"});
  const auto x = Polynomial::variable(V, "x"), y = Polynomial::variable(V, "y"), l = Polynomial::variable(V, "l");
  CHECK(same((x * x * y).differentiate("x"), 2.0 * x * y));
  CHECK((x * x).differentiate("y").is_zero());
  const Polynomial D = x * x + y * y, Vp = x * y - 1.0;
  CHECK(same((D + l * Vp).differentiate("l"), Vp));
  CHECK_THROWS_AS(x.differentiate("z"), std::invalid_argument);
}

TEST_CASE("no zero terms are stored") {
  const auto V = table({"x"});
  const auto x = Polynomial::variable(V, "x");
  const Polynomial p = (x + 1.0) - x;
  CHECK(p.size() == 1);
  CHECK((x - x).is_zero());
}

TEST_CASE("evaluation and Jacobian") {
  const auto V = table({"x", "y"});
  const auto x = Polynomial::variable(V, "x"), y = Polynomial::variable(V, "y");
  PolynomialSystem s{V, {x * x - 1.0}, {}};
  CHECK(std::abs(evaluate(s, {1.0, 0.0})[0]) == 0.0);
  CHECK(evaluate(s, {cdouble(0, 1), 0.0})[0] == cdouble(-2.0, 0.0));
  CHECK_THROWS_AS(evaluate(s, {1.0}), std::invalid_argument);
  PolynomialSystem t{V, {x * x - y, y}, {}};
  const auto J = jacobian(t, {1.0, 1.0});
  CHECK(J == std::vector<cdouble>{2.0, -1.0, 0.0, 1.0});
}

TEST_CASE("scale_system") {
  const auto V = table({"x"});
  const auto x = Polynomial::variable(V, "x");
  auto coef = [](const PolynomialSystem& s, int deg) {
    for (const auto& [e, c] : s.equations[0].terms())
      if (e[0] == deg) return c;
    return cdouble(0.0);
  };
  const auto a = scale_system(PolynomialSystem{V, {10.0 * x + 20.0}, {}});
  CHECK(coef(a, 1) == cdouble(0.5));
  CHECK(coef(a, 0) == cdouble(1.0));
  const auto b = scale_system(PolynomialSystem{V, {x + 1.0}, {}});
  CHECK(coef(b, 1) == cdouble(1.0));
  const auto c = scale_system(PolynomialSystem{V, {3.0 * x * x - 3.0}, {}});
  CHECK(coef(c, 2) == cdouble(1.0));
  CHECK(coef(c, 0) == cdouble(-1.0));
  CHECK_THROWS_AS(scale_system(PolynomialSystem{V, {Polynomial(V)}, {}}), std::invalid_argument);
  // idempotent
  const auto c2 = scale_system(c);
  CHECK(same(c2.equations[0], c.equations[0]));
}

TEST_CASE("Bezout counts of the critical-point systems") {
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 1.0);
  auto count = [&](const AssembledProblem& P, bool single) {
    const auto s = P.instantiate(params_of(P.target, P.omega));
    std::vector<std::vector<int>> one(1);
    for (int i = 0; i < s.n_vars(); ++i) one[0].push_back(i);
    return bezout_count(s, single ? one : P.grouping);
  };
  const auto rr = build_regular_V({Kind::rigid, Kind::rigid}, K);
  CHECK(rr.n_unknowns == 6);
  CHECK(count(rr, false) == 324);
  for (Interpretation i : {Interpretation{Kind::plate, Kind::rigid}, Interpretation{Kind::bar, Kind::rigid},
                           Interpretation{Kind::rigid, Kind::plate}}) {
    const auto P = build_regular_V(i, K);
    CHECK(P.n_unknowns == 7);
    CHECK(count(P, true) == 2187);
  }
  const auto pp = build_regular_V({Kind::plate, Kind::plate}, K);
  CHECK(pp.n_unknowns == 10);
  CHECK(count(pp, false) == 236196);
}

TEST_CASE("Bezout count basics") {
  const auto V = table({"x", "y"});
  const auto x = Polynomial::variable(V, "x"), y = Polynomial::variable(V, "y");
  const PolynomialSystem s{V, {x * x * y - 1.0, x * y * y * y - 2.0}, {}};
  // one group: product of total degrees
  CHECK(bezout_count(s, {{0, 1}}) == 12);
  // two groups: x^2 y and x y^3 -> 2*3 + 1*1 = 7
  CHECK(bezout_count(s, {{0}, {1}}) == 7);
  CHECK_THROWS_AS(bezout_count(s, {{0}}), std::invalid_argument);
  CHECK_THROWS_AS(bezout_count(s, {{0, 1}, {1}}), std::invalid_argument);
}

TEST_CASE("derivatives agree with central differences on random polynomials") {
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  std::uniform_int_distribution<int> E(0, 3);
  const auto V = table({"a", "b", "c"});
  for (int t = 0; t < 30; ++t) {
    Polynomial p(V);
    for (int k = 0; k < 8; ++k) p.add_term({uint8_t(E(rng)), uint8_t(E(rng)), uint8_t(E(rng))}, {U(rng), U(rng)});
    std::vector<cdouble> z{{U(rng), U(rng)}, {U(rng), U(rng)}, {U(rng), U(rng)}};
    for (int v = 0; v < 3; ++v) {
      const double h = 1e-5 * (1.0 + std::abs(z[v]));
      auto zp = z, zm = z;
      zp[v] += h;
      zm[v] -= h;
      const cdouble fd = (p.evaluate(zp) - p.evaluate(zm)) / (2.0 * h);
      const cdouble an = p.differentiate(v).evaluate(z);
      CHECK(std::abs(an - fd) <= 1e-6 * (1.0 + std::abs(fd)));
      // mixed partials commute
      for (int w = 0; w < 3; ++w) CHECK(same(p.differentiate(v).differentiate(w), p.differentiate(w).differentiate(v)));
    }
  }
}

TEST_CASE("mixed partials commute on the assembled systems") {
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 1.0);
  const auto P = build_regular_V({Kind::rigid, Kind::rigid}, K);
  for (int i = 0; i < P.n_unknowns; ++i)
    for (int j = 0; j < P.n_unknowns; ++j) CHECK(same(P.system[i].differentiate(j), P.system[j].differentiate(i)));
}

TEST_CASE("system dump round trip") {
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 1.0);
  const auto P = build_regular_V({Kind::bar, Kind::rigid}, K);
  const auto s = P.instantiate(params_of(P.target, P.omega));
  const std::string d = dump_system(s);
  const auto back = load_system(d);
  CHECK(dump_system(back) == d);
  CHECK(fingerprint(d) == fingerprint(dump_system(back)));
  CHECK(fingerprint(d) != fingerprint(d + " "));
}
