#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "properties.hpp"
#include "rpr/varieties.hpp"

using namespace rpr;

namespace {

ConfigurationVector concurrent_legs(std::mt19937_64& rng) {
  // legs through a common point q: k_{i+3} = k_i + t_i (q - k_i)
  std::uniform_real_distribution<double> U(-5.0, 5.0);
  ConfigurationVector K;
  K.k[1] = {U(rng), 0.0};
  K.k[2] = {U(rng), U(rng)};
  const Point q{U(rng), U(rng)};
  for (int i = 0; i < 3; ++i) {
    const double t = U(rng);
    K.k[i + 3] = {K.k[i].x + t * (q.x - K.k[i].x), K.k[i].y + t * (q.y - K.k[i].y)};
  }
  return K;
}

VarTablePtr coord_table() {
  std::vector<std::string> n;
  for (int i = 1; i <= 6; ++i) {
    n.push_back("c" + std::to_string(i));
    n.push_back("d" + std::to_string(i));
  }
  return std::make_shared<const VarTable>(n);
}

}  // namespace

TEST_CASE("singular configurations") {
  std::mt19937_64 rng(8);
  for (int t = 0; t < 50; ++t) {
    const auto K = concurrent_legs(rng);
    double s = 1.0;
    for (double v : K.flat()) s = std::max(s, std::abs(v));
    CHECK(std::abs(singularity_value(K)) <= 1e-12 * s * s * s * s);
  }
  const auto K0 = anchor_positions(example_design(), MotionSpec::example56(), 0.0);
  CHECK(std::abs(singularity_value(K0)) < 1e-9);
  ConfigurationVector P;  // three parallel legs along (0, 1)
  P.k[1] = {4.0, 0.0};
  P.k[2] = {1.0, 3.0};
  for (int i = 0; i < 3; ++i) P.k[i + 3] = {P.k[i].x, P.k[i].y + 2.0 + i};
  CHECK(std::abs(singularity_value(P)) < 1e-12);
  CHECK(std::abs(singularity_value(anchor_positions(example_design(), MotionSpec::example56(), 1.0))) > 1.0);
}

TEST_CASE("V changes at most its sign when legs are relabeled") {
  for (int t = 0; t < 20; ++t) {
    const auto K = props::random_configuration(700 + t);
    const double v = singularity_value(K);
    std::array<int, 3> perm{0, 1, 2};
    while (std::next_permutation(perm.begin(), perm.end())) {
      ConfigurationVector M;
      for (int i = 0; i < 3; ++i) {
        M.k[i] = K.k[perm[i]];
        M.k[i + 3] = K.k[perm[i] + 3];
      }
      CHECK(std::abs(std::abs(singularity_value(M)) - std::abs(v)) <= 1e-9 * (1.0 + std::abs(v)));
    }
  }
}

TEST_CASE("singularity polynomial") {
  const auto V = coord_table();
  std::array<PolyPoint, 6> k;
  for (int i = 0; i < 6; ++i)
    k[i] = {Polynomial::variable(V, 2 * i), Polynomial::variable(V, 2 * i + 1)};
  const Polynomial p = singularity_polynomial(k);
  CHECK(p.total_degree() == 4);
  for (int t = 0; t < 10; ++t) {
    const auto K = props::random_configuration(900 + t);
    const auto f = K.flat();
    const std::vector<cdouble> z(f.begin(), f.end());
    CHECK(p.evaluate(z).real() == doctest::Approx(singularity_value(K)).epsilon(1e-10));
  }
}

TEST_CASE("collinearity") {
  const auto V = coord_table();
  auto var = [&](const char* n) { return Polynomial::variable(V, n); };
  const Polynomial zero(V);
  const Polynomial cb = collinearity({PolyPoint{zero, zero}, PolyPoint{var("c2"), zero}, PolyPoint{var("c3"), var("d3")}});
  CHECK(((cb - var("c2") * var("d3")).is_zero() || (cb + var("c2") * var("d3")).is_zero()));
  CHECK(collinearity_value({0, 0}, {1, 0}, {0, 1}) == doctest::Approx(1.0));
  CHECK(collinearity_value({1, 0}, {2, 0}, {7, 0}) == 0.0);
  const Polynomial cp = collinearity({PolyPoint{var("c4"), var("d4")}, PolyPoint{var("c5"), var("d5")},
                                      PolyPoint{var("c6"), var("d6")}});
  std::vector<cdouble> z(12, 0.0);
  z[6] = 1.0;
  z[8] = 2.0;
  z[10] = -3.0;
  CHECK(std::abs(cp.evaluate(z)) == 0.0);
}

TEST_CASE("platform constraint") {
  CHECK(platform_constraint_value({0, 0}, {3, 0}, 3.0) == 0.0);
  CHECK(platform_constraint_value({0, 0}, {0, 3}, 3.0) == 0.0);
  CHECK(platform_constraint_value({0, 0}, {4, 0}, 3.0) == doctest::Approx(7.0));
}

TEST_CASE("point-based sixth anchor") {
  const auto d = example_design();
  Point p = point_based_k6({0, 0}, {d.x5, 0}, d);
  CHECK(p.x == doctest::Approx(d.x6));
  CHECK(p.y == doctest::Approx(d.y6));
  p = point_based_k6({1, 1}, {1 + d.x5, 1}, d);
  CHECK(p.x == doctest::Approx(d.x6 + 1));
  CHECK(p.y == doctest::Approx(d.y6 + 1));
  p = point_based_k6({0, 0}, {0, d.x5}, d);
  CHECK(p.x == doctest::Approx(-d.y6));
  CHECK(p.y == doctest::Approx(d.x6));
  auto bad = d;
  bad.x5 = 0.0;
  CHECK_THROWS_AS(point_based_k6({0, 0}, {1, 0}, bad), std::invalid_argument);

  // commutes with rigid motions when the distance constraint holds
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> U(-3.0, 3.0);
  for (int t = 0; t < 20; ++t) {
    const double a = U(rng), c = std::cos(a), s = std::sin(a);
    const Point sh{U(rng), U(rng)};
    auto move = [&](Point q) { return Point{c * q.x - s * q.y + sh.x, s * q.x + c * q.y + sh.y}; };
    const Point base = point_based_k6({0, 0}, {d.x5, 0}, d);
    const Point got = point_based_k6(move({0, 0}), move({d.x5, 0}), d);
    CHECK(got.x == doctest::Approx(move(base).x));
    CHECK(got.y == doctest::Approx(move(base).y));
  }
}
