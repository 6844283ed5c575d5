#include <doctest.h>

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "properties.hpp"
#include "rpr/model.hpp"

using namespace rpr;

namespace {
const double kPi = std::numbers::pi;
}

TEST_CASE("anchor positions of the example motion") {
  const auto d = example_design();
  const auto m = MotionSpec::example56();
  const auto K0 = anchor_positions(d, m, 0.0);
  CHECK(K0.c(4) == doctest::Approx(5.5));
  CHECK(K0.d(4) == doctest::Approx(0.0));
  CHECK(K0.c(2) == 11.0);
  CHECK(K0.c(3) == 5.0);
  CHECK(K0.d(3) == 7.0);
  const auto K = anchor_positions(d, m, kPi / 2);
  CHECK(K.c(5) == doctest::Approx(2.5));
  CHECK(K.d(5) == doctest::Approx(4.5));
}

TEST_CASE("identity placement") {
  MotionSpec m;
  m.rot_scale = 0.0;
  const auto d = example_design();
  const auto K = anchor_positions(d, m, 0.7);
  CHECK(K.c(4) == 0.0);
  CHECK(K.d(4) == 0.0);
  CHECK(K.c(5) == d.x5);
  CHECK(K.d(5) == 0.0);
  CHECK(K.c(6) == d.x6);
  CHECK(K.d(6) == d.y6);
}

TEST_CASE("platform shape is preserved along the motion") {
  const auto d = example_design();
  const auto m = MotionSpec::example56();
  for (double phi : discretize_motion(m, 37)) {
    const auto K = anchor_positions(d, m, phi);
    CHECK(distance(K.k[3], K.k[4]) == doctest::Approx(3.0).epsilon(1e-13));
    CHECK(distance(K.k[3], K.k[5]) == doctest::Approx(std::sqrt(5.0)).epsilon(1e-13));
    CHECK(distance(K.k[4], K.k[5]) == doctest::Approx(std::sqrt(8.0)).epsilon(1e-13));
    const auto R = m.rotation(phi);
    CHECK(R[0] * R[3] - R[1] * R[2] == doctest::Approx(1.0));
  }
}

TEST_CASE("discretize_motion") {
  const auto m = MotionSpec::example56();
  const auto g = discretize_motion(m, 90);
  REQUIRE(g.size() == 90);
  CHECK(g.front() == 0.0);
  CHECK(g.back() == 2 * kPi);
  for (size_t i = 1; i < g.size(); ++i) CHECK(g[i] > g[i - 1]);

  MotionSpec unit;
  unit.u = 0.0;
  unit.v = 1.0;
  CHECK(discretize_motion(unit, 2) == std::vector<double>{0.0, 1.0});

  std::vector<double> extra;
  for (int k = 0; k < 8; ++k) extra.push_back(5.38306606 + k * (5.5066118442 - 5.38306606) / 8.5);
  const auto g2 = discretize_motion(m, 90, extra);
  CHECK(g2.size() == 98);
  for (size_t i = 1; i < g2.size(); ++i) CHECK(g2[i] > g2[i - 1]);
  // an extra pose equal to a grid pose is a duplicate
  CHECK(discretize_motion(m, 90, {0.0, 2 * kPi}).size() == 90);
  CHECK_THROWS_AS(discretize_motion(m, 1), std::invalid_argument);
}

TEST_CASE("inner metric of the example design") {
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 0.4);
  const auto L = inner_metric(K);
  // bar order 12, 23, 13, 14, 25, 36, 45, 56, 46
  CHECK(L[0] == doctest::Approx(11.0));
  CHECK(L[2] == doctest::Approx(std::sqrt(74.0)));
  CHECK(L[1] == doctest::Approx(std::sqrt(85.0)));
  CHECK(L[6] == doctest::Approx(3.0));
  CHECK(L[8] == doctest::Approx(std::sqrt(5.0)));
  CHECK(L[7] == doctest::Approx(std::sqrt(8.0)));
  ConfigurationVector Z;
  for (double l : inner_metric(Z)) CHECK(l == 0.0);
}

TEST_CASE("inner metric is invariant under rigid motions") {
  const auto r = props::inner_metric_rigid_invariance(11);
  INFO(r.detail);
  CHECK(r.ok);
}

TEST_CASE("interpretations") {
  const Interpretation pr{Kind::plate, Kind::rigid};
  CHECK(invert_interpretation(pr) == Interpretation{Kind::rigid, Kind::plate});
  CHECK(invert_interpretation({Kind::bar, Kind::bar}) == Interpretation{Kind::bar, Kind::bar});
  CHECK(invert_interpretation({Kind::rigid, Kind::bar}) == Interpretation{Kind::bar, Kind::rigid});
  const auto all = all_interpretations();
  CHECK(all.size() == 9);
  for (Interpretation i : all) {
    CHECK(invert_interpretation(invert_interpretation(i)) == i);
    CHECK(parse_interpretation(interpretation_name(i)) == i);
  }
  CHECK_THROWS(parse_interpretation("glass/rigid"));
}

TEST_CASE("design validation") {
  CHECK_NOTHROW(example_design().validate());
  auto d = example_design();
  d.y3 = 0.0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = example_design();
  d.y6 = 0.0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
  d = example_design();
  d.x5 = -1.0;
  CHECK_THROWS_AS(d.validate(), std::invalid_argument);
}

TEST_CASE("normalization and inversion") {
  const auto K = props::random_configuration(5);
  ConfigurationVector M;
  for (int i = 0; i < 6; ++i) M.k[i] = {K.k[i].x + 3.0, K.k[i].y - 1.0};
  const auto N = normalize(M);
  CHECK(N.c(1) == 0.0);
  CHECK(N.d(1) == 0.0);
  CHECK(std::abs(N.d(2)) < 1e-14);
  CHECK(N.c(2) > 0.0);
  const auto I = invert_configuration(K);
  CHECK(std::abs(I.d(2)) < 1e-14);
  const auto L = inner_metric(K), Li = inner_metric(I);
  // legs keep their lengths, base and platform swap
  CHECK(Li[3] == doctest::Approx(L[3]));
  CHECK(Li[6] == doctest::Approx(L[0]));
  CHECK(Li[0] == doctest::Approx(L[6]));
  const auto back = invert_configuration(I);
  const auto Kn = normalize(K);
  for (int i = 0; i < 12; ++i) CHECK(back.flat()[i] == doctest::Approx(Kn.flat()[i]).epsilon(1e-12));
}
