#include <doctest.h>

#include <cmath>

#include "rpr/numeric.hpp"

using namespace rpr;

TEST_CASE("double-double keeps the bits a double drops") {
  const DoubleDouble a = DoubleDouble(1.0) + DoubleDouble(1e-20);
  CHECK(a.hi == 1.0);
  CHECK(a.lo == doctest::Approx(1e-20).epsilon(1e-12));
  CHECK(to_double(a - DoubleDouble(1.0)) == doctest::Approx(1e-20).epsilon(1e-12));
}

TEST_CASE("double-double products and quotients") {
  const DoubleDouble third = DoubleDouble(1.0) / DoubleDouble(3.0);
  const DoubleDouble back = third * DoubleDouble(3.0) - DoubleDouble(1.0);
  CHECK(std::abs(to_double(back)) < 1e-31);
  const DoubleDouble r = sqrt(DoubleDouble(2.0));
  CHECK(std::abs(to_double(r * r - DoubleDouble(2.0))) < 1e-30);
  CHECK(to_double(sqrt(DoubleDouble(-1.0))) == 0.0);
  CHECK(DoubleDouble(1.0) < DoubleDouble(1.0, 1e-25));
  CHECK(abs(DoubleDouble(-2.0)) == DoubleDouble(2.0));
}

TEST_CASE("complex arithmetic over both precisions") {
  const Complex<double> i(0.0, 1.0);
  CHECK(to_cdouble(i * i) == cdouble(-1.0, 0.0));
  const Complex<double> z(3.0, 4.0);
  CHECK(abs_d(z) == doctest::Approx(5.0));
  CHECK(to_cdouble(z / z) == cdouble(1.0, 0.0));
  CHECK(to_cdouble(conj(z)) == cdouble(3.0, -4.0));
  const Complex<DoubleDouble> w(cdouble(1.0, 2.0));
  const cdouble p = to_cdouble(w * w);
  CHECK(p.real() == doctest::Approx(-3.0));
  CHECK(p.imag() == doctest::Approx(4.0));
}

TEST_CASE("dual numbers differentiate rational expressions") {
  const Dual<double> x(2.0, 1.0);
  const Dual<double> f = x * x * x / (x + Dual<double>(1.0));  // x^3 / (x + 1)
  CHECK(f.v == doctest::Approx(8.0 / 3.0));
  // (3x^2 (x+1) - x^3) / (x+1)^2 at 2: (36 - 8) / 9
  CHECK(f.d == doctest::Approx(28.0 / 9.0));
}
