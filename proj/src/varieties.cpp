#include "rpr/varieties.hpp"

#include <stdexcept>

namespace rpr {

namespace {

template <class T>
T det3(const std::array<std::array<T, 3>, 3>& m) {
  return m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1]) - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0]) +
         m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0]);
}

}  // namespace

Polynomial singularity_polynomial(const std::array<PolyPoint, 6>& k) {
  std::array<std::array<Polynomial, 3>, 3> m;
  for (int i = 0; i < 3; ++i) {
    const PolyPoint& a = k[i];
    const PolyPoint& b = k[i + 3];
    m[0][i] = b[0] - a[0];
    m[1][i] = b[1] - a[1];
    m[2][i] = a[0] * b[1] - a[1] * b[0];
  }
  return det3(m);
}

Polynomial collinearity(const std::array<PolyPoint, 3>& p) {
  // Expanded along the row of ones.
  return (p[1][0] * p[2][1] - p[2][0] * p[1][1]) - (p[0][0] * p[2][1] - p[2][0] * p[0][1]) +
         (p[0][0] * p[1][1] - p[1][0] * p[0][1]);
}

Polynomial platform_constraint(const PolyPoint& k4, const PolyPoint& k5, const Polynomial& x5) {
  const Polynomial dx = k5[0] - k4[0], dy = k5[1] - k4[1];
  return dx * dx + dy * dy - x5 * x5;
}

PolyPoint point_based_k6(const PolyPoint& k4, const PolyPoint& k5, const Polynomial& x6, const Polynomial& y6,
                         const Polynomial& u5) {
  const Polynomial dc = k5[0] - k4[0], dd = k5[1] - k4[1];
  return {k4[0] + u5 * (dc * x6 - dd * y6), k4[1] + u5 * (dd * x6 + dc * y6)};
}

double singularity_value(const ConfigurationVector& K) {
  std::array<std::array<double, 3>, 3> m{};
  for (int i = 0; i < 3; ++i) {
    const Point a = K.k[i], b = K.k[i + 3];
    m[0][i] = b.x - a.x;
    m[1][i] = b.y - a.y;
    m[2][i] = a.x * b.y - a.y * b.x;
  }
  return det3(m);
}

double collinearity_value(const Point& a, const Point& b, const Point& c) {
  return (b.x * c.y - c.x * b.y) - (a.x * c.y - c.x * a.y) + (a.x * b.y - b.x * a.y);
}

double platform_constraint_value(const Point& k4, const Point& k5, double x5) {
  const double dx = k5.x - k4.x, dy = k5.y - k4.y;
  return dx * dx + dy * dy - x5 * x5;
}

Point point_based_k6(const Point& k4, const Point& k5, const ManipulatorDesign& d) {
  if (d.x5 == 0.0) throw std::invalid_argument("point_based_k6: x5 must be nonzero");
  const double dc = k5.x - k4.x, dd = k5.y - k4.y;
  return {k4.x + (dc * d.x6 - dd * d.y6) / d.x5, k4.y + (dd * d.x6 + dc * d.y6) / d.x5};
}

}  // namespace rpr
