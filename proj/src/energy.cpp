#include "rpr/energy.hpp"

#include <cmath>
#include <stdexcept>

#include <Eigen/Dense>

namespace rpr {

EnergyLayout energy_layout(Interpretation interp) {
  EnergyLayout L;
  L.bars = {3, 4, 5};
  if (interp.platform == Kind::bar) L.bars.insert(L.bars.end(), {6, 7, 8});
  if (interp.base == Kind::bar) L.bars.insert(L.bars.end(), {0, 1, 2});
  L.plate_platform = interp.platform == Kind::plate;
  L.plate_base = interp.base == Kind::plate;
  const bool dp = interp.platform != Kind::rigid, db = interp.base != Kind::rigid;
  L.omega = dp ? (db ? IndexSet::I4 : IndexSet::I2) : (db ? IndexSet::I3 : IndexSet::I1);
  return L;
}

double bar_energy(double l, double l_def_sq, const EnergyConventions& ec) {
  if (!(l > 0.0)) throw std::invalid_argument("bar_energy: undeformed length must be positive");
  const double d = l_def_sq - l * l;
  return ec.E * ec.A * d * d / (8.0 * l * l * l);
}

double triangle_volume(const Triangle& t, const EnergyConventions& ec) {
  return ec.A * (distance(t[0], t[1]) + distance(t[0], t[2]) + distance(t[1], t[2]));
}

double plate_energy(const Triangle& tri, const Triangle& tri_def, const EnergyConventions& ec) {
  Eigen::Matrix2d B, Bd;
  B << tri[1].x - tri[0].x, tri[2].x - tri[0].x, tri[1].y - tri[0].y, tri[2].y - tri[0].y;
  Bd << tri_def[1].x - tri_def[0].x, tri_def[2].x - tri_def[0].x, tri_def[1].y - tri_def[0].y,
      tri_def[2].y - tri_def[0].y;
  const double det = B.determinant();
  const double scale = B.cwiseAbs().maxCoeff();
  if (!(std::abs(det) > 1e-14 * scale * scale)) throw std::invalid_argument("plate_energy: degenerate triangle");
  const Eigen::Matrix2d F = Bd * B.inverse();
  const Eigen::Matrix2d eps = 0.5 * (F.transpose() * F - Eigen::Matrix2d::Identity());
  const Eigen::Vector3d q(eps(0, 0), eps(1, 1), 2.0 * eps(0, 1));
  Eigen::Matrix3d S;
  S << 4, 2, 0, 2, 4, 0, 0, 0, 1;
  S /= 6.0;
  return ec.E * triangle_volume(tri, ec) * q.dot(S * q);
}

double omega(const ConfigurationVector& K, IndexSet s, const EnergyConventions& ec) {
  const InnerMetric L = inner_metric(K);
  double sum = 0.0;
  for (int b : bars_of(s)) sum += L[b];
  return ec.A * sum;
}

Triangle base_triangle(const ConfigurationVector& K) { return {K.k[0], K.k[1], K.k[2]}; }
Triangle platform_triangle(const ConfigurationVector& K) { return {K.k[3], K.k[4], K.k[5]}; }

double density(Interpretation interp, const ConfigurationVector& K, const ConfigurationVector& Kd,
               const EnergyConventions& ec) {
  const EnergyLayout lay = energy_layout(interp);
  const InnerMetric L = inner_metric(K);
  double U = 0.0;
  for (int b : lay.bars) {
    const Point p = Kd.k[kBars[b].first], q = Kd.k[kBars[b].second];
    const double dsq = (p.x - q.x) * (p.x - q.x) + (p.y - q.y) * (p.y - q.y);
    U += bar_energy(L[b], dsq, ec);
  }
  if (lay.plate_base) U += plate_energy(base_triangle(K), base_triangle(Kd), ec);
  if (lay.plate_platform) U += plate_energy(platform_triangle(K), platform_triangle(Kd), ec);
  return U / omega(K, lay.omega, ec);
}

Polynomial bar_energy_poly(const Polynomial& lsq_def, const Polynomial& w, const Polynomial& s) {
  const Polynomial d = lsq_def - s;
  return w * (d * d);
}

Polynomial plate_energy_poly(const std::array<Polynomial, 4>& e, const std::array<Polynomial, 3>& P,
                             const Polynomial& v) {
  // e = (u_x, u_y, w_x, w_y): the two deformed edge vectors from the first vertex.
  const Polynomial g11 = e[0] * e[0] + e[1] * e[1];
  const Polynomial g12 = e[0] * e[2] + e[1] * e[3];
  const Polynomial g22 = e[2] * e[2] + e[3] * e[3];
  const Polynomial& p11 = P[0];
  const Polynomial& p12 = P[1];
  const Polynomial& p22 = P[2];
  const Polynomial a = g11 * p11 + g12 * p12;
  const Polynomial b = g11 * p12 + g12 * p22;
  const Polynomial c = g12 * p11 + g22 * p12;
  const Polynomial d = g12 * p12 + g22 * p22;
  const Polynomial t = a + d;
  Polynomial inner = t * t - 6.0 * t + a * a + 2.0 * (b * c) + d * d;
  inner = inner + 6.0;
  return (v * inner) * (1.0 / 12.0);
}

}  // namespace rpr
