#include "rpr/bounds.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace rpr {

namespace {

void check_triangle(const Triangle& t) {
  const double s = std::max({distance(t[0], t[1]), distance(t[0], t[2]), distance(t[1], t[2])});
  const double area2 = (t[1].x - t[0].x) * (t[2].y - t[0].y) - (t[1].y - t[0].y) * (t[2].x - t[0].x);
  if (!(s > 0.0) || std::abs(area2) <= 1e-12 * s * s) throw std::invalid_argument("degenerate triangle");
}

// Real roots of a t^2 + b t + c (a may vanish).
std::vector<double> quadratic_roots(double a, double b, double c) {
  const double scale = std::max({std::abs(a), std::abs(b), std::abs(c)});
  if (std::abs(a) <= 1e-14 * scale) {
    if (std::abs(b) <= 1e-14 * scale) return {};
    return {-c / b};
  }
  const double disc = b * b - 4.0 * a * c;
  if (disc < 0.0) return {};
  const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
  if (q == 0.0) return {0.0};
  return {q / a, c / q};
}

}  // namespace

double plate_collapse_energy(const Triangle& tri, const EnergyConventions& ec) {
  check_triangle(tri);
  return ec.E * triangle_volume(tri, ec) / 8.0;
}

double collapse_energy(const Triangle& tri, double cj, double ck, const EnergyConventions& ec) {
  const double a = distance(tri[0], tri[1]), b = distance(tri[0], tri[2]), c = distance(tri[1], tri[2]);
  const double u = ck - cj;
  return bar_energy(a, cj * cj, ec) + bar_energy(b, ck * ck, ec) + bar_energy(c, u * u, ec);
}

CollapseResult triangle_collapse_min(const Triangle& tri, const EnergyConventions& ec) {
  check_triangle(tri);
  const double a = distance(tri[0], tri[1]), b = distance(tri[0], tri[2]), c = distance(tri[1], tri[2]);
  // dU/dcj ~ (a x - a y + c x) * Q1,  dU/dck ~ (b x - b y - c y) * Q2  with x = cj, y = ck and
  // Q1 = a^2 (x-y)^2 - a c x^2 + a c x y + c^2 x^2 - a^2 c^2
  // Q2 = b^2 (x-y)^2 + b c x y - b c y^2 + c^2 y^2 - b^2 c^2
  // Line 1: y = x (a + c) / a.  Line 2: x = y (b + c) / b.
  struct Quad {
    double xx, xy, yy, k;  // xx x^2 + xy x y + yy y^2 - k
  };
  const Quad q1{a * a - a * c + c * c, -2.0 * a * a + a * c, a * a, a * a * c * c};
  const Quad q2{b * b, -2.0 * b * b + b * c, b * b - b * c + c * c, b * b * c * c};
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);  // both lines
  // point on a ray (x, y) = t (p, q) with quadratic form value k
  auto on_ray = [&](const Quad& Q, double p, double q) {
    const double f = Q.xx * p * p + Q.xy * p * q + Q.yy * q * q;
    if (f == 0.0 || Q.k / f < 0.0) return;
    const double t = std::sqrt(Q.k / f);
    pts.emplace_back(t * p, t * q);
    pts.emplace_back(-t * p, -t * q);
  };
  on_ray(q2, 1.0, (a + c) / a);  // line 1 with conic 2
  on_ray(q1, (b + c) / b, 1.0);  // line 2 with conic 1
  // conic 1 with conic 2: b^2 c^2 Q1 - a^2 c^2 Q2 vanishes on a pair of lines through the origin
  const double w1 = q2.k, w2 = q1.k;
  const double A = w1 * q1.xx - w2 * q2.xx, B = w1 * q1.xy - w2 * q2.xy, C = w1 * q1.yy - w2 * q2.yy;
  // A x^2 + B x y + C y^2 = 0: slopes y = m x, or the x = 0 ray
  for (double m : quadratic_roots(C, B, A)) on_ray(q1, 1.0, m);
  if (std::abs(C) <= 1e-14 * std::max({std::abs(A), std::abs(B), std::abs(C)})) on_ray(q1, 0.0, 1.0);

  CollapseResult best;
  best.energy = std::numeric_limits<double>::infinity();
  best.real_critical = static_cast<int>(pts.size());
  for (const auto& [x, y] : pts) {
    const double e = collapse_energy(tri, x, y, ec);
    if (e < best.energy) {
      best.energy = e;
      best.cj = x;
      best.ck = y;
    }
  }
  return best;
}

std::string bound_name(BoundKind b) {
  switch (b) {
    case BoundKind::coll_platform:
      return "coll_platform";
    case BoundKind::coll_base:
      return "coll_base";
    case BoundKind::sing_v:
      return "sing_v";
    case BoundKind::point_platform:
      return "point_platform";
    case BoundKind::point_base:
      return "point_base";
  }
  return "?";
}

std::optional<double> BoundReport::get(BoundKind b) const {
  const auto it = values.find(b);
  if (it == values.end()) return std::nullopt;
  return it->second;
}

BoundReport lower_bounds(Interpretation interp, const ConfigurationVector& K, const EnergyConventions& ec) {
  BoundReport r;
  const bool dP = interp.platform != Kind::rigid, dB = interp.base != Kind::rigid;
  const Triangle P = platform_triangle(K), B = base_triangle(K);
  const double om = omega(K, energy_layout(interp).omega, ec);
  auto collapse = [&](Kind k, const Triangle& t) {
    return k == Kind::plate ? plate_collapse_energy(t, ec) : triangle_collapse_min(t, ec).energy;
  };
  auto perimeter_bound = [&](const Triangle& t) {
    // every bar shrunk to zero length costs E A l / 8
    return ec.E * ec.A * (distance(t[0], t[1]) + distance(t[0], t[2]) + distance(t[1], t[2])) / 8.0 / om;
  };
  if (interp.platform == Kind::bar) {
    r.values[BoundKind::coll_platform] = collapse(Kind::bar, P) / om;
    r.values[BoundKind::point_platform] = perimeter_bound(P);
  }
  if (interp.base == Kind::bar) {
    r.values[BoundKind::coll_base] = collapse(Kind::bar, B) / om;
    r.values[BoundKind::point_base] = perimeter_bound(B);
  }
  if (dP && dB) r.values[BoundKind::sing_v] = (collapse(interp.platform, P) + collapse(interp.base, B)) / om;
  return r;
}

Stratum gated_stratum(BoundKind b) {
  switch (b) {
    case BoundKind::coll_platform:
    case BoundKind::coll_base:
      return Stratum::regular_coll;
    case BoundKind::sing_v:
      return Stratum::singular_V;
    default:
      return Stratum::singular_coll;
  }
}

Side gated_side(BoundKind b) {
  switch (b) {
    case BoundKind::coll_platform:
    case BoundKind::point_platform:
      return Side::platform;
    case BoundKind::coll_base:
    case BoundKind::point_base:
      return Side::base;
    default:
      return Side::none;
  }
}

std::set<BoundKind> gate(double best_distance, const BoundReport& report) {
  std::set<BoundKind> out;
  for (const auto& [k, v] : report.values)
    if (v < best_distance) out.insert(k);
  return out;
}

}  // namespace rpr
