#include "rpr/model.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rpr {

Interpretation invert_interpretation(Interpretation i) { return {i.base, i.platform}; }

std::string kind_name(Kind k) {
  switch (k) {
    case Kind::plate:
      return "plate";
    case Kind::bar:
      return "bar";
    case Kind::rigid:
      return "rigid";
  }
  return "?";
}

Kind parse_kind(const std::string& s) {
  if (s == "plate") return Kind::plate;
  if (s == "bar") return Kind::bar;
  if (s == "rigid") return Kind::rigid;
  throw std::invalid_argument("unknown kind: " + s);
}

std::string interpretation_name(Interpretation i) { return kind_name(i.platform) + "/" + kind_name(i.base); }

Interpretation parse_interpretation(const std::string& s) {
  const auto slash = s.find('/');
  if (slash == std::string::npos) throw std::invalid_argument("interpretation must read platform/base: " + s);
  return {parse_kind(s.substr(0, slash)), parse_kind(s.substr(slash + 1))};
}

std::vector<Interpretation> all_interpretations() {
  std::vector<Interpretation> out;
  for (Kind p : {Kind::rigid, Kind::plate, Kind::bar})
    for (Kind b : {Kind::rigid, Kind::plate, Kind::bar}) out.push_back({p, b});
  return out;
}

int interpretation_rank(Interpretation i) {
  const auto all = all_interpretations();
  return static_cast<int>(std::find(all.begin(), all.end(), i) - all.begin());
}

void ManipulatorDesign::validate() const {
  if (!(x2 > 0.0)) throw std::invalid_argument("design: x2 must be positive");
  if (!(x5 > 0.0)) throw std::invalid_argument("design: x5 must be positive");
  if (y3 == 0.0) throw std::invalid_argument("design: collinear base (y3 = 0) is not supported");
  if (y6 == 0.0) throw std::invalid_argument("design: collinear platform (y6 = 0) is not supported");
  for (double v : {x2, x3, y3, x5, x6, y6})
    if (!std::isfinite(v)) throw std::invalid_argument("design: non-finite parameter");
}

MotionSpec MotionSpec::example56() {
  MotionSpec m;
  m.tx = {{5.5, 0, 0, 0}, {-3.0, 0, 1, 0}};
  m.ty = {{1.5, 0, 0, 0}, {-1.5, 1, 0, 0}};
  m.u = 0.0;
  m.v = 2.0 * std::numbers::pi;
  return m;
}

std::array<double, 4> MotionSpec::rotation(double phi) const {
  const double th = rot_scale * phi + rot_offset;
  const double c = std::cos(th), s = std::sin(th);
  return {c, -s, s, c};
}

namespace {
double eval_terms(const std::vector<MotionTerm>& ts, double phi) {
  const double c = std::cos(phi), s = std::sin(phi);
  double sum = 0.0;
  for (const auto& t : ts) sum += t.coef * std::pow(c, t.cos_pow) * std::pow(s, t.sin_pow) * std::pow(phi, t.phi_pow);
  return sum;
}
}  // namespace

Point MotionSpec::translation(double phi) const { return {eval_terms(tx, phi), eval_terms(ty, phi)}; }

std::array<double, 12> ConfigurationVector::flat() const {
  std::array<double, 12> f{};
  for (int i = 0; i < 6; ++i) {
    f[2 * i] = k[i].x;
    f[2 * i + 1] = k[i].y;
  }
  return f;
}

ConfigurationVector ConfigurationVector::from_flat(const std::array<double, 12>& f) {
  ConfigurationVector K;
  for (int i = 0; i < 6; ++i) K.k[i] = {f[2 * i], f[2 * i + 1]};
  return K;
}

const std::vector<int>& bars_of(IndexSet s) {
  static const std::vector<int> i1{3, 4, 5};
  static const std::vector<int> i2{3, 4, 5, 6, 7, 8};
  static const std::vector<int> i3{3, 4, 5, 0, 1, 2};
  static const std::vector<int> i4{0, 1, 2, 3, 4, 5, 6, 7, 8};
  static const std::vector<int> i5{6, 7, 8};
  static const std::vector<int> i6{0, 1, 2};
  switch (s) {
    case IndexSet::I1:
      return i1;
    case IndexSet::I2:
      return i2;
    case IndexSet::I3:
      return i3;
    case IndexSet::I4:
      return i4;
    case IndexSet::I5:
      return i5;
    case IndexSet::I6:
      return i6;
  }
  return i4;
}

ManipulatorDesign example_design() { return {11.0, 5.0, 7.0, 3.0, 1.0, 2.0}; }

ConfigurationVector anchor_positions(const ManipulatorDesign& d, const MotionSpec& m, double phi) {
  ConfigurationVector K;
  const auto base = d.base();
  const auto plat = d.platform_local();
  const auto R = m.rotation(phi);
  const Point t = m.translation(phi);
  for (int i = 0; i < 3; ++i) {
    K.k[i] = base[i];
    K.k[i + 3] = {R[0] * plat[i].x + R[1] * plat[i].y + t.x, R[2] * plat[i].x + R[3] * plat[i].y + t.y};
  }
  return K;
}

std::vector<double> discretize_motion(const MotionSpec& m, int n, const std::vector<double>& extra) {
  if (n < 2) throw std::invalid_argument("discretize_motion: n must be at least 2");
  std::vector<double> out;
  out.reserve(n + extra.size());
  for (int k = 0; k < n; ++k) out.push_back(k == n - 1 ? m.v : m.u + k * (m.v - m.u) / (n - 1));
  out.insert(out.end(), extra.begin(), extra.end());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(), [](double a, double b) { return std::abs(a - b) <= 1e-12; }),
            out.end());
  return out;
}

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

InnerMetric inner_metric(const ConfigurationVector& K) {
  InnerMetric L{};
  for (int b = 0; b < 9; ++b) L[b] = distance(K.k[kBars[b].first], K.k[kBars[b].second]);
  return L;
}

ConfigurationVector normalize(const ConfigurationVector& K) {
  const Point o = K.k[0];
  double dx = K.k[1].x - o.x, dy = K.k[1].y - o.y;
  const double r = std::hypot(dx, dy);
  double c = 1.0, s = 0.0;
  if (r > 0.0) {
    c = dx / r;
    s = dy / r;
  }
  ConfigurationVector out;
  for (int i = 0; i < 6; ++i) {
    const double px = K.k[i].x - o.x, py = K.k[i].y - o.y;
    out.k[i] = {c * px + s * py, -s * px + c * py};
  }
  out.k[0] = {0.0, 0.0};
  out.k[1].y = 0.0;
  return out;
}

ConfigurationVector invert_configuration(const ConfigurationVector& K) {
  ConfigurationVector sw;
  for (int i = 0; i < 3; ++i) {
    sw.k[i] = K.k[i + 3];
    sw.k[i + 3] = K.k[i];
  }
  return normalize(sw);
}

ManipulatorDesign design_of(const ConfigurationVector& K) {
  const ConfigurationVector n = normalize(K);
  ManipulatorDesign d;
  d.x2 = n.k[1].x;
  d.x3 = n.k[2].x;
  d.y3 = n.k[2].y;
  ConfigurationVector sw;
  for (int i = 0; i < 3; ++i) sw.k[i] = K.k[i + 3];
  const ConfigurationVector p = normalize(sw);
  d.x5 = p.k[1].x;
  d.x6 = p.k[2].x;
  d.y6 = p.k[2].y;
  return d;
}

}  // namespace rpr
