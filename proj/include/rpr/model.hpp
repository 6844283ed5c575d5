#pragma once

#include <array>
#include <string>
#include <utility>
#include <vector>

namespace rpr {

/// Material reading of the platform or the base.
enum class Kind { plate, bar, rigid };

/// Platform kind and base kind; one of nine combinations.
struct Interpretation {
  Kind platform = Kind::rigid;
  Kind base = Kind::rigid;
  bool operator==(const Interpretation&) const = default;
};

Interpretation invert_interpretation(Interpretation i);
std::string kind_name(Kind k);
Kind parse_kind(const std::string& s);
/// "platform/base", e.g. "bar/rigid".
std::string interpretation_name(Interpretation i);
Interpretation parse_interpretation(const std::string& s);
/// All nine interpretations in a fixed report order.
std::vector<Interpretation> all_interpretations();
/// Index of i in all_interpretations().
int interpretation_rank(Interpretation i);

struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Base shape (x2; x3, y3) and platform shape (x5; x6, y6) in their local frames.
struct ManipulatorDesign {
  double x2 = 0, x3 = 0, y3 = 0;
  double x5 = 0, x6 = 0, y6 = 0;
  void validate() const;  // throws std::invalid_argument
  std::array<Point, 3> platform_local() const { return {Point{0, 0}, Point{x5, 0}, Point{x6, y6}}; }
  std::array<Point, 3> base() const { return {Point{0, 0}, Point{x2, 0}, Point{x3, y3}}; }
};

/// One term coef * cos(phi)^a * sin(phi)^b * phi^c of a translation component.
struct MotionTerm {
  double coef = 0;
  int cos_pow = 0, sin_pow = 0, phi_pow = 0;
};

/// Rotation angle theta = scale*phi + offset; translation given by term tables.
struct MotionSpec {
  double rot_scale = 1.0;
  double rot_offset = 0.0;
  std::vector<MotionTerm> tx;
  std::vector<MotionTerm> ty;
  double u = 0.0;
  double v = 0.0;

  /// The worked-example motion: R(phi), t = ((11 - 6 sin phi)/2, (3 - 3 cos phi)/2) on [0, 2 pi].
  static MotionSpec example56();
  std::array<double, 4> rotation(double phi) const;  // row-major 2x2
  Point translation(double phi) const;
};

/// Six anchor points k_1..k_6 in the fixed frame (index 0..5).
struct ConfigurationVector {
  std::array<Point, 6> k{};
  double c(int i) const { return k[i - 1].x; }  // 1-based accessors
  double d(int i) const { return k[i - 1].y; }
  std::array<double, 12> flat() const;  // c1, d1, ..., c6, d6
  static ConfigurationVector from_flat(const std::array<double, 12>& f);
};

/// Nine undeformed bar lengths in canonical bar order.
using InnerMetric = std::array<double, 9>;

/// Canonical bar list (zero-based point indices):
/// 12, 23, 13, 14, 25, 36, 45, 56, 46.
inline constexpr std::array<std::pair<int, int>, 9> kBars{{{0, 1}, {1, 2}, {0, 2}, {0, 3}, {1, 4}, {2, 5}, {3, 4},
                                                          {4, 5}, {3, 5}}};

enum class IndexSet { I1, I2, I3, I4, I5, I6 };
/// Bar positions (into kBars) belonging to an index set.
const std::vector<int>& bars_of(IndexSet s);

ManipulatorDesign example_design();

ConfigurationVector anchor_positions(const ManipulatorDesign& d, const MotionSpec& m, double phi);
std::vector<double> discretize_motion(const MotionSpec& m, int n, const std::vector<double>& extra = {});
InnerMetric inner_metric(const ConfigurationVector& K);

/// Rigid motion putting k1 at the origin and k2 on the positive x-axis.
ConfigurationVector normalize(const ConfigurationVector& K);
/// Swap labels i <-> i+3 and renormalize (inverse motion of the manipulator).
ConfigurationVector invert_configuration(const ConfigurationVector& K);
/// Base/platform shape read off a configuration.
ManipulatorDesign design_of(const ConfigurationVector& K);

double distance(Point a, Point b);

}  // namespace rpr
