#pragma once

#include <array>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "rpr/energy.hpp"
#include "rpr/lagrangian.hpp"
#include "rpr/model.hpp"

namespace rpr {

/// Minimum plate energy of a triangle squeezed onto a line: Vol / 8.
double plate_collapse_energy(const Triangle& tri, const EnergyConventions& ec = {});

struct CollapseResult {
  double energy = 0.0;
  double cj = 0.0, ck = 0.0;  // collapsed placement (0, cj, ck) on the x-axis
  int real_critical = 0;      // real critical points among the nine
};

/// Minimum three-bar energy over collinear placements with p_i at the origin. Both gradient
/// equations factor into a line through the origin and a central conic, so the nine critical
/// points come from linear and quadratic eliminations.
CollapseResult triangle_collapse_min(const Triangle& tri, const EnergyConventions& ec = {});

/// Three-bar energy of the collinear placement (0, cj, ck).
double collapse_energy(const Triangle& tri, double cj, double ck, const EnergyConventions& ec = {});

/// Lower-bound names, one per gated follow-up stratum.
enum class BoundKind { coll_platform, coll_base, sing_v, point_platform, point_base };
inline constexpr std::array<BoundKind, 5> kBoundKinds{BoundKind::coll_platform, BoundKind::coll_base,
                                                     BoundKind::sing_v, BoundKind::point_platform,
                                                     BoundKind::point_base};
std::string bound_name(BoundKind b);

struct BoundReport {
  std::map<BoundKind, double> values;  // only the bounds that apply to the interpretation
  std::optional<double> get(BoundKind b) const;
};

BoundReport lower_bounds(Interpretation interp, const ConfigurationVector& K, const EnergyConventions& ec = {});

/// Follow-up stratum guarded by a bound.
Stratum gated_stratum(BoundKind b);
Side gated_side(BoundKind b);

/// A follow-up is required iff its bound lies below the best distance so far.
std::set<BoundKind> gate(double best_distance, const BoundReport& report);

}  // namespace rpr
