#pragma once

#include <array>

#include "rpr/model.hpp"
#include "rpr/polysys.hpp"

namespace rpr {

/// A planar point whose coordinates are polynomials.
using PolyPoint = std::array<Polynomial, 2>;

/// Determinant of the three leg Pluecker columns (b - a, a_x b_y - a_y b_x) with a = k'_i, b = k'_{i+3}.
Polynomial singularity_polynomial(const std::array<PolyPoint, 6>& k);
/// det [[1,1,1],[x1,x2,x3],[y1,y2,y3]]; zero iff the three points are collinear.
Polynomial collinearity(const std::array<PolyPoint, 3>& p);
/// |k5 - k4|^2 - x5^2 (the rigid platform distance condition).
Polynomial platform_constraint(const PolyPoint& k4, const PolyPoint& k5, const Polynomial& x5);
/// Sixth anchor as a function of k4, k5 with u5 = 1/x5 (orientation-preserving placement of p6).
PolyPoint point_based_k6(const PolyPoint& k4, const PolyPoint& k5, const Polynomial& x6, const Polynomial& y6,
                         const Polynomial& u5);

double singularity_value(const ConfigurationVector& K);
double collinearity_value(const Point& a, const Point& b, const Point& c);
double platform_constraint_value(const Point& k4, const Point& k5, double x5);
Point point_based_k6(const Point& k4, const Point& k5, const ManipulatorDesign& d);

}  // namespace rpr
