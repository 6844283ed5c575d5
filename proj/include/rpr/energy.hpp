#pragma once

#include <array>
#include <vector>

#include "rpr/model.hpp"
#include "rpr/polysys.hpp"

namespace rpr {

/// Cross-section A and Young modulus E; both 1 in shipped computations.
struct EnergyConventions {
  double A = 1.0;
  double E = 1.0;
};

using Triangle = std::array<Point, 3>;

/// Which bars and plates enter the energy of an interpretation, and its normalizer.
struct EnergyLayout {
  std::vector<int> bars;  // positions in kBars
  bool plate_base = false;
  bool plate_platform = false;
  IndexSet omega = IndexSet::I1;
};

EnergyLayout energy_layout(Interpretation interp);

/// Green-Lagrange bar energy E A (l'^2 - l^2)^2 / (8 l^3).
double bar_energy(double l, double l_def_sq, const EnergyConventions& ec = {});
/// Green-Lagrange plate energy E Vol q^T S q via the affine map of the edge vectors.
double plate_energy(const Triangle& tri, const Triangle& tri_def, const EnergyConventions& ec = {});
double triangle_volume(const Triangle& tri, const EnergyConventions& ec = {});
double omega(const ConfigurationVector& K, IndexSet s, const EnergyConventions& ec = {});
/// Strain-energy density of K' relative to K under an interpretation.
double density(Interpretation interp, const ConfigurationVector& K, const ConfigurationVector& Kdef,
               const EnergyConventions& ec = {});

Triangle base_triangle(const ConfigurationVector& K);
Triangle platform_triangle(const ConfigurationVector& K);

/// w (lsq - s)^2 with w = 1/(8 l^3 Omega) and s = l^2 supplied as polynomials (usually parameters).
Polynomial bar_energy_poly(const Polynomial& lsq_def, const Polynomial& w, const Polynomial& s);

/// Plate energy through edge Gram matrices: (v/12) [t^2 - 6 t + 6 + tr((G'P)^2)] with t = tr(G'P),
/// G' the Gram matrix of the deformed edges and P the inverse Gram matrix of the undeformed ones.
Polynomial plate_energy_poly(const std::array<Polynomial, 4>& def_edges, const std::array<Polynomial, 3>& P,
                             const Polynomial& v);

}  // namespace rpr
