#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rpr/energy.hpp"
#include "rpr/pipeline.hpp"

namespace rpr::props {

struct PropertyResult {
  std::string name;
  bool ok = false;
  std::string detail;
};

PropertyResult density_zero_at_identity();
PropertyResult density_area_independence(uint64_t seed);
PropertyResult density_modulus_linearity(uint64_t seed);
PropertyResult inner_metric_rigid_invariance(uint64_t seed);
PropertyResult plate_energy_edge_dependence(uint64_t seed);
// The assembled systems are the gradients of their Lagrangians.
PropertyResult gradient_matches_finite_difference(uint64_t seed);
// Serial and parallel ab-initio runs with one seed give identical endpoint lists.
PropertyResult tracker_determinism(uint64_t seed);
PropertyResult realization_residual_zero();
// Every real critical point found at the given poses lies on its stratum's variety.
PropertyResult variety_equations(const RunConfig& cfg, GenericStore& store, const std::vector<Interpretation>& interps,
                                 const std::vector<double>& phis);

std::vector<PropertyResult> cheap_properties(uint64_t seed);

// Brute-force minimum of the three-bar energy over collinear placements (0, cj, ck):
// grid over [-2s, 2s]^2 with s the longest side, then zooming around the best cells.
double grid_collapse_min(const Triangle& tri);

// Random helpers shared by the tests.
ConfigurationVector random_configuration(uint64_t seed);
std::array<Point, 3> rigid_move(const std::array<Point, 3>& t, double angle, Point shift, bool reflect);

}  // namespace rpr::props
