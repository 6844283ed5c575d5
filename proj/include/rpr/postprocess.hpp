#pragma once

#include <array>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "rpr/lagrangian.hpp"
#include "rpr/tracker.hpp"

namespace rpr {

enum class Classification { minimum, saddle, maximum, degenerate };
std::string classification_name(Classification c);

/// Keeps points whose largest imaginary part is below imag_tol and returns their real parts.
std::vector<std::vector<double>> filter_real(const std::vector<std::vector<cdouble>>& pts, double imag_tol);

struct HessianVerdict {
  Classification verdict = Classification::degenerate;
  Classification by_eigen = Classification::degenerate;   // projected Hessian eigenvalues
  Classification by_minors = Classification::degenerate;  // bordered Hessian minors
  std::vector<double> eigenvalues;
  double eps = 0.0;
};

/// Second-order test for a critical point with Hessian H (n x n) of the Lagrangian and
/// constraint gradients G (m x n, m = 0 for unconstrained problems). The eigenvalue test
/// runs on Z^T H Z with Z a basis of ker G; the minors test on [[0, G], [G^T, H]].
/// Disagreeing verdicts are reported as degenerate.
HessianVerdict classify_hessian(const Eigen::MatrixXd& H, const Eigen::MatrixXd& G);

struct CriticalPoint {
  std::string stratum;             // ProblemKind key
  std::vector<double> x;           // unknowns and multipliers
  std::array<double, 12> coords{};  // c1, d1, ..., c6, d6 in the solve frame
  double density = 0.0;
  double residual = 0.0;
  Classification cls = Classification::degenerate;
};

/// Classifies a real critical point of P at the pose stored in P.
HessianVerdict classify_critical(const std::vector<double>& x, const AssembledProblem& P);

/// Real finite endpoints of P turned into critical points, sorted by density then coordinates.
std::vector<CriticalPoint> critical_points(const AssembledProblem& P, const std::vector<PathResult>& paths,
                                           const TrackerSettings& s, double imag_tol);

/// Ascending density, ties broken lexicographically by coordinates.
void sort_candidates(std::vector<CriticalPoint>& pts);

/// Squared lengths ell(k'_i, k'_j)^2 = ell_ij^2 with c1 = d1 = d2 = 0. Unknowns: nine coordinates
/// (both sides deformable), c4..d6 (rigid base) or c4, d4, c5, d5 with the distance condition
/// (rigid both). `interp` is read in the solve frame.
PolynomialSystem realization_system(Interpretation interp, const InnerMetric& L, const ManipulatorDesign& design);

/// The unknowns of realization_system in configuration K (solve frame).
std::vector<cdouble> realization_unknowns(Interpretation interp, const ConfigurationVector& K);

struct IdentificationResult {
  bool matched = false;
  int selected = -1;  // index into the candidate list
  int consumed = 0;   // candidates examined
  std::array<cdouble, 12> tracked{};  // K'' of the selected (or last examined) candidate
  double match_distance = 0.0;         // (K'' - K')^H (K'' - K')
  std::vector<double> distances;       // per examined candidate; infinity when the path failed
};

/// Deforms the inner metric of P.frame_K into that of each candidate in order and tracks the
/// realization; the first candidate reached within delta wins.
IdentificationResult identify_closest(const std::vector<CriticalPoint>& candidates, const AssembledProblem& P,
                                      double delta, const TrackerSettings& s);

/// Tracks the realization K of `interp` (solve frame) while the metric moves to that of Kp.
std::vector<cdouble> track_realization(Interpretation interp, const ConfigurationVector& K,
                                       const ConfigurationVector& Kp, const TrackerSettings& s, PathStatus* status);

/// Coordinates back in the frame of the given pose (undoes the inverse-motion relabeling).
std::array<double, 12> to_pose_frame(const AssembledProblem& P, const std::array<double, 12>& coords);
/// Stratum key in the labels of the given pose (sides swapped for inverted problems).
std::string pose_frame_key(const AssembledProblem& P);

/// Scaled residual of the variety the stratum lives on (V, or C_B / C_P for the coll strata).
double variety_residual(const ProblemKind& kind, const std::array<double, 12>& coords);

}  // namespace rpr
