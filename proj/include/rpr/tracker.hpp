#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "rpr/homotopy.hpp"
#include "rpr/lagrangian.hpp"

namespace rpr {

enum class Precision { double_precision, double_double };
enum class StartStrategy { automatic, total_degree, multihomogeneous };
enum class PathStatus { converged, diverged, step_failure };

std::string status_name(PathStatus s);

struct TrackerSettings {
  double tol = 1e-8;           // corrector tolerance while tracking
  double newton_tol = 1e-11;   // refinement at h = 0
  int max_steps = 20000;
  double min_step = 1e-14;
  double max_step = 0.05;
  double initial_step = 0.01;
  double endgame_h = 0.1;
  double endgame_min_h = 1e-13;
  double diverge_norm = 1e8;
  double finite_norm = 1e6;
  double residual_tol = 1e-8;  // backward error of an accepted endpoint
  uint64_t seed = 20240607;
  Precision precision = Precision::double_precision;
  bool parallel = true;
  int retries = 2;
  bool escalate = true;  // retry leftover step failures of a double run in double-double

  void validate() const;  // throws std::invalid_argument
  TrackerSettings tightened(int level) const;
};

struct PathResult {
  std::vector<cdouble> endpoint;
  PathStatus status = PathStatus::step_failure;
  double residual = std::numeric_limits<double>::infinity();
  int steps = 0;
  int start_index = -1;
  int cycle = 1;
  double rcond = 0.0;  // pivot-spread estimate of the target Jacobian at the endpoint
  double norm = 0.0;
  bool finite(const TrackerSettings& s) const {
    return status == PathStatus::converged && norm < s.finite_norm && residual < s.residual_tol;
  }
};

struct GenericSolutionSet {
  std::string key;
  std::string fingerprint;
  uint64_t seed = 0;
  GenericConfiguration KC{};
  Primitives primitives{};
  std::vector<std::vector<cdouble>> endpoints;
  long long paths = 0;
  int failures = 0;
  int diverged = 0;
  int real_count(double imag_tol = 1e-8) const;
};

template <class R>
PathResult track_path(Homotopy<R>& H, const std::vector<cdouble>& start, const TrackerSettings& s);

/// Tracks many starts, serially or with OpenMP (one homotopy clone per thread).
template <class R>
std::vector<PathResult> track_all(const Homotopy<R>& H, const std::vector<std::vector<cdouble>>& starts,
                                  const TrackerSettings& s);

std::string problem_fingerprint(const AssembledProblem& P);

/// Canonical order (all real parts, then all imaginary parts) and removal of points
/// closer than tol (infinity norm, relative to 1 + norm).
std::vector<std::vector<cdouble>> dedup(std::vector<std::vector<cdouble>> pts, double tol = 1e-6);

struct AbInitioStats {
  long long start_count = 0;
  int retracked = 0;
  double seconds = 0.0;
  std::vector<PathResult> failed;  // final results of paths counted as failures
};

GenericSolutionSet ab_initio(const AssembledProblem& problem, StartStrategy strategy, const TrackerSettings& s,
                             AbInitioStats* stats = nullptr);

/// Parameter homotopy from the generic instance (h = 1) to the pose problem (h = 0).
std::vector<PathResult> track_user_homotopy(const GenericSolutionSet& generic, const AssembledProblem& target,
                                            const TrackerSettings& s);

/// Compiled gradient system of a problem template (cached by key).
std::shared_ptr<const CompiledSystem> compiled_system(const AssembledProblem& P);

}  // namespace rpr
