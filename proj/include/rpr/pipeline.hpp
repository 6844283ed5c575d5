#pragma once

#include <iosfwd>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "rpr/config.hpp"
#include "rpr/postprocess.hpp"
#include "rpr/report.hpp"

namespace rpr {

/// Problems whose ab-initio runs end with path failures (both sides deformable with a
/// side condition); they run only with the experimental switch.
bool needs_experimental(const ProblemKind& kind);

/// Generic solution sets of one run, loaded from the cache or computed on first use.
class GenericStore {
 public:
  GenericStore(const RunConfig& cfg, std::ostream* log);
  /// Throws std::runtime_error for experimental problems when they are not enabled.
  const GenericSolutionSet& get(const AssembledProblem& P);
  std::vector<GenericRecord> records() const;

 private:
  const RunConfig& cfg_;
  std::ostream* log_;
  mutable std::mutex mu_;
  std::map<std::string, std::unique_ptr<GenericSolutionSet>> sets_;
  std::map<std::string, GenericRecord> records_;
};

struct StratumOutcome {
  std::string key;
  std::vector<CriticalPoint> points;  // sorted by density
  std::vector<CriticalPoint> minima;
  IdentificationResult id;
  int failures = 0;
  bool empty = false;
};

/// User homotopy, post-processing and identification for one assembled problem.
StratumOutcome run_stratum(const AssembledProblem& P, const GenericSolutionSet& G, const RunConfig& cfg,
                           const TrackerSettings& s);

/// One report row: regular-V distance, bounds, gated strata, winner.
ReportRow process_pose(Interpretation interp, int pose_index, double phi, const RunConfig& cfg, GenericStore& store);

/// Generic sets needed by an interpretation at this design, including the gated strata.
std::vector<AssembledProblem> applicable_problems(Interpretation interp, const ConfigurationVector& K);

DistanceReport run_pipeline(const RunConfig& cfg, std::ostream* log = nullptr);

/// Computes (or loads) every non-experimental generic set of the configured interpretations.
std::vector<GenericRecord> run_ab_initio(const RunConfig& cfg, std::ostream* log = nullptr);

}  // namespace rpr
