#include "rpr/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "rpr/cache.hpp"
#include "rpr/energy.hpp"

namespace rpr {

bool needs_experimental(const ProblemKind& kind) {
  const bool both = kind.interp.platform != Kind::rigid && kind.interp.base != Kind::rigid;
  return both && (kind.stratum == Stratum::regular_V || kind.stratum == Stratum::regular_coll);
}

GenericStore::GenericStore(const RunConfig& cfg, std::ostream* log) : cfg_(cfg), log_(log) {}

const GenericSolutionSet& GenericStore::get(const AssembledProblem& P) {
  const std::string key = P.kind.key();
  std::lock_guard<std::mutex> lock(mu_);
  auto& slot = sets_[key];
  if (slot) return *slot;
  if (needs_experimental(P.kind) && !cfg_.experimental)
    throw std::runtime_error(key + " has no failure-free ab-initio run; enable --experimental");
  const AssembledProblem& T = problem_template(P.kind);
  const std::string path = cache_path(cfg_.effective_cache_dir(), key);
  GenericRecord rec;
  rec.key = key;
  const auto t0 = std::chrono::steady_clock::now();
  auto cached = load_generic(path, T, cfg_.tracker.seed);
  if (cached) {
    slot = std::make_unique<GenericSolutionSet>(std::move(*cached));
    rec.from_cache = true;
  } else {
    if (log_) *log_ << "ab-initio " << key << " ..." << std::endl;
    slot = std::make_unique<GenericSolutionSet>(ab_initio(T, StartStrategy::automatic, cfg_.tracker));
    save_generic(*slot, T, path);
  }
  rec.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  rec.paths = slot->paths;
  rec.finite = static_cast<int>(slot->endpoints.size());
  rec.real = slot->real_count();
  rec.failures = slot->failures;
  records_[key] = rec;
  if (log_)
    *log_ << "generic " << key << ": " << rec.finite << " finite (" << rec.real << " real), " << rec.failures
          << " failures, " << rec.paths << " paths" << (rec.from_cache ? ", from cache" : "") << std::endl;
  return *slot;
}

std::vector<GenericRecord> GenericStore::records() const {
  std::lock_guard<std::mutex> lock(mu_);
  std::vector<GenericRecord> out;
  for (const auto& [k, r] : records_) out.push_back(r);
  return out;
}

StratumOutcome run_stratum(const AssembledProblem& P, const GenericSolutionSet& G, const RunConfig& cfg,
                           const TrackerSettings& s) {
  StratumOutcome o;
  o.key = P.kind.key();
  if (P.empty) {
    o.empty = true;
    return o;
  }
  const auto paths = track_user_homotopy(G, P, s);
  for (const auto& r : paths)
    if (r.status == PathStatus::step_failure) ++o.failures;
  o.points = critical_points(P, paths, s, cfg.imag_tol);
  for (const auto& c : o.points)
    if (c.cls == Classification::minimum) o.minima.push_back(c);
  o.id = identify_closest(o.minima, P, cfg.delta, s);
  return o;
}

std::vector<AssembledProblem> applicable_problems(Interpretation interp, const ConfigurationVector& K) {
  std::vector<AssembledProblem> out;
  out.push_back(build_regular_V(interp, K));
  const bool dP = interp.platform != Kind::rigid, dB = interp.base != Kind::rigid;
  for (Side side : {Side::platform, Side::base}) {
    const Kind k = side == Side::platform ? interp.platform : interp.base;
    if (k != Kind::bar) continue;
    out.push_back(build_regular_coll(side, interp, K));
    out.push_back(build_singular_coll(side, interp, K));
  }
  if (dP && dB) {
    out.push_back(build_singular_V(interp, K, 0));
  } else if (!dP && !dB) {
    for (int b : {1, -1}) out.push_back(build_singular_V(interp, K, b));
  } else {
    out.push_back(build_singular_V(interp, K, 0));
  }
  std::erase_if(out, [](const AssembledProblem& P) { return P.empty; });
  return out;
}

namespace {

void record_candidates(const StratumOutcome& o, const AssembledProblem& P, ReportRow& row) {
  int mi = 0;
  for (const auto& c : o.points) {
    CandidateRecord r;
    r.stratum = pose_frame_key(P);
    r.density = c.density;
    r.classification = classification_name(c.cls);
    r.coords = to_pose_frame(P, c.coords);
    if (c.cls != Classification::minimum) {
      r.verdict = "not a minimum";
    } else {
      if (mi < o.id.consumed) {
        r.match_distance = o.id.distances[mi];
        r.verdict = (o.id.matched && mi == o.id.selected) ? "matched" : "rejected";
      } else {
        r.verdict = "not examined";
      }
      ++mi;
    }
    row.candidates.push_back(std::move(r));
  }
  row.n_real += static_cast<int>(o.points.size());
  row.n_minima += static_cast<int>(o.minima.size());
  for (const auto& c : o.points) row.n_saddles += c.cls == Classification::saddle ? 1 : 0;
  row.path_failures += o.failures;
}

}  // namespace

ReportRow process_pose(Interpretation interp, int pose_index, double phi, const RunConfig& cfg, GenericStore& store) {
  const auto t0 = std::chrono::steady_clock::now();
  const TrackerSettings& s = cfg.tracker;
  const ConfigurationVector K = anchor_positions(cfg.design, cfg.motion, phi);
  ReportRow row;
  row.pose_index = pose_index;
  row.phi = phi;
  row.interpretation = interpretation_name(interp);
  row.pose = normalize(K).flat();

  double best = std::numeric_limits<double>::infinity();
  std::array<double, 12> winner{};
  std::string winner_key = "no_match";
  auto consider = [&](const AssembledProblem& P) {
    const StratumOutcome o = run_stratum(P, store.get(P), cfg, s);
    record_candidates(o, P, row);
    if (o.failures > 0) row.notes.push_back(std::to_string(o.failures) + " path failures in " + o.key);
    if (!o.id.matched) {
      if (!o.minima.empty()) row.notes.push_back("no minimum of " + o.key + " matched the realization");
      return;
    }
    const CriticalPoint& c = o.minima[o.id.selected];
    if (c.density < best) {
      best = c.density;
      winner = to_pose_frame(P, c.coords);
      winner_key = pose_frame_key(P);
    }
  };

  consider(build_regular_V(interp, K));

  const BoundReport bounds = lower_bounds(interp, K);
  row.bounds = bounds.values;
  // coll bounds against the regular-V distance, then the singular strata against the best so far
  const std::vector<std::vector<BoundKind>> stages = {
      {BoundKind::coll_platform, BoundKind::coll_base}, {BoundKind::sing_v},
      {BoundKind::point_platform, BoundKind::point_base}};
  for (const auto& stage : stages) {
    BoundReport part;
    for (BoundKind b : stage)
      if (auto v = bounds.get(b)) part.values[b] = *v;
    const std::set<BoundKind> fired = gate(best, part);
    for (BoundKind b : fired) {
      row.gates.push_back(bound_name(b));
      if (cfg.skip_gated) {
        row.notes.push_back("skipped gated stratum " + bound_name(b));
        continue;
      }
      AssembledProblem P;
      switch (gated_stratum(b)) {
        case Stratum::regular_coll:
          P = build_regular_coll(gated_side(b), interp, K);
          break;
        case Stratum::singular_coll:
          P = build_singular_coll(gated_side(b), interp, K);
          break;
        default:
          P = build_singular_V(interp, K, 0);
          break;
      }
      if (P.empty) {
        row.notes.push_back("stratum " + P.kind.key() + " is empty for this design");
        continue;
      }
      if (needs_experimental(P.kind) && !cfg.experimental) {
        row.notes.push_back("unavailable without --experimental: " + P.kind.key());
        continue;
      }
      consider(P);
    }
  }

  row.distance = std::isfinite(best) ? best : std::nan("");
  row.scaled_length = cfg.scale * std::sqrt(row.distance);
  row.winner_stratum = winner_key;
  row.coords = std::isfinite(best) ? winner : std::array<double, 12>{};
  if (!std::isfinite(best)) row.coords.fill(std::nan(""));
  if (cfg.timing)
    row.wall_ms = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  return row;
}

DistanceReport run_pipeline(const RunConfig& cfg_in, std::ostream* log) {
  cfg_in.validate();
  RunConfig cfg = cfg_in;
  std::vector<Interpretation> interps = cfg.interpretations;
  std::sort(interps.begin(), interps.end(),
            [](Interpretation a, Interpretation b) { return interpretation_rank(a) < interpretation_rank(b); });
  const std::vector<double> phis = discretize_motion(cfg.motion, cfg.poses, cfg.extra_poses);
  const ConfigurationVector K0 = anchor_positions(cfg.design, cfg.motion, phis.front());
  for (Interpretation i : interps) {
    const AssembledProblem P = build_regular_V(i, K0);
    if (needs_experimental(P.kind) && !cfg.experimental)
      throw std::invalid_argument(interpretation_name(i) + " needs --experimental (its ab-initio run has path failures)");
  }

  GenericStore store(cfg, log);
  for (Interpretation i : interps) store.get(build_regular_V(i, K0));

  // poses in parallel, each tracked serially
  RunConfig inner = cfg;
  inner.tracker.parallel = false;
  const int ni = static_cast<int>(interps.size()), np = static_cast<int>(phis.size());
  std::vector<ReportRow> rows(static_cast<size_t>(ni) * np);
  std::exception_ptr err;
  std::mutex err_mu;
#pragma omp parallel for schedule(dynamic) if (cfg.tracker.parallel)
  for (int idx = 0; idx < ni * np; ++idx) {
    const int p = idx / ni, i = idx % ni;
    try {
      rows[idx] = process_pose(interps[i], p, phis[p], inner, store);
      if (log) {
        std::lock_guard<std::mutex> lock(err_mu);
        *log << "pose " << p << " phi=" << phis[p] << " " << rows[idx].interpretation << " D=" << rows[idx].distance
             << std::endl;
      }
    } catch (...) {
      std::lock_guard<std::mutex> lock(err_mu);
      if (!err) err = std::current_exception();
    }
  }
  if (err) std::rethrow_exception(err);

  DistanceReport rep;
  rep.rows = std::move(rows);
  rep.generic = store.records();
  return rep;
}

std::vector<GenericRecord> run_ab_initio(const RunConfig& cfg, std::ostream* log) {
  cfg.validate();
  const ConfigurationVector K0 = anchor_positions(cfg.design, cfg.motion, cfg.motion.u);
  GenericStore store(cfg, log);
  for (Interpretation i : cfg.interpretations)
    for (const auto& P : applicable_problems(i, K0)) {
      if (needs_experimental(P.kind) && !cfg.experimental) {
        if (log) *log << "skipping " << P.kind.key() << " (needs --experimental)" << std::endl;
        continue;
      }
      store.get(P);
    }
  return store.records();
}

}  // namespace rpr
