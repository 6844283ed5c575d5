#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <iostream>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "properties.hpp"
#include "rpr/bounds.hpp"
#include "rpr/pipeline.hpp"
#include "rpr/varieties.hpp"

using namespace rpr;

namespace {

// Tolerances and targets.
constexpr double kSingularAtZero = 1e-9;
constexpr double kSecondSingular = 3.0356972;
constexpr double kRootTol = 1e-4;
constexpr double kBaseCollapse = 3.602733, kPlatCollapse = 1.008061, kCollapseTol = 1e-5;
constexpr double kClosedFormTol = 1e-9, kGridTol = 1e-4;
constexpr int kWindow = 3;
constexpr double kMedianFraction = 0.10;
constexpr double kVarietyTol = 1e-8;
constexpr int kPoses = 90;
const char* kCache = "shared.cache";

const Kind R = Kind::rigid, B = Kind::bar, T = Kind::plate;

struct Verdict {
  bool pass = true;
  std::ostringstream text;
  void fail() { pass = false; }
};

int failures = 0;

void run(int id, const std::string& title, const std::function<void(Verdict&)>& body) {
  Verdict v;
  const auto t0 = std::chrono::steady_clock::now();
  try {
    body(v);
  } catch (const std::exception& e) {
    v.fail();
    v.text << " exception: " << e.what();
  }
  const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("criterion %d %s: %s |%s [%.1f s]\n", id, v.pass ? "PASS" : "FAIL", title.c_str(), v.text.str().c_str(),
              sec);
  std::fflush(stdout);
}

double V_at(double phi) {
  return singularity_value(anchor_positions(example_design(), MotionSpec::example56(), phi));
}

RunConfig sweep_config(std::vector<Interpretation> interps) {
  RunConfig c;
  c.interpretations = std::move(interps);
  c.poses = kPoses;
  c.cache_dir = kCache;
  c.out_prefix = "acceptance";
  return c;
}

void criterion1(Verdict& v) {
  const double v0 = std::abs(V_at(0.0));
  double a = 0.1, b = std::numbers::pi, fa = V_at(a);
  if (fa * V_at(b) > 0) {
    v.fail();
    v.text << " no sign change of V on (0.1, pi)";
    return;
  }
  while (b - a > 1e-12) {
    const double m = 0.5 * (a + b), fm = V_at(m);
    if (fa * fm <= 0) {
      b = m;
    } else {
      a = m;
      fa = fm;
    }
  }
  const double root = 0.5 * (a + b);
  if (!(v0 < kSingularAtZero)) v.fail();
  if (!(std::abs(root - kSecondSingular) < kRootTol)) v.fail();
  char buf[160];
  std::snprintf(buf, sizeof buf, " |V(0)| = %.2e (limit %.0e), root %.9f vs %.7f (limit %.0e)", v0, kSingularAtZero,
                root, kSecondSingular, kRootTol);
  v.text << buf;
  if (std::abs(root - kSecondSingular) >= kRootTol) {
    // nearest sample of the 90-pose grid to the root
    const auto phis = discretize_motion(MotionSpec::example56(), kPoses);
    const double near = *std::min_element(phis.begin(), phis.end(), [&](double x, double y) {
      return std::abs(x - root) < std::abs(y - root);
    });
    std::snprintf(buf, sizeof buf, "; V(%.7f) = %.4g, the only sign change of V on (0.1, pi) is at the root above;",
                  kSecondSingular, V_at(kSecondSingular));
    v.text << buf << " the quoted value is the grid pose 43 * 2pi / 89 = " << std::to_string(near)
           << " nearest to the root, not a zero of V";
  }
}

void criterion2(Verdict& v) {
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 1.0);
  auto count = [&](const AssembledProblem& P, bool single) {
    const auto s = P.instantiate(params_of(P.target, P.omega));
    std::vector<std::vector<int>> one(1);
    for (int i = 0; i < s.n_vars(); ++i) one[0].push_back(i);
    return bezout_count(s, single ? one : P.grouping);
  };
  auto check = [&](const std::string& name, long long got, long long want) {
    if (got != want) v.fail();
    v.text << " " << name << " " << got << "/" << want;
  };
  check("rigid/rigid", count(build_regular_V({R, R}, K), false), 324);
  check("bar/rigid", count(build_regular_V({B, R}, K), true), 2187);
  check("plate/rigid", count(build_regular_V({T, R}, K), true), 2187);
  check("plate/plate", count(build_regular_V({T, T}, K), false), 236196);
}

void criterion3(Verdict& v) {
  TrackerSettings s;
  struct Case {
    ProblemKind kind;
    int finite;
    int real;  // -1: not stated
  };
  const std::vector<Case> cases = {
      {{Stratum::regular_V, {R, R}}, 76, -1},
      {{Stratum::regular_V, {B, R}}, 858, -1},
      {{Stratum::regular_V, {T, R}}, 858, -1},
      {{Stratum::singular_V, {R, R}, 1}, 3, 0},
      {{Stratum::singular_V, {R, R}, -1}, 3, 0},
      {{Stratum::singular_V, {B, R}}, 27, 0},
      {{Stratum::singular_V, {T, R}}, 27, 0},
      {{Stratum::singular_V, {T, T}}, 242, 1},
      {{Stratum::singular_V, {B, B}}, 242, 1},
      {{Stratum::regular_coll, {B, R}, 0, Side::platform}, 206, -1},
      {{Stratum::singular_coll, {T, B}, 0, Side::base}, 90, 1},
      {{Stratum::singular_coll, {B, B}, 0, Side::base}, 90, 1},
      {{Stratum::singular_coll, {B, R}, 0, Side::platform}, 5, 0},
  };
  std::vector<std::string> off;
  for (const auto& c : cases) {
    const auto t0 = std::chrono::steady_clock::now();
    const auto G = ab_initio(problem_template(c.kind), StartStrategy::automatic, s);
    const double sec = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int fin = static_cast<int>(G.endpoints.size()), re = G.real_count();
    const bool ok = fin == c.finite && G.failures == 0 && (c.real < 0 || re == c.real);
    char buf[200];
    std::snprintf(buf, sizeof buf, " %s %d (%d real, %d failures, %.1fs) want %d", c.kind.key().c_str(), fin, re,
                  G.failures, sec, c.finite);
    v.text << buf << (c.real >= 0 ? " with " + std::to_string(c.real) + " real;" : ";");
    if (!ok) {
      v.fail();
      off.push_back(c.kind.key());
    }
  }
  if (!off.empty())
    v.text << " || mismatch analysis: the singV (both deformable) and singColl base-point systems are invariant under"
              " c -> -c (all points on one line) and under rotation by pi in the plane (base point), which fix only"
              " the all-zero critical point. Nonzero finite solutions therefore come in pairs and the finite count"
              " is odd: 243 = 1 + 2*121 and 91 = 1 + 2*45, with the zero solution the one real point. 242 and 90 with"
              " one real solution are even and cannot occur for these systems. The runs have no path failures and"
              " no two endpoints coincide after dedup, so the published counts are not reproduced.";
}

void criterion4(Verdict& v) {
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 0.0);
  const Triangle base = base_triangle(K), plat = platform_triangle(K);
  const double pb = plate_collapse_energy(base), pp = plate_collapse_energy(plat);
  const double r2 = std::sqrt(2.0), r5 = std::sqrt(5.0), r74 = std::sqrt(74.0), r85 = std::sqrt(85.0);
  const double cb = (356411 + 30267 * r85 - (6149 * r85 - 32456) * r74) / 617764;
  const double cp = (291 + 127 * r5 - (129 * r5 - 197) * r2) / 2018;
  const double tb = triangle_collapse_min(base).energy, tp = triangle_collapse_min(plat).energy;
  const double gb = props::grid_collapse_min(base), gp = props::grid_collapse_min(plat);
  if (std::abs(pb - kBaseCollapse) > kCollapseTol || std::abs(pp - kPlatCollapse) > kCollapseTol) v.fail();
  if (std::abs(tb - cb) > kClosedFormTol || std::abs(tp - cp) > kClosedFormTol) v.fail();
  if (std::abs(tb - gb) > kGridTol || std::abs(tp - gp) > kGridTol) v.fail();
  char buf[400];
  std::snprintf(buf, sizeof buf,
                " plate collapse %.6f / %.6f (limit %.0e); bar collapse %.10f / %.10f, closed form diff %.1e / %.1e"
                " (limit %.0e), grid diff %.1e / %.1e (limit %.0e)",
                pb, pp, kCollapseTol, tb, tp, std::abs(tb - cb), std::abs(tp - cp), kClosedFormTol, std::abs(tb - gb),
                std::abs(tp - gp), kGridTol);
  v.text << buf;
}

void criterion5(Verdict& v, DistanceReport& out) {
  const RunConfig cfg = sweep_config({Interpretation{R, R}});
  out = run_pipeline(cfg);
  const auto& rows = out.rows;
  const int n = static_cast<int>(rows.size());
  std::vector<double> d;
  for (const auto& r : rows) d.push_back(r.distance);
  std::vector<double> sorted = d;
  std::sort(sorted.begin(), sorted.end());
  const double median = 0.5 * (sorted[(n - 1) / 2] + sorted[n / 2]);
  int nan = 0;
  for (double x : d) nan += std::isnan(x) ? 1 : 0;
  if (nan) v.fail();
  v.text << " " << n << " rows, median " << median << ", " << nan << " without a match;";
  for (double target : {0.0, kSecondSingular}) {
    int best = 0;
    for (int i = 1; i < n; ++i)
      if (std::abs(rows[i].phi - target) < std::abs(rows[best].phi - target)) best = i;
    bool window_min = true;
    for (int i = std::max(0, best - kWindow); i <= std::min(n - 1, best + kWindow); ++i)
      if (d[i] < d[best]) window_min = false;
    const bool small = d[best] < kMedianFraction * median;
    if (!window_min || !small) v.fail();
    v.text << " pose " << best << " (phi " << rows[best].phi << "): D = " << d[best]
           << (window_min ? ", window minimum" : ", NOT the window minimum")
           << (small ? ", below 10% of median;" : ", NOT below 10% of median;");
  }
}

void criterion6(Verdict& v, DistanceReport& out) {
  const RunConfig cfg = sweep_config({Interpretation{B, R}, Interpretation{R, B}});
  out = run_pipeline(cfg);
  int fired = 0, below = 0, nan = 0, fails = 0;
  for (const auto& r : out.rows) {
    fired += static_cast<int>(r.gates.size());
    nan += std::isnan(r.distance) ? 1 : 0;
    fails += r.path_failures;
    for (const auto& [k, b] : r.bounds)
      if (!(b > r.distance)) ++below;
  }
  if (fired || below || nan) v.fail();
  v.text << " bar/rigid and rigid/bar, " << out.rows.size() << " rows: " << below << " bounds at or below the distance, "
         << fired << " gates fired, " << nan << " rows without a match, " << fails << " path failures;";
  int order = 0, checked = 0;
  for (double phi : discretize_motion(cfg.motion, kPoses))
    for (Interpretation in : all_interpretations()) {
      const auto r = lower_bounds(in, anchor_positions(cfg.design, cfg.motion, phi));
      for (auto [coll, point] : {std::pair{BoundKind::coll_platform, BoundKind::point_platform},
                                 std::pair{BoundKind::coll_base, BoundKind::point_base}}) {
        const auto c = r.get(coll), p = r.get(point);
        if (!c || !p) continue;
        ++checked;
        if (!(*p >= *c)) ++order;
      }
    }
  if (order) v.fail();
  v.text << " singular-coll bound >= regular-coll bound in " << checked - order << "/" << checked
         << " checks over the nine interpretations; the both-deformable interpretations are not swept because"
            " their regular-V ab-initio runs need the experimental switch";
}

void criterion7(Verdict& v, const std::vector<const DistanceReport*>& reports) {
  auto show = [&](const props::PropertyResult& r) {
    if (!r.ok) v.fail();
    v.text << " [" << (r.ok ? "ok" : "FAILED") << "] " << r.name << ": " << r.detail << ";";
  };
  for (const auto& r : props::cheap_properties(20240607)) show(r);
  show(props::tracker_determinism(20240607));
  RunConfig cfg = sweep_config(all_interpretations());
  GenericStore store(cfg, nullptr);
  show(props::variety_equations(cfg, store, all_interpretations(), {0.7, 2.0, 4.4}));
  // the winners of the sweeps lie on V
  double worst = 0.0;
  int n = 0;
  for (const auto* rep : reports)
    for (const auto& r : rep->rows) {
      if (std::isnan(r.distance)) continue;
      worst = std::max(worst, variety_residual(ProblemKind{Stratum::regular_V, {}}, r.coords));
      ++n;
    }
  props::PropertyResult w{"reported singular configurations lie on V", worst <= kVarietyTol && n > 0, ""};
  char buf[80];
  std::snprintf(buf, sizeof buf, "worst %.2e (limit %.0e), %d rows", worst, kVarietyTol, n);
  w.detail = buf;
  show(w);
}

// Real solutions of the rigid/rigid direct kinematics for the leg lengths of K (Newton from random starts).
std::vector<ConfigurationVector> realizations(const ConfigurationVector& K) {
  const ManipulatorDesign d = design_of(K);
  const auto sys = realization_system({R, R}, inner_metric(K), d);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> U(-15.0, 15.0);
  std::vector<std::vector<cdouble>> sols;
  for (int t = 0; t < 3000; ++t) {
    Eigen::Vector4d x(U(rng), U(rng), U(rng), U(rng));
    bool ok = false;
    for (int it = 0; it < 60; ++it) {
      std::vector<cdouble> xc(x.data(), x.data() + 4);
      const auto f = evaluate(sys, xc);
      const auto J = jacobian(sys, xc);
      Eigen::Matrix4d Jm;
      Eigen::Vector4d fv;
      for (int i = 0; i < 4; ++i) {
        fv(i) = f[i].real();
        for (int j = 0; j < 4; ++j) Jm(i, j) = J[i * 4 + j].real();
      }
      const Eigen::Vector4d dx = Jm.fullPivLu().solve(fv);
      x -= dx;
      if (!x.allFinite() || x.norm() > 1e4) break;
      if (dx.norm() < 1e-13 * (1 + x.norm())) {
        ok = true;
        break;
      }
    }
    if (ok) sols.push_back(std::vector<cdouble>(x.data(), x.data() + 4));
  }
  ConfigurationVector base = normalize(K);
  std::vector<ConfigurationVector> out;
  for (const auto& s : dedup(sols, 1e-8)) {
    ConfigurationVector C = base;
    C.k[3] = {s[0].real(), s[1].real()};
    C.k[4] = {s[2].real(), s[3].real()};
    C.k[5] = point_based_k6(C.k[3], C.k[4], d);
    out.push_back(C);
  }
  return out;
}

void criterion8(Verdict& v) {
  // A pose close to the second singularity: two assembly modes lie on either side of the fold of V,
  // and deforming the inner metric towards the nearest singular point makes them coalesce.
  RunConfig cfg = sweep_config({Interpretation{R, R}});
  GenericStore store(cfg, nullptr);
  const TrackerSettings& s = cfg.tracker;
  const auto K = anchor_positions(cfg.design, cfg.motion, 2.95);
  const auto modes = realizations(K);
  v.text << " " << modes.size() << " real assembly modes;";
  const auto Pa = build_regular_V({R, R}, K);
  const auto oa = run_stratum(Pa, store.get(Pa), cfg, s);
  if (!oa.id.matched) {
    v.fail();
    v.text << " the given mode has no identified singular configuration";
    return;
  }
  const auto& win = oa.minima[oa.id.selected];
  int partner = -1;
  double gap = 0.0;
  for (size_t m = 0; m < modes.size(); ++m) {
    double dk = 0.0;
    for (int i = 0; i < 12; ++i) dk += std::pow(modes[m].flat()[i] - Pa.frame_K.flat()[i], 2);
    if (dk < 1e-12) continue;  // the given mode itself
    const auto Pb = build_regular_V({R, R}, modes[m]);
    const auto ob = run_stratum(Pb, store.get(Pb), cfg, s);
    if (!ob.id.matched) continue;
    double e = 0.0;
    for (int i = 0; i < 12; ++i) e += std::pow(ob.minima[ob.id.selected].coords[i] - win.coords[i], 2);
    if (e < cfg.delta) {
      partner = static_cast<int>(m);
      gap = std::sqrt(dk);
      break;
    }
  }
  if (partner < 0) {
    v.fail();
    v.text << " no second assembly mode reaches the same singular configuration";
    return;
  }
  v.text << " mode " << partner << " (" << gap << " away) is identified with the same singular configuration"
         << " (D = " << win.density << ", V residual " << variety_residual(Pa.kind, win.coords) << ")";
}

}  // namespace

int main() {
  std::cout << "acceptance: tolerances pinned in tests/acceptance.cpp; generic sets cached in " << kCache << std::endl;
  run(1, "singular poses of the example motion", criterion1);
  run(2, "Bezout counts", criterion2);
  run(3, "ab-initio finite solution counts", criterion3);
  run(4, "collapse energies", criterion4);
  DistanceReport rr, gated;
  run(5, "rigid/rigid distance curve", [&](Verdict& v) { criterion5(v, rr); });
  run(6, "bound gating on the example", [&](Verdict& v) { criterion6(v, gated); });
  run(7, "property suites", [&](Verdict& v) { criterion7(v, {&rr, &gated}); });
  run(8, "identification of two assembly modes", criterion8);
  std::cout << "acceptance: " << 8 - failures << "/8 criteria pass" << std::endl;
  return failures ? 1 : 0;
}
