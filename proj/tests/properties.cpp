#include "properties.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "rpr/energy.hpp"
#include "rpr/varieties.hpp"

namespace rpr::props {

namespace {

const double kPi = 3.141592653589793;

std::string fmt(double v) {
  std::ostringstream o;
  o.precision(3);
  o << v;
  return o.str();
}

PropertyResult result(const std::string& name, double worst, double tol) {
  return {name, worst <= tol, "worst " + fmt(worst) + " (limit " + fmt(tol) + ")"};
}

std::vector<ConfigurationVector> example_poses() {
  std::vector<ConfigurationVector> out;
  for (double phi : {0.3, 1.1, 2.0, 4.4, 5.9})
    out.push_back(anchor_positions(example_design(), MotionSpec::example56(), phi));
  return out;
}

double area2(Point a, Point b, Point c) { return (b.x - a.x) * (c.y - a.y) - (b.y - a.y) * (c.x - a.x); }

}  // namespace

ConfigurationVector random_configuration(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-10.0, 10.0);
  for (;;) {
    ConfigurationVector K;
    K.k[1] = {U(rng), 0.0};
    K.k[2] = {U(rng), U(rng)};
    for (int i = 3; i < 6; ++i) K.k[i] = {U(rng), U(rng)};
    if (std::abs(area2(K.k[0], K.k[1], K.k[2])) > 4.0 && std::abs(area2(K.k[3], K.k[4], K.k[5])) > 4.0) return K;
  }
}

std::array<Point, 3> rigid_move(const std::array<Point, 3>& t, double angle, Point shift, bool reflect) {
  const double c = std::cos(angle), s = std::sin(angle);
  std::array<Point, 3> out;
  for (int i = 0; i < 3; ++i) {
    const double y = reflect ? -t[i].y : t[i].y;
    out[i] = {c * t[i].x - s * y + shift.x, s * t[i].x + c * y + shift.y};
  }
  return out;
}

PropertyResult density_zero_at_identity() {
  double worst = 0.0;
  for (const auto& K : example_poses())
    for (Interpretation i : all_interpretations()) worst = std::max(worst, std::abs(density(i, K, K)));
  return result("density vanishes at K' = K", worst, 1e-24);
}

PropertyResult density_area_independence(uint64_t seed) {
  double worst = 0.0;
  const EnergyConventions a1{1.0, 1.0}, a2{2.0, 1.0};
  const auto poses = example_poses();
  for (int t = 0; t < 100; ++t) {
    const auto Kp = random_configuration(seed + t);
    const auto& K = poses[t % poses.size()];
    for (Interpretation i : all_interpretations()) {
      const double d1 = density(i, K, Kp, a1), d2 = density(i, K, Kp, a2);
      worst = std::max(worst, std::abs(d1 - d2) / std::max(d1, 1e-300));
    }
  }
  return result("density independent of A (A = 2)", worst, 0.0);
}

PropertyResult density_modulus_linearity(uint64_t seed) {
  double worst = 0.0;
  const EnergyConventions e3{1.0, 3.0};
  const auto poses = example_poses();
  for (int t = 0; t < 100; ++t) {
    const auto Kp = random_configuration(seed + 1000 + t);
    const auto& K = poses[t % poses.size()];
    for (Interpretation i : all_interpretations()) {
      const double d1 = density(i, K, Kp), d3 = density(i, K, Kp, e3);
      worst = std::max(worst, std::abs(d3 - 3.0 * d1) / std::max(d1, 1e-300));
    }
  }
  return result("density linear in E (E = 3)", worst, 1e-14);
}

PropertyResult inner_metric_rigid_invariance(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-20.0, 20.0), A(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto K = random_configuration(seed + 2000 + t);
    const double a = A(rng), c = std::cos(a), s = std::sin(a);
    const Point sh{U(rng), U(rng)};
    ConfigurationVector M;
    for (int i = 0; i < 6; ++i) M.k[i] = {c * K.k[i].x - s * K.k[i].y + sh.x, s * K.k[i].x + c * K.k[i].y + sh.y};
    const auto L0 = inner_metric(K), L1 = inner_metric(M);
    for (int b = 0; b < 9; ++b) worst = std::max(worst, std::abs(L0[b] - L1[b]) / (1.0 + L0[b]));
  }
  return result("inner metric invariant under rigid motions", worst, 1e-12);
}

PropertyResult plate_energy_edge_dependence(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-5.0, 5.0), A(0.0, 2.0 * kPi);
  double worst = 0.0;
  for (int t = 0; t < 100; ++t) {
    const auto K = random_configuration(seed + 3000 + t);
    const auto Kd = random_configuration(seed + 4000 + t);
    const Triangle tri = base_triangle(K), def = platform_triangle(Kd);
    const double e0 = plate_energy(tri, def);
    for (bool refl : {false, true}) {
      const double e1 = plate_energy(tri, rigid_move(def, A(rng), {U(rng), U(rng)}, refl));
      worst = std::max(worst, std::abs(e1 - e0) / std::max(e0, 1e-300));
    }
  }
  return result("plate energy depends only on deformed edge lengths", worst, 1e-11);
}

PropertyResult gradient_matches_finite_difference(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 1.3);
  double worst = 0.0;
  int checked = 0;
  for (Interpretation in : all_interpretations())
    for (const auto& P : applicable_problems(in, K)) {
      const auto params = params_of(P.target, P.omega);
      std::vector<cdouble> x(P.n_unknowns);
      for (auto& v : x) v = cdouble(U(rng), U(rng));
      const int nc = P.n_unknowns - P.n_multipliers;
      auto lagrangian = [&](const std::vector<cdouble>& at) {
        std::vector<cdouble> pt(at);
        pt.insert(pt.end(), params.begin(), params.end());
        cdouble L = P.objective.evaluate(pt);
        for (int k = 0; k < P.n_multipliers; ++k) L += at[nc + k] * P.constraints[k].evaluate(pt);
        return L;
      };
      std::vector<cdouble> pt(x);
      pt.insert(pt.end(), params.begin(), params.end());
      double mag = 0.0;
      for (const auto& v : x) mag = std::max(mag, std::abs(v));
      const double h = 1e-5 * (1.0 + mag);
      for (int i = 0; i < P.n_unknowns; ++i) {
        auto xp = x, xm = x;
        xp[i] += h;
        xm[i] -= h;
        const cdouble fd = (lagrangian(xp) - lagrangian(xm)) / (2.0 * h);
        const cdouble an = P.system[i].evaluate(pt);
        worst = std::max(worst, std::abs(an - fd) / (1.0 + std::abs(fd)));
      }
      ++checked;
    }
  auto r = result("system equals the Lagrangian gradient (central differences)", worst, 1e-6);
  r.detail += ", " + std::to_string(checked) + " problems";
  return r;
}

PropertyResult tracker_determinism(uint64_t seed) {
  const auto K = anchor_positions(example_design(), MotionSpec::example56(), 1.0);
  const auto P = build_regular_V(Interpretation{Kind::rigid, Kind::rigid}, K);
  TrackerSettings s;
  s.seed = seed;
  s.parallel = false;
  const auto a = ab_initio(problem_template(P.kind), StartStrategy::automatic, s);
  s.parallel = true;
  const auto b = ab_initio(problem_template(P.kind), StartStrategy::automatic, s);
  const bool same = a.endpoints == b.endpoints && a.failures == b.failures && a.diverged == b.diverged;
  return {"ab-initio endpoints identical for serial and parallel runs with one seed", same,
          std::to_string(a.endpoints.size()) + " vs " + std::to_string(b.endpoints.size()) + " endpoints"};
}

PropertyResult realization_residual_zero() {
  double worst = 0.0;
  for (const auto& K0 : example_poses())
    for (Interpretation in : all_interpretations()) {
      const Interpretation sf = solve_frame(in);
      const ConfigurationVector K = needs_inversion(in) ? invert_configuration(K0) : normalize(K0);
      const auto sys = realization_system(sf, inner_metric(K), design_of(K));
      const auto x = realization_unknowns(sf, K);
      for (const auto& v : evaluate(sys, x)) worst = std::max(worst, std::abs(v) / 100.0);
    }
  return result("realization system vanishes at its own pose", worst, 1e-12);
}

PropertyResult variety_equations(const RunConfig& cfg, GenericStore& store, const std::vector<Interpretation>& interps,
                                 const std::vector<double>& phis) {
  double worst = 0.0;
  int points = 0;
  for (Interpretation in : interps)
    for (double phi : phis) {
      const auto K = anchor_positions(cfg.design, cfg.motion, phi);
      for (const auto& P : applicable_problems(in, K)) {
        if (needs_experimental(P.kind) && !cfg.experimental) continue;
        const auto o = run_stratum(P, store.get(P), cfg, cfg.tracker);
        for (const auto& c : o.points) {
          worst = std::max(worst, variety_residual(P.kind, c.coords));
          ++points;
        }
      }
    }
  auto r = result("real critical points lie on their variety", worst, 1e-8);
  r.detail += ", " + std::to_string(points) + " points";
  r.ok = r.ok && points > 0;
  return r;
}

std::vector<PropertyResult> cheap_properties(uint64_t seed) {
  return {density_zero_at_identity(),
          density_area_independence(seed),
          density_modulus_linearity(seed),
          inner_metric_rigid_invariance(seed),
          plate_energy_edge_dependence(seed),
          gradient_matches_finite_difference(seed),
          realization_residual_zero()};
}

double grid_collapse_min(const Triangle& t) {
  // the energy is written out here instead of calling the bounds module
  auto e = [](double l, double ld) { return (ld * ld - l * l) * (ld * ld - l * l) / (8.0 * l * l * l); };
  const double l01 = distance(t[0], t[1]), l02 = distance(t[0], t[2]), l12 = distance(t[1], t[2]);
  auto f = [&](double a, double b) { return e(l01, a) + e(l02, b) + e(l12, b - a); };
  const double s = std::max({l01, l02, l12});
  const int n = 400;
  std::vector<std::pair<double, std::pair<double, double>>> cells;
  for (int i = 0; i <= n; ++i)
    for (int j = 0; j <= n; ++j) {
      const double a = -2 * s + 4 * s * i / n, b = -2 * s + 4 * s * j / n;
      cells.push_back({f(a, b), {a, b}});
    }
  std::sort(cells.begin(), cells.end());
  double best = cells.front().first;
  for (int c = 0; c < 20; ++c) {
    auto [a, b] = cells[c].second;
    double h = 4 * s / n;
    for (int z = 0; z < 30; ++z) {
      double ba = a, bb = b, bv = f(a, b);
      for (int i = -10; i <= 10; ++i)
        for (int j = -10; j <= 10; ++j) {
          const double v = f(a + h * i / 10, b + h * j / 10);
          if (v < bv) {
            bv = v;
            ba = a + h * i / 10;
            bb = b + h * j / 10;
          }
        }
      a = ba;
      b = bb;
      h /= 4;
    }
    best = std::min(best, f(a, b));
  }
  return best;
}

}  // namespace rpr::props
