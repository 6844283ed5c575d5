#include "rpr/lagrangian.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <random>
#include <stdexcept>

#include "rpr/varieties.hpp"

namespace rpr {

namespace {

const char* kBarNames[9] = {"12", "23", "13", "14", "25", "36", "45", "56", "46"};

std::string side_name(Side s) {
  switch (s) {
    case Side::base:
      return "base";
    case Side::platform:
      return "platform";
    default:
      return "none";
  }
}

bool deformable(Kind k) { return k != Kind::rigid; }

struct Spec {
  std::vector<std::string> unknowns;
  std::vector<std::string> multipliers;
};

AssembledProblem make_template(const ProblemKind& kind) {
  const Interpretation in = kind.interp;
  const bool dP = deformable(in.platform), dB = deformable(in.base);
  if (!dB && !dP && kind.stratum != Stratum::regular_V && kind.stratum != Stratum::singular_V)
    throw std::invalid_argument("no coll strata for rigid/rigid");
  if (dB && !dP) throw std::invalid_argument("template expects the rigid side as base: " + kind.key());

  // Unknown names per template.
  Spec sp;
  const std::vector<std::string> six = {"c4", "d4", "c5", "d5", "c6", "d6"};
  const std::vector<std::string> nine = {"c2", "c3", "d3", "c4", "d4", "c5", "d5", "c6", "d6"};
  switch (kind.stratum) {
    case Stratum::regular_V:
      if (!dP) {
        sp.unknowns = {"c4", "d4", "c5", "d5"};
        sp.multipliers = {"kappa", "lambda"};
      } else if (!dB) {
        sp.unknowns = six;
        sp.multipliers = {"lambda"};
      } else {
        sp.unknowns = nine;
        sp.multipliers = {"lambda"};
      }
      break;
    case Stratum::singular_V:
      if (!dP) {
        if (kind.branch != 1 && kind.branch != -1) throw std::invalid_argument("branch must be +1 or -1");
        sp.unknowns = {"c4"};
      } else if (!dB) {
        sp.unknowns = {"c4", "c5", "c6"};
      } else {
        sp.unknowns = {"c2", "c3", "c4", "c5", "c6"};
      }
      break;
    case Stratum::regular_coll:
      if (kind.side == Side::platform && !dB && in.platform == Kind::bar) {
        sp.unknowns = six;
      } else if (kind.side == Side::base && in.base == Kind::bar && dP) {
        sp.unknowns = nine;
      } else {
        throw std::invalid_argument("unsupported regular coll template: " + kind.key());
      }
      sp.multipliers = {"lambda"};
      break;
    case Stratum::singular_coll:
      if (kind.side == Side::platform && !dB && in.platform == Kind::bar) {
        sp.unknowns = {"c", "d"};
      } else if (kind.side == Side::base && in.base == Kind::bar && dP) {
        sp.unknowns = {"c4", "c5", "c6", "d5", "d6"};
      } else {
        throw std::invalid_argument("unsupported singular coll template: " + kind.key());
      }
      break;
  }

  AssembledProblem P;
  P.kind = kind;
  std::vector<std::string> names = sp.unknowns;
  names.insert(names.end(), sp.multipliers.begin(), sp.multipliers.end());
  const int nx = static_cast<int>(names.size());
  for (const auto& p : param_names()) names.push_back(p);
  P.vars = std::make_shared<const VarTable>(names);
  P.n_unknowns = nx;
  P.n_multipliers = static_cast<int>(sp.multipliers.size());
  const VarTablePtr& V = P.vars;
  auto var = [&](const std::string& n) { return Polynomial::variable(V, n); };
  const Polynomial zero(V);

  // Coordinates c_i, d_i (index 2(i-1), 2(i-1)+1).
  std::array<Polynomial, 12> X;
  X.fill(zero);
  auto set = [&](int i, const Polynomial& c, const Polynomial& d) {
    X[2 * (i - 1)] = c;
    X[2 * (i - 1) + 1] = d;
  };
  auto pt = [&](int i) -> PolyPoint { return {X[2 * (i - 1)], X[2 * (i - 1) + 1]}; };

  // rigid base unless the template says otherwise
  set(1, zero, zero);
  set(2, var("bx2"), zero);
  set(3, var("bx3"), var("by3"));

  std::vector<Polynomial> constraints;
  const Polynomial x5 = var("x5"), x6 = var("x6"), y6 = var("y6"), u5 = var("u5");

  switch (kind.stratum) {
    case Stratum::regular_V: {
      if (!dB) {
        set(4, var("c4"), var("d4"));
        set(5, var("c5"), var("d5"));
        if (!dP) {
          const PolyPoint k6 = point_based_k6(pt(4), pt(5), x6, y6, u5);
          set(6, k6[0], k6[1]);
          constraints.push_back(platform_constraint(pt(4), pt(5), x5));
        } else {
          set(6, var("c6"), var("d6"));
        }
      } else {
        set(2, var("c2"), zero);
        set(3, var("c3"), var("d3"));
        set(4, var("c4"), var("d4"));
        set(5, var("c5"), var("d5"));
        set(6, var("c6"), var("d6"));
      }
      std::array<PolyPoint, 6> k;
      for (int i = 0; i < 6; ++i) k[i] = pt(i + 1);
      constraints.push_back(singularity_polynomial(k));
      break;
    }
    case Stratum::singular_V: {
      set(3, var("bx3"), zero);
      if (!dP) {
        const Polynomial c4 = var("c4");
        const double b = kind.branch;
        set(4, c4, zero);
        set(5, c4 + b * x5, zero);
        set(6, c4 + b * x6, zero);
      } else if (!dB) {
        set(4, var("c4"), zero);
        set(5, var("c5"), zero);
        set(6, var("c6"), zero);
      } else {
        set(2, var("c2"), zero);
        set(3, var("c3"), zero);
        set(4, var("c4"), zero);
        set(5, var("c5"), zero);
        set(6, var("c6"), zero);
      }
      break;
    }
    case Stratum::regular_coll: {
      if (kind.side == Side::platform) {
        set(4, var("c4"), var("d4"));
        set(5, var("c5"), var("d5"));
        set(6, var("c6"), var("d6"));
        constraints.push_back(collinearity({pt(4), pt(5), pt(6)}));
      } else {
        set(2, var("c2"), zero);
        set(3, var("c3"), var("d3"));
        set(4, var("c4"), var("d4"));
        set(5, var("c5"), var("d5"));
        set(6, var("c6"), var("d6"));
        constraints.push_back(var("c2") * var("d3"));
      }
      break;
    }
    case Stratum::singular_coll: {
      if (kind.side == Side::platform) {
        for (int i = 4; i <= 6; ++i) set(i, var("c"), var("d"));
      } else {
        set(2, zero, zero);
        set(3, zero, zero);
        set(4, var("c4"), zero);
        set(5, var("c5"), var("d5"));
        set(6, var("c6"), var("d6"));
      }
      break;
    }
  }

  // Objective D in the parametric coefficients.
  const EnergyLayout lay = energy_layout(in);
  Polynomial D = zero;
  for (int b : lay.bars) {
    const auto [p, q] = kBars[b];
    const Polynomial dc = X[2 * p] - X[2 * q], dd = X[2 * p + 1] - X[2 * q + 1];
    D += bar_energy_poly(dc * dc + dd * dd, var(std::string("w") + kBarNames[b]),
                         var(std::string("s") + kBarNames[b]));
  }
  auto plate = [&](int i0, const std::string& tag) {
    const PolyPoint a = pt(i0), b = pt(i0 + 1), c = pt(i0 + 2);
    const std::array<Polynomial, 4> e = {b[0] - a[0], b[1] - a[1], c[0] - a[0], c[1] - a[1]};
    return plate_energy_poly(e, {var("p" + tag + "11"), var("p" + tag + "12"), var("p" + tag + "22")},
                             var("v" + tag));
  };
  if (lay.plate_base) D += plate(1, "B");
  if (lay.plate_platform) D += plate(4, "P");

  Polynomial L = D;
  for (size_t m = 0; m < constraints.size(); ++m) L += var(sp.multipliers[m]) * constraints[m];
  for (int i = 0; i < nx; ++i) P.system.push_back(L.differentiate(i));
  P.objective = D;
  P.constraints = constraints;
  P.coords = X;
  P.omega = lay.omega;

  const int nu = static_cast<int>(sp.unknowns.size());
  if (kind.stratum == Stratum::regular_V && !dP) {
    P.grouping = {{0, 1, 2, 3}, {4, 5}};
    P.multihomogeneous = true;
  } else if (nu == 9) {
    std::vector<int> g(9);
    for (int i = 0; i < 9; ++i) g[i] = i;
    P.grouping = {g, {9}};
    P.multihomogeneous = true;
  } else {
    std::vector<int> g(nx);
    for (int i = 0; i < nx; ++i) g[i] = i;
    P.grouping = {g};
  }
  return P;
}

bool nearly_collinear(Point a, Point b, Point c) {
  const double s = std::max({distance(a, b), distance(a, c), distance(b, c), 1e-300});
  return std::abs(collinearity_value(a, b, c)) <= 1e-12 * s * s;
}

// Chooses the solve frame for a coll stratum of side `which`.
void coll_frame(Side which, Interpretation interp, Interpretation& sf, Side& s, bool& inv) {
  sf = interp;
  s = which;
  inv = false;
  const Kind sk = which == Side::base ? interp.base : interp.platform;
  if (sk != Kind::bar) throw std::invalid_argument("coll strata need a bar-triangle side");
  if (sf.platform == Kind::rigid && sf.base != Kind::rigid) {
    sf = invert_interpretation(sf);
    s = s == Side::base ? Side::platform : Side::base;
    inv = true;
  }
  if (s == Side::platform && sf.base != Kind::rigid) {
    sf = invert_interpretation(sf);
    s = Side::base;
    inv = !inv;
  }
}

AssembledProblem finish(const ProblemKind& kind, bool inverted, const ConfigurationVector& K) {
  AssembledProblem P = problem_template(kind);
  P.inverted = inverted;
  P.frame_K = inverted ? invert_configuration(K) : normalize(K);
  P.target = primitives_of(P.frame_K);
  return P;
}

}  // namespace

std::string stratum_name(Stratum s) {
  switch (s) {
    case Stratum::regular_V:
      return "regV";
    case Stratum::singular_V:
      return "singV";
    case Stratum::regular_coll:
      return "regColl";
    case Stratum::singular_coll:
      return "singColl";
  }
  return "?";
}

std::string ProblemKind::key() const {
  std::string k = stratum_name(stratum) + ":" + interpretation_name(interp);
  if (branch != 0) k += branch > 0 ? ":+" : ":-";
  if (side != Side::none) k += ":" + side_name(side);
  return k;
}

std::vector<std::string> param_names() {
  std::vector<std::string> n;
  for (const char* b : kBarNames) n.push_back(std::string("w") + b);
  for (const char* b : kBarNames) n.push_back(std::string("s") + b);
  for (const char* s : {"pB11", "pB12", "pB22", "vB", "pP11", "pP12", "pP22", "vP", "bx2", "bx3", "by3", "x5", "x6",
                        "y6", "u5"})
    n.emplace_back(s);
  return n;
}

std::vector<std::string> AssembledProblem::unknown_names() const {
  return {vars->names.begin(), vars->names.begin() + n_unknowns};
}

PolynomialSystem AssembledProblem::instantiate(const std::vector<cdouble>& params) const {
  PolynomialSystem s;
  s.vars = std::make_shared<const VarTable>(unknown_names());
  for (const auto& p : system) s.equations.push_back(p.specialize(s.vars, params));
  s.grouping = grouping;
  return s;
}

const AssembledProblem& problem_template(const ProblemKind& kind) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<AssembledProblem>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[kind.key()];
  if (!slot) slot = std::make_unique<AssembledProblem>(make_template(kind));
  return *slot;
}

Primitives primitives_of(const ConfigurationVector& K) {
  Primitives p{};
  const InnerMetric L = inner_metric(K);
  for (int b = 0; b < 9; ++b) p[b] = L[b];
  const auto& k = K.k;
  p[9] = k[1].x - k[0].x;
  p[10] = k[1].y - k[0].y;
  p[11] = k[2].x - k[0].x;
  p[12] = k[2].y - k[0].y;
  p[13] = k[4].x - k[3].x;
  p[14] = k[4].y - k[3].y;
  p[15] = k[5].x - k[3].x;
  p[16] = k[5].y - k[3].y;
  p[17] = k[1].x;
  p[18] = k[2].x;
  p[19] = k[2].y;
  const double x5 = L[6];
  const double ex = (k[4].x - k[3].x) / x5, ey = (k[4].y - k[3].y) / x5;
  const double dx = k[5].x - k[3].x, dy = k[5].y - k[3].y;
  p[20] = x5;
  p[21] = dx * ex + dy * ey;
  p[22] = ex * dy - ey * dx;
  return p;
}

Primitives primitives_of(const GenericConfiguration& z) {
  // z = (c2, c3, d3, c4, d4, c5, d5, c6, d6)
  const cdouble c[6] = {0.0, z[0], z[1], z[3], z[5], z[7]};
  const cdouble d[6] = {0.0, 0.0, z[2], z[4], z[6], z[8]};
  Primitives p{};
  for (int b = 0; b < 9; ++b) {
    const auto [i, j] = kBars[b];
    const cdouble dc = c[i] - c[j], dd = d[i] - d[j];
    p[b] = std::sqrt(dc * dc + dd * dd);
  }
  p[9] = c[1];
  p[10] = d[1];
  p[11] = c[2];
  p[12] = d[2];
  p[13] = c[4] - c[3];
  p[14] = d[4] - d[3];
  p[15] = c[5] - c[3];
  p[16] = d[5] - d[3];
  p[17] = c[1];
  p[18] = c[2];
  p[19] = d[2];
  const cdouble x5 = p[6];
  const cdouble ex = p[13] / x5, ey = p[14] / x5;
  p[20] = x5;
  p[21] = p[15] * ex + p[16] * ey;
  p[22] = ex * p[16] - ey * p[15];
  return p;
}

GenericConfiguration draw_generic_configuration(uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  for (;;) {
    GenericConfiguration z;
    for (auto& v : z) {
      const double re = U(rng);
      const double im = U(rng);
      v = cdouble(re, im);
    }
    const Primitives p = primitives_of(z);
    bool ok = true;
    for (int b = 0; b < 9; ++b) ok = ok && std::abs(p[b]) >= 0.1;
    const auto gram_ok = [&](int e) {
      const cdouble g11 = p[e] * p[e] + p[e + 1] * p[e + 1], g12 = p[e] * p[e + 2] + p[e + 1] * p[e + 3],
                    g22 = p[e + 2] * p[e + 2] + p[e + 3] * p[e + 3];
      return std::abs(g11 * g22 - g12 * g12) >= 1e-2;
    };
    ok = ok && gram_ok(9) && gram_ok(13) && std::abs(z[0]) >= 0.1;
    if (ok) return z;
  }
}

std::vector<cdouble> params_of(const Primitives& prim, IndexSet omega) {
  std::vector<cdouble> out(kNumParams);
  derive_params(prim.data(), omega, out.data());
  return out;
}

bool needs_inversion(Interpretation interp) {
  return interp.platform == Kind::rigid && interp.base != Kind::rigid;
}

Interpretation solve_frame(Interpretation interp) {
  return needs_inversion(interp) ? invert_interpretation(interp) : interp;
}

AssembledProblem build_regular_V(Interpretation interp, const ConfigurationVector& K) {
  ProblemKind kind{Stratum::regular_V, solve_frame(interp)};
  return finish(kind, needs_inversion(interp), K);
}

AssembledProblem build_singular_V(Interpretation interp, const ConfigurationVector& K, int branch) {
  const Interpretation sf = solve_frame(interp);
  ProblemKind kind{Stratum::singular_V, sf, sf.platform == Kind::rigid ? branch : 0};
  AssembledProblem P = finish(kind, needs_inversion(interp), K);
  // A rigid side keeps its shape, so it must already be collinear for the stratum to be populated.
  const auto& k = P.frame_K.k;
  if (sf.base == Kind::rigid && !nearly_collinear(k[0], k[1], k[2])) P.empty = true;
  if (sf.platform == Kind::rigid && !nearly_collinear(k[3], k[4], k[5])) P.empty = true;
  return P;
}

AssembledProblem build_regular_coll(Side which, Interpretation interp, const ConfigurationVector& K) {
  Interpretation sf;
  Side s;
  bool inv;
  coll_frame(which, interp, sf, s, inv);
  return finish(ProblemKind{Stratum::regular_coll, sf, 0, s}, inv, K);
}

AssembledProblem build_singular_coll(Side which, Interpretation interp, const ConfigurationVector& K) {
  Interpretation sf;
  Side s;
  bool inv;
  coll_frame(which, interp, sf, s, inv);
  return finish(ProblemKind{Stratum::singular_coll, sf, 0, s}, inv, K);
}

std::array<cdouble, 12> expand_coordinates(const AssembledProblem& P, const std::vector<cdouble>& x,
                                           const std::vector<cdouble>& params) {
  std::vector<cdouble> pt(x.begin(), x.begin() + P.n_unknowns);
  pt.insert(pt.end(), params.begin(), params.end());
  std::array<cdouble, 12> out;
  for (int i = 0; i < 12; ++i) out[i] = P.coords[i].evaluate(pt);
  return out;
}

}  // namespace rpr
