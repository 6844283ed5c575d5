#include "rpr/postprocess.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <stdexcept>

#include "rpr/energy.hpp"
#include "rpr/homotopy.hpp"
#include "rpr/varieties.hpp"

namespace rpr {

std::string classification_name(Classification c) {
  switch (c) {
    case Classification::minimum:
      return "minimum";
    case Classification::saddle:
      return "saddle";
    case Classification::maximum:
      return "maximum";
    case Classification::degenerate:
      return "degenerate";
  }
  return "?";
}

std::vector<std::vector<double>> filter_real(const std::vector<std::vector<cdouble>>& pts, double imag_tol) {
  if (!(imag_tol > 0.0)) throw std::invalid_argument("filter_real: imag_tol must be positive");
  std::vector<std::vector<double>> out;
  for (const auto& p : pts) {
    double im = 0.0;
    for (const auto& z : p) im = std::max(im, std::abs(z.imag()));
    if (!(im < imag_tol)) continue;
    std::vector<double> r(p.size());
    for (size_t i = 0; i < p.size(); ++i) r[i] = p[i].real();
    out.push_back(std::move(r));
  }
  return out;
}

// ---------------------------------------------------------------- second-order test

HessianVerdict classify_hessian(const Eigen::MatrixXd& H, const Eigen::MatrixXd& G) {
  const int n = static_cast<int>(H.rows());
  const int m = static_cast<int>(G.rows());
  if (H.cols() != n || (m > 0 && G.cols() != n)) throw std::invalid_argument("classify_hessian: shape mismatch");
  if (m >= n) throw std::invalid_argument("classify_hessian: needs more variables than constraints");
  HessianVerdict v;

  // eigenvalues of the Hessian on the tangent space of the constraints
  Eigen::MatrixXd Z = Eigen::MatrixXd::Identity(n, n);
  if (m > 0) {
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(G, Eigen::ComputeFullV);
    Z = svd.matrixV().rightCols(n - m);
  }
  const Eigen::MatrixXd Hs = 0.5 * (H + H.transpose());
  const Eigen::MatrixXd Hp = Z.transpose() * Hs * Z;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(Hp);
  const Eigen::VectorXd ev = es.eigenvalues();
  v.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  const double rho = ev.cwiseAbs().maxCoeff();
  v.eps = 1e-7 * (1.0 + rho);
  int pos = 0, neg = 0, zero = 0;
  for (double e : v.eigenvalues) {
    if (e > v.eps)
      ++pos;
    else if (e < -v.eps)
      ++neg;
    else
      ++zero;
  }
  if (zero > 0)
    v.by_eigen = Classification::degenerate;
  else if (neg == 0)
    v.by_eigen = Classification::minimum;
  else if (pos == 0)
    v.by_eigen = Classification::maximum;
  else
    v.by_eigen = Classification::saddle;

  // leading principal minors of the bordered Hessian, orders 2m+1 .. m+n. They are only
  // sign-definite when the first m columns of G are independent, so pivot those to the front.
  // Row scaling of G and positive scaling of H keep every sign.
  Eigen::MatrixXd Gn = G;
  Eigen::MatrixXd Hn = Hs / std::max(Hs.cwiseAbs().maxCoeff(), 1e-300);
  if (m > 0) {
    for (int i = 0; i < m; ++i) Gn.row(i) /= std::max(Gn.row(i).norm(), 1e-300);
    Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(Gn);
    const Eigen::MatrixXd Pm = qr.colsPermutation();
    Gn = Gn * Pm;
    Hn = Pm.transpose() * Hn * Pm;
  }
  Eigen::MatrixXd B = Eigen::MatrixXd::Zero(m + n, m + n);
  if (m > 0) {
    B.topRightCorner(m, n) = Gn;
    B.bottomLeftCorner(n, m) = Gn.transpose();
  }
  B.bottomRightCorner(n, n) = Hn;
  bool is_min = true, is_max = true, flat = false;
  for (int r = m + 1; r <= n; ++r) {
    const int k = m + r;
    const Eigen::MatrixXd M = B.topLeftCorner(k, k);
    const double det = M.determinant();
    double hadamard = 1.0;
    for (int i = 0; i < k; ++i) hadamard *= std::max(M.row(i).norm(), 1e-300);
    if (std::abs(det) <= 1e-12 * hadamard) {
      flat = true;
      break;
    }
    const int sgn = det > 0.0 ? 1 : -1;
    const int want_min = (m % 2 == 0) ? 1 : -1;
    const int want_max = (r % 2 == 0) ? 1 : -1;
    is_min = is_min && sgn == want_min;
    is_max = is_max && sgn == want_max;
  }
  if (flat)
    v.by_minors = Classification::degenerate;
  else if (is_min)
    v.by_minors = Classification::minimum;
  else if (is_max)
    v.by_minors = Classification::maximum;
  else
    v.by_minors = Classification::saddle;

  v.verdict = v.by_eigen == v.by_minors ? v.by_eigen : Classification::degenerate;
  return v;
}

namespace {

// Second derivatives of the Lagrangian and constraint gradients of a template.
struct Derivatives {
  int nc = 0;                                // coordinate unknowns
  std::vector<std::vector<Polynomial>> d2D;  // objective
  std::vector<std::vector<std::vector<Polynomial>>> d2g;  // per constraint
  std::vector<std::vector<Polynomial>> dg;
};

const Derivatives& derivatives(const AssembledProblem& P) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<Derivatives>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[P.kind.key()];
  if (slot) return *slot;
  auto d = std::make_unique<Derivatives>();
  d->nc = P.n_unknowns - P.n_multipliers;
  const int nc = d->nc;
  auto hess = [&](const Polynomial& f) {
    std::vector<std::vector<Polynomial>> h(nc, std::vector<Polynomial>(nc));
    for (int i = 0; i < nc; ++i) {
      const Polynomial fi = f.differentiate(i);
      for (int j = i; j < nc; ++j) h[i][j] = h[j][i] = fi.differentiate(j);
    }
    return h;
  };
  d->d2D = hess(P.objective);
  for (const auto& g : P.constraints) {
    d->d2g.push_back(hess(g));
    std::vector<Polynomial> grad;
    for (int i = 0; i < nc; ++i) grad.push_back(g.differentiate(i));
    d->dg.push_back(std::move(grad));
  }
  slot = std::move(d);
  return *slot;
}

std::vector<cdouble> full_point(const AssembledProblem& P, const std::vector<double>& x) {
  std::vector<cdouble> pt(x.begin(), x.end());
  const auto params = params_of(P.target, P.omega);
  pt.insert(pt.end(), params.begin(), params.end());
  return pt;
}

}  // namespace

HessianVerdict classify_critical(const std::vector<double>& x, const AssembledProblem& P) {
  if (static_cast<int>(x.size()) != P.n_unknowns) throw std::invalid_argument("classify_critical: wrong dimension");
  const Derivatives& d = derivatives(P);
  const int nc = d.nc, m = P.n_multipliers;
  const auto pt = full_point(P, x);
  Eigen::MatrixXd H(nc, nc), G(m, nc);
  for (int i = 0; i < nc; ++i)
    for (int j = 0; j < nc; ++j) {
      double h = d.d2D[i][j].evaluate(pt).real();
      for (int k = 0; k < m; ++k) h += x[nc + k] * d.d2g[k][i][j].evaluate(pt).real();
      H(i, j) = h;
    }
  for (int k = 0; k < m; ++k)
    for (int j = 0; j < nc; ++j) G(k, j) = d.dg[k][j].evaluate(pt).real();
  return classify_hessian(H, G);
}

void sort_candidates(std::vector<CriticalPoint>& pts) {
  std::stable_sort(pts.begin(), pts.end(), [](const CriticalPoint& a, const CriticalPoint& b) {
    if (a.density != b.density) return a.density < b.density;
    return a.coords < b.coords;
  });
}

std::vector<CriticalPoint> critical_points(const AssembledProblem& P, const std::vector<PathResult>& paths,
                                           const TrackerSettings& s, double imag_tol) {
  std::vector<CriticalPoint> out;
  if (P.empty) return out;
  const auto params = params_of(P.target, P.omega);
  for (const auto& r : paths) {
    if (!r.finite(s)) continue;
    // imaginary parts relative to the size of the point (multipliers can be large)
    const auto re = filter_real({r.endpoint}, imag_tol * (1.0 + r.norm));
    if (re.empty()) continue;
    CriticalPoint c;
    c.stratum = P.kind.key();
    c.x = re.front();
    c.residual = r.residual;
    std::vector<cdouble> xc(c.x.begin(), c.x.end());
    const auto k = expand_coordinates(P, xc, params);
    for (int i = 0; i < 12; ++i) c.coords[i] = k[i].real();
    c.density = density(P.kind.interp, P.frame_K, ConfigurationVector::from_flat(c.coords));
    c.cls = classify_critical(c.x, P).verdict;
    out.push_back(std::move(c));
  }
  sort_candidates(out);
  return out;
}

// ---------------------------------------------------------------- realizations

namespace {

constexpr int kRealParams = 16;  // s12..s46, bx2, bx3, by3, x5, x6, y6, u5

struct RealizationTemplate {
  VarTablePtr vars;
  int n = 0;
  std::vector<Polynomial> eqs;
  std::array<Polynomial, 12> coords;
  std::shared_ptr<const CompiledSystem> sys;
};

RealizationTemplate make_realization(Interpretation in) {
  const bool dP = in.platform != Kind::rigid, dB = in.base != Kind::rigid;
  if (dB && !dP) throw std::invalid_argument("realization_system: expects the rigid side as base");
  std::vector<std::string> names;
  if (dB)
    names = {"c2", "c3", "d3", "c4", "d4", "c5", "d5", "c6", "d6"};
  else if (dP)
    names = {"c4", "d4", "c5", "d5", "c6", "d6"};
  else
    names = {"c4", "d4", "c5", "d5"};
  RealizationTemplate T;
  T.n = static_cast<int>(names.size());
  for (const char* b : {"12", "23", "13", "14", "25", "36", "45", "56", "46"}) names.push_back(std::string("s") + b);
  for (const char* p : {"bx2", "bx3", "by3", "x5", "x6", "y6", "u5"}) names.emplace_back(p);
  T.vars = std::make_shared<const VarTable>(names);
  const VarTablePtr& V = T.vars;
  auto var = [&](const std::string& n) { return Polynomial::variable(V, n); };
  const Polynomial zero(V);
  std::array<PolyPoint, 6> k;
  k[0] = {zero, zero};
  if (dB) {
    k[1] = {var("c2"), zero};
    k[2] = {var("c3"), var("d3")};
  } else {
    k[1] = {var("bx2"), zero};
    k[2] = {var("bx3"), var("by3")};
  }
  k[3] = {var("c4"), var("d4")};
  k[4] = {var("c5"), var("d5")};
  if (dP)
    k[5] = {var("c6"), var("d6")};
  else
    k[5] = point_based_k6(k[3], k[4], var("x6"), var("y6"), var("u5"));
  const char* sn[9] = {"s12", "s23", "s13", "s14", "s25", "s36", "s45", "s56", "s46"};
  auto bar = [&](int b) {
    const auto [i, j] = kBars[b];
    const Polynomial dx = k[i][0] - k[j][0], dy = k[i][1] - k[j][1];
    return dx * dx + dy * dy - var(sn[b]);
  };
  std::vector<int> bars = {3, 4, 5};
  if (dP) bars.insert(bars.end(), {6, 7, 8});
  if (dB) bars.insert(bars.end(), {0, 1, 2});
  for (int b : bars) T.eqs.push_back(bar(b));
  if (!dP) T.eqs.push_back(platform_constraint(k[3], k[4], var("x5")));
  for (int i = 0; i < 6; ++i) {
    T.coords[2 * i] = k[i][0];
    T.coords[2 * i + 1] = k[i][1];
  }
  T.sys = std::make_shared<const CompiledSystem>(T.eqs, T.n);
  return T;
}

const RealizationTemplate& realization_template(Interpretation in) {
  static std::mutex mu;
  static std::map<std::string, std::unique_ptr<RealizationTemplate>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[interpretation_name(in)];
  if (!slot) slot = std::make_unique<RealizationTemplate>(make_realization(in));
  return *slot;
}

std::vector<cdouble> realization_params(const InnerMetric& L, const ManipulatorDesign& d) {
  std::vector<cdouble> p(kRealParams);
  for (int b = 0; b < 9; ++b) p[b] = L[b] * L[b];
  p[9] = d.x2;
  p[10] = d.x3;
  p[11] = d.y3;
  p[12] = d.x5;
  p[13] = d.x6;
  p[14] = d.y6;
  p[15] = 1.0 / d.x5;
  return p;
}

}  // namespace

PolynomialSystem realization_system(Interpretation interp, const InnerMetric& L, const ManipulatorDesign& design) {
  const RealizationTemplate& T = realization_template(interp);
  PolynomialSystem s;
  std::vector<std::string> names(T.vars->names.begin(), T.vars->names.begin() + T.n);
  s.vars = std::make_shared<const VarTable>(names);
  const auto p = realization_params(L, design);
  for (const auto& e : T.eqs) s.equations.push_back(e.specialize(s.vars, p));
  return s;
}

std::vector<cdouble> realization_unknowns(Interpretation interp, const ConfigurationVector& K) {
  const bool dP = interp.platform != Kind::rigid, dB = interp.base != Kind::rigid;
  std::vector<cdouble> x;
  if (dB) x = {K.c(2), K.c(3), K.d(3)};
  x.insert(x.end(), {K.c(4), K.d(4), K.c(5), K.d(5)});
  if (dP) x.insert(x.end(), {K.c(6), K.d(6)});
  return x;
}

std::vector<cdouble> track_realization(Interpretation interp, const ConfigurationVector& K,
                                       const ConfigurationVector& Kp, const TrackerSettings& s, PathStatus* status) {
  const RealizationTemplate& T = realization_template(interp);
  const ManipulatorDesign d = design_of(K);
  ParameterPath path;
  path.derived = false;
  const auto p1 = realization_params(inner_metric(K), d);
  const auto p0 = realization_params(inner_metric(Kp), d);
  path.at1 = p1;
  path.at0 = p0;
  const auto start = realization_unknowns(interp, K);
  // same lengths: the homotopy is constant, and K may itself be singular
  double gap = 0.0, scale = 1.0;
  for (size_t i = 0; i < p1.size(); ++i) {
    gap = std::max(gap, std::abs(p1[i] - p0[i]));
    scale = std::max(scale, std::abs(p1[i]));
  }
  PathResult r;
  if (gap <= 1e-13 * scale) {
    r.endpoint = start;
    r.status = PathStatus::converged;
  } else {
    ParameterHomotopy<double> H(T.sys, path);
    r = track_path(H, start, s);
    if (r.status == PathStatus::step_failure) r = track_path(H, start, s.tightened(1));
  }
  if (r.status == PathStatus::step_failure && s.escalate) {
    ParameterHomotopy<DoubleDouble> H(T.sys, path);
    r = track_path(H, start, s);
  }
  if (status) *status = r.status;
  std::vector<cdouble> pt = r.endpoint;
  pt.insert(pt.end(), p0.begin(), p0.end());
  std::vector<cdouble> out(12);
  for (int i = 0; i < 12; ++i) out[i] = T.coords[i].evaluate(pt);
  return out;
}

IdentificationResult identify_closest(const std::vector<CriticalPoint>& candidates, const AssembledProblem& P,
                                      double delta, const TrackerSettings& s) {
  if (!(delta > 0.0)) throw std::invalid_argument("identify_closest: delta must be positive");
  for (size_t i = 1; i < candidates.size(); ++i)
    if (candidates[i].density < candidates[i - 1].density)
      throw std::invalid_argument("identify_closest: candidates must be sorted by density");
  IdentificationResult res;
  for (size_t i = 0; i < candidates.size(); ++i) {
    const CriticalPoint& c = candidates[i];
    ++res.consumed;
    PathStatus st;
    const auto k2 = track_realization(P.kind.interp, P.frame_K, ConfigurationVector::from_flat(c.coords), s, &st);
    double dist = 0.0;
    for (int j = 0; j < 12; ++j) dist += std::norm(k2[j] - c.coords[j]);
    if (st != PathStatus::converged) dist = std::numeric_limits<double>::infinity();
    res.distances.push_back(dist);
    std::copy(k2.begin(), k2.end(), res.tracked.begin());
    res.match_distance = dist;
    if (dist < delta) {
      res.matched = true;
      res.selected = static_cast<int>(i);
      return res;
    }
  }
  return res;
}

std::array<double, 12> to_pose_frame(const AssembledProblem& P, const std::array<double, 12>& coords) {
  if (!P.inverted) return coords;
  ConfigurationVector K = ConfigurationVector::from_flat(coords), sw;
  for (int i = 0; i < 3; ++i) {
    sw.k[i] = K.k[i + 3];
    sw.k[i + 3] = K.k[i];
  }
  // k1 to the origin, k2 onto the positive x-axis when the base has not collapsed
  const Point o = sw.k[0];
  double dx = sw.k[1].x - o.x, dy = sw.k[1].y - o.y;
  const double r = std::hypot(dx, dy);
  double c = 1.0, sn = 0.0;
  if (r > 1e-9) {
    c = dx / r;
    sn = dy / r;
  }
  std::array<double, 12> out;
  for (int i = 0; i < 6; ++i) {
    const double px = sw.k[i].x - o.x, py = sw.k[i].y - o.y;
    out[2 * i] = c * px + sn * py;
    out[2 * i + 1] = -sn * px + c * py;
  }
  return out;
}

std::string pose_frame_key(const AssembledProblem& P) {
  if (!P.inverted) return P.kind.key();
  ProblemKind k = P.kind;
  std::swap(k.interp.platform, k.interp.base);
  if (k.side != Side::none) k.side = k.side == Side::platform ? Side::base : Side::platform;
  return k.key();
}

double variety_residual(const ProblemKind& kind, const std::array<double, 12>& coords) {
  const ConfigurationVector K = ConfigurationVector::from_flat(coords);
  double M = 0.0;
  for (double v : coords) M = std::max(M, std::abs(v));
  const double s = 1.0 + M;
  const int o = kind.side == Side::platform ? 3 : 0;
  switch (kind.stratum) {
    case Stratum::regular_V:
    case Stratum::singular_V:
      return std::abs(singularity_value(K)) / (s * s * s * s);
    case Stratum::regular_coll:
      return std::abs(collinearity_value(K.k[o], K.k[o + 1], K.k[o + 2])) / (s * s);
    case Stratum::singular_coll:
      return std::max({distance(K.k[o], K.k[o + 1]), distance(K.k[o], K.k[o + 2])}) / s;
  }
  return 0.0;
}

}  // namespace rpr
