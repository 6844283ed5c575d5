#include "rpr/tracker.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <map>
#include <mutex>
#include <random>
#include <stdexcept>

#include <omp.h>

#include "rpr/linalg.hpp"

namespace rpr {

// ---------------------------------------------------------------- homotopies

std::vector<double> equation_scales(const CompiledSystem& sys, const std::vector<cdouble>& params) {
  using D = Dual<Complex<double>>;
  std::vector<D> p(params.size());
  for (size_t i = 0; i < params.size(); ++i) p[i] = D(Complex<double>(params[i]));
  std::vector<Complex<double>> c(sys.n_terms()), dc(sys.n_terms());
  sys.coefficients(p.data(), c.data(), dc.data());
  std::vector<double> mx(sys.n_eq(), 0.0);
  for (int t = 0; t < sys.n_terms(); ++t) {
    const int e = sys.term_equation(t);
    mx[e] = std::max(mx[e], abs_d(c[t]));
  }
  for (auto& v : mx) v = v > 0.0 ? 1.0 / v : 1.0;
  return mx;
}

namespace {

std::vector<cdouble> params_at(const ParameterPath& path, bool at_zero) {
  const auto& v = at_zero ? path.at0 : path.at1;
  if (!path.derived) return v;
  Primitives p;
  std::copy(v.begin(), v.end(), p.begin());
  return params_of(p, path.omega);
}

}  // namespace

template <class R>
ParameterHomotopy<R>::ParameterHomotopy(std::shared_ptr<const CompiledSystem> sys, ParameterPath path)
    : sys_(std::move(sys)), path_(std::move(path)) {
  if (path_.at0.size() != path_.at1.size()) throw std::invalid_argument("ParameterHomotopy: endpoint size mismatch");
  if (path_.derived && path_.at0.size() != static_cast<size_t>(kNumPrimitives))
    throw std::invalid_argument("ParameterHomotopy: expected primitives");
  if (!path_.derived && path_.at0.size() != static_cast<size_t>(sys_->n_p()))
    throw std::invalid_argument("ParameterHomotopy: parameter count mismatch");
  sigma_ = equation_scales(*sys_, params_at(path_, true));
  c_.resize(sys_->n_terms());
  dc_.resize(sys_->n_terms());
}

template <class R>
void ParameterHomotopy<R>::update(const R& h) {
  if (have_ && h_ == h) return;
  using D = Dual<Complex<R>>;
  const size_t m = path_.at0.size();
  std::vector<D> seg(m);
  for (size_t i = 0; i < m; ++i) {
    const Complex<R> a(path_.at0[i]), b(path_.at1[i]);
    seg[i] = D(a + (b - a) * h, b - a);
  }
  if (path_.derived) {
    std::vector<D> par(kNumParams);
    derive_params(seg.data(), path_.omega, par.data());
    sys_->coefficients(par.data(), c_.data(), dc_.data());
  } else {
    sys_->coefficients(seg.data(), c_.data(), dc_.data());
  }
  h_ = h;
  have_ = true;
}

template <class R>
void ParameterHomotopy<R>::eval(const Complex<R>* x, const R& h, Complex<R>* H, Complex<R>* Hx, Complex<R>* Hh) {
  update(h);
  sys_->eval<R>(x, c_.data(), dc_.data(), H, Hx, Hh);
  const int n = sys_->n_eq(), nx = sys_->n_x();
  for (int i = 0; i < n; ++i) {
    const R s(sigma_[i]);
    H[i] = H[i] * s;
    if (Hh) Hh[i] = Hh[i] * s;
    if (Hx)
      for (int j = 0; j < nx; ++j) Hx[i * nx + j] = Hx[i * nx + j] * s;
  }
}

template <class R>
void ParameterHomotopy<R>::residual_scale(const Complex<R>* x, const R& h, double* out) {
  update(h);
  sys_->eval_abs(x, c_.data(), out);
  for (int i = 0; i < sys_->n_eq(); ++i) out[i] *= sigma_[i];
}

template <class R>
StartHomotopy<R>::StartHomotopy(std::shared_ptr<const CompiledSystem> target, std::vector<cdouble> params,
                                std::shared_ptr<const StartSystem> start, cdouble gamma)
    : sys_(std::move(target)), start_(std::move(start)), gamma_(gamma) {
  if (sys_->n_x() != sys_->n_eq() || start_->n() != sys_->n_x())
    throw std::invalid_argument("StartHomotopy: dimension mismatch");
  sigma_ = equation_scales(*sys_, params);
  using D = Dual<Complex<R>>;
  std::vector<D> p(params.size());
  for (size_t i = 0; i < params.size(); ++i) p[i] = D(Complex<R>(params[i]));
  c_.resize(sys_->n_terms());
  dc_.resize(sys_->n_terms());
  sys_->coefficients(p.data(), c_.data(), dc_.data());
}

template <class R>
void StartHomotopy<R>::eval(const Complex<R>* x, const R& h, Complex<R>* H, Complex<R>* Hx, Complex<R>* Hh) {
  using C = Complex<R>;
  const int n = sys_->n_x();
  thread_local std::vector<C> f, jf, g, jg;
  f.resize(n);
  g.resize(n);
  jf.resize(Hx ? n * n : 0);
  jg.resize(Hx ? n * n : 0);
  sys_->eval<R>(x, c_.data(), dc_.data(), f.data(), Hx ? jf.data() : nullptr, nullptr);
  start_->eval(x, g.data(), Hx ? jg.data() : nullptr);
  const R one(1.0);
  const R a = one - h;
  for (int i = 0; i < n; ++i) {
    const C sf = f[i] * R(sigma_[i]);
    const C gg = gamma_ * g[i];
    H[i] = sf * a + gg * h;
    if (Hh) Hh[i] = gg - sf;
    if (Hx) {
      const R si = R(sigma_[i]) * a;
      for (int j = 0; j < n; ++j) Hx[i * n + j] = jf[i * n + j] * si + gamma_ * jg[i * n + j] * h;
    }
  }
}

template <class R>
void StartHomotopy<R>::residual_scale(const Complex<R>* x, const R& h, double* out) {
  const int n = sys_->n_x();
  sys_->eval_abs(x, c_.data(), out);
  const double a = 1.0 - to_double(h);
  for (int i = 0; i < n; ++i) out[i] *= sigma_[i] * a;
  if (to_double(h) != 0.0) {
    // the start-system part only matters away from the target
    for (int i = 0; i < n; ++i) out[i] += std::abs(to_double(h)) * abs_d(gamma_) * 2.0;
  }
}

template class ParameterHomotopy<double>;
template class ParameterHomotopy<DoubleDouble>;
template class StartHomotopy<double>;
template class StartHomotopy<DoubleDouble>;

// ---------------------------------------------------------------- settings

std::string status_name(PathStatus s) {
  switch (s) {
    case PathStatus::converged:
      return "converged";
    case PathStatus::diverged:
      return "diverged";
    case PathStatus::step_failure:
      return "step-failure";
  }
  return "?";
}

void TrackerSettings::validate() const {
  auto pos = [](double v, const char* what) {
    if (!(v > 0.0) || !std::isfinite(v)) throw std::invalid_argument(std::string("TrackerSettings: ") + what);
  };
  pos(tol, "tol");
  pos(newton_tol, "newton_tol");
  pos(min_step, "min_step");
  pos(max_step, "max_step");
  pos(initial_step, "initial_step");
  pos(endgame_h, "endgame_h");
  pos(endgame_min_h, "endgame_min_h");
  pos(diverge_norm, "diverge_norm");
  pos(finite_norm, "finite_norm");
  pos(residual_tol, "residual_tol");
  if (max_steps <= 0) throw std::invalid_argument("TrackerSettings: max_steps");
  if (endgame_h >= 1.0) throw std::invalid_argument("TrackerSettings: endgame_h must be < 1");
}

TrackerSettings TrackerSettings::tightened(int level) const {
  TrackerSettings t = *this;
  for (int i = 0; i < level; ++i) {
    t.tol /= 10.0;
    t.max_step /= 2.0;
    t.initial_step /= 2.0;
    t.max_steps *= 2;
  }
  t.tol = std::max(t.tol, 1e-13);
  return t;
}

int GenericSolutionSet::real_count(double imag_tol) const {
  int c = 0;
  for (const auto& p : endpoints) {
    bool real = true;
    for (const auto& z : p) real = real && std::abs(z.imag()) < imag_tol * (1.0 + std::abs(z));
    c += real;
  }
  return c;
}

// ---------------------------------------------------------------- path tracking

namespace {

template <class R>
struct Workspace {
  using C = Complex<R>;
  int n;
  CVec<R> f, hh, k1, k2, k3, k4, tmp;
  CMat<R> J;
  explicit Workspace(int n_)
      : n(n_), f(n_), hh(n_), k1(n_), k2(n_), k3(n_), k4(n_), tmp(n_), J(n_) {}
};

template <class R>
bool tangent(Homotopy<R>& H, Workspace<R>& w, const CVec<R>& x, const R& h, CVec<R>& out) {
  H.eval(x.data(), h, w.f.data(), w.J.a.data(), out.data());
  LU<R> lu(w.J);
  if (!lu.ok) return false;
  lu.solve(out);
  for (auto& v : out) v = -v;
  return true;
}

// Newton at fixed h. Accepts when the update is below tol (relative) and the
// iteration contracts by at least 1/4 per step.
template <class R>
bool correct(Homotopy<R>& H, Workspace<R>& w, CVec<R>& x, const R& h, double tol, int maxit, double* rcond = nullptr) {
  double prev = -1.0;
  for (int it = 0; it < maxit; ++it) {
    H.eval(x.data(), h, w.f.data(), w.J.a.data(), nullptr);
    LU<R> lu(w.J);
    if (!lu.ok) return false;
    if (rcond) *rcond = lu.rcond();
    lu.solve(w.f);
    for (int i = 0; i < w.n; ++i) x[i] -= w.f[i];
    const double nd = inf_norm(w.f), nx = inf_norm(x);
    if (!std::isfinite(nd)) return false;
    if (prev >= 0.0 && nd > 0.25 * prev && nd > tol * (1.0 + nx)) return false;
    if (nd <= tol * (1.0 + nx)) return true;
    prev = nd;
  }
  return false;
}

template <class R>
bool rk4(Homotopy<R>& H, Workspace<R>& w, const CVec<R>& x, const R& h, const R& dt, CVec<R>& out) {
  const int n = w.n;
  const R half = dt * R(0.5);
  if (!tangent(H, w, x, h, w.k1)) return false;
  for (int i = 0; i < n; ++i) w.tmp[i] = x[i] + w.k1[i] * half;
  if (!tangent(H, w, w.tmp, h + half, w.k2)) return false;
  for (int i = 0; i < n; ++i) w.tmp[i] = x[i] + w.k2[i] * half;
  if (!tangent(H, w, w.tmp, h + half, w.k3)) return false;
  for (int i = 0; i < n; ++i) w.tmp[i] = x[i] + w.k3[i] * dt;
  if (!tangent(H, w, w.tmp, h + dt, w.k4)) return false;
  const R sixth = dt / R(6.0);
  for (int i = 0; i < n; ++i)
    out[i] = x[i] + (w.k1[i] + w.k2[i] * R(2.0) + w.k3[i] * R(2.0) + w.k4[i]) * sixth;
  return true;
}

// Adaptive predictor-corrector from h down to h_end. Returns false on step failure.
template <class R>
bool advance(Homotopy<R>& H, Workspace<R>& w, CVec<R>& x, R& h, const R& h_end, double& dh, int& succ, int& steps,
             const TrackerSettings& s, bool& blown) {
  CVec<R> xn(w.n);
  blown = false;
  while (to_double(h - h_end) > 0.0) {
    if (++steps > s.max_steps) return false;
    const double remaining = to_double(h - h_end);
    const double step = std::min(dh, remaining);
    const R hn = step == remaining ? h_end : h - R(step);
    bool ok = rk4(H, w, x, h, hn - h, xn);
    if (ok) ok = correct(H, w, xn, hn, s.tol, 3);
    if (ok) {
      x.swap(xn);
      h = hn;
      if (++succ >= 5) {
        dh = std::min(dh * 1.5, s.max_step);
        succ = 0;
      }
      if (inf_norm(x) > s.diverge_norm) {
        blown = true;
        return true;
      }
    } else {
      dh *= 0.5;
      succ = 0;
      if (dh < s.min_step * std::max(1.0, to_double(h))) return false;
    }
  }
  return true;
}

template <class R>
double backward_error(Homotopy<R>& H, Workspace<R>& w, const CVec<R>& x) {
  const R zero(0.0);
  H.eval(x.data(), zero, w.f.data(), nullptr, nullptr);
  std::vector<double> sc(w.n);
  H.residual_scale(x.data(), zero, sc.data());
  double be = 0.0;
  for (int i = 0; i < w.n; ++i) be = std::max(be, abs_d(w.f[i]) / std::max(sc[i], 1e-300));
  return be;
}

template <class R>
double diff_norm(const CVec<R>& a, const CVec<R>& b) {
  double m = 0.0;
  for (size_t i = 0; i < a.size(); ++i) m = std::max(m, abs_d(a[i] - b[i]));
  return m;
}

// Heuristic for paths that lose accuracy on their way to infinity: steadily growing
// samples, or a clear overall growth over the last few halvings.
template <class R>
bool running_off(const std::vector<CVec<R>>& xs, const CVec<R>& x, int growth, int max_growth,
                 const TrackerSettings& s) {
  const double nx = inf_norm(x);
  if (growth >= 3 || max_growth >= 8 || nx > s.finite_norm) return true;
  if (xs.size() >= 4 && nx > 1.0) return nx > 1.2 * inf_norm(xs[xs.size() - 4]);
  return false;
}

}  // namespace

template <class R>
PathResult track_path(Homotopy<R>& H, const std::vector<cdouble>& start, const TrackerSettings& s) {
  const int n = H.n();
  if (static_cast<int>(start.size()) != n) throw std::invalid_argument("track_path: start has wrong dimension");
  Workspace<R> w(n);
  CVec<R> x(n);
  for (int i = 0; i < n; ++i) x[i] = Complex<R>(start[i]);
  PathResult res;
  auto finish = [&](PathStatus st, const CVec<R>& at) {
    res.status = st;
    res.endpoint.resize(n);
    for (int i = 0; i < n; ++i) res.endpoint[i] = to_cdouble(at[i]);
    res.norm = inf_norm(at);
    return res;
  };

  R h(1.0);
  {
    // polish the start point; extrapolated generic endpoints can be a little off
    CVec<R> xc = x;
    if (correct(H, w, xc, h, s.newton_tol, 8) && diff_norm(xc, x) < 1e-4 * (1.0 + inf_norm(x))) x.swap(xc);
  }
  double dh = s.initial_step;
  int succ = 0;
  bool blown = false;
  if (!advance(H, w, x, h, R(s.endgame_h), dh, succ, res.steps, s, blown)) return finish(PathStatus::step_failure, x);
  if (blown) return finish(PathStatus::diverged, x);

  // Endgame: geometric samples h_k = h0 2^-k, cycle estimate from difference ratios,
  // two-level Richardson extrapolation of the samples.
  std::vector<CVec<R>> xs{x};
  CVec<R> z(n), zprev(n), y1(n), y2(n);
  bool have_prev = false;
  int growth = 0, max_growth = 0;
  double hk = s.endgame_h;
  while (hk > s.endgame_min_h) {
    const double hn = hk * 0.5;
    dh = std::min(dh, hn);
    if (!advance(H, w, x, h, R(hn), dh, succ, res.steps, s, blown)) {
      if (have_prev) break;
      // losing the path while it runs off to infinity
      if (running_off(xs, x, growth, max_growth, s)) return finish(PathStatus::diverged, x);
      return finish(PathStatus::step_failure, x);
    }
    if (blown) return finish(PathStatus::diverged, x);
    hk = hn;
    const double ratio = inf_norm(x) / std::max(inf_norm(xs.back()), 1e-300);
    growth = ratio > 1.02 ? growth + 1 : 0;
    max_growth = std::max(max_growth, growth);
    xs.push_back(x);
    const size_t k = xs.size();
    if (k < 3) continue;
    const double d1 = diff_norm(xs[k - 1], xs[k - 2]), d0 = diff_norm(xs[k - 2], xs[k - 3]);
    if (d1 <= 1e-15 * (1.0 + inf_norm(x))) {
      z = x;
    } else {
      if (!(d0 > 0.0)) continue;
      const double rho = d1 / d0;
      if (!(rho < 0.98)) {
        have_prev = false;
        continue;
      }
      const int c = std::clamp(static_cast<int>(std::lround(-std::log(2.0) / std::log(rho))), 1, 16);
      res.cycle = c;
      const R r1(std::pow(2.0, -1.0 / c)), r2(std::pow(2.0, -2.0 / c));
      const R one(1.0);
      for (int i = 0; i < n; ++i) {
        y1[i] = (xs[k - 2][i] - xs[k - 3][i] * r1) * (one / (one - r1));
        y2[i] = (xs[k - 1][i] - xs[k - 2][i] * r1) * (one / (one - r1));
        z[i] = (y2[i] - y1[i] * r2) * (one / (one - r2));
      }
    }
    if (res.cycle == 1 && have_prev) {
      // Newton at h = 0 only from an extrapolate that has settled; it must stay near it.
      const double est = diff_norm(z, zprev);
      const double nz = inf_norm(z);
      CVec<R> zn = z;
      double rc = 0.0;
      if (est < 1e-4 * (1.0 + nz) && correct(H, w, zn, R(0.0), s.newton_tol, 6, &rc) && rc > 1e-12 &&
          diff_norm(zn, z) <= 10.0 * est + s.newton_tol * (1.0 + nz)) {
        res.rcond = rc;
        res.residual = backward_error(H, w, zn);
        if (res.residual < s.residual_tol) return finish(PathStatus::converged, zn);
      }
    }
    if (have_prev && diff_norm(z, zprev) <= 1e3 * s.newton_tol * (1.0 + inf_norm(z))) {
      res.residual = backward_error(H, w, z);
      H.eval(z.data(), R(0.0), w.f.data(), w.J.a.data(), nullptr);
      res.rcond = LU<R>(w.J).rcond();
      return finish(PathStatus::converged, z);
    }
    zprev = z;
    have_prev = true;
  }
  if (have_prev) {
    // Ran out of samples; accept the last estimate only if it is a good enough root.
    res.residual = backward_error(H, w, z);
    H.eval(z.data(), R(0.0), w.f.data(), w.J.a.data(), nullptr);
    res.rcond = LU<R>(w.J).rcond();
    if (res.residual < s.residual_tol && inf_norm(z) < s.finite_norm) return finish(PathStatus::converged, z);
  }
  if (running_off(xs, x, growth, max_growth, s)) return finish(PathStatus::diverged, x);
  if (have_prev) {
    if (inf_norm(z) > s.finite_norm) return finish(PathStatus::diverged, z);
    return finish(PathStatus::step_failure, z);
  }
  if (inf_norm(x) > s.finite_norm) return finish(PathStatus::diverged, x);
  return finish(PathStatus::step_failure, x);
}

template <class R>
std::vector<PathResult> track_all(const Homotopy<R>& H, const std::vector<std::vector<cdouble>>& starts,
                                  const TrackerSettings& s) {
  const long long m = static_cast<long long>(starts.size());
  std::vector<PathResult> out(m);
  if (!s.parallel) {
    auto h = H.clone();
    for (long long i = 0; i < m; ++i) {
      out[i] = track_path(*h, starts[i], s);
      out[i].start_index = static_cast<int>(i);
    }
    return out;
  }
#pragma omp parallel
  {
    auto h = H.clone();
#pragma omp for schedule(dynamic, 4)
    for (long long i = 0; i < m; ++i) {
      out[i] = track_path(*h, starts[i], s);
      out[i].start_index = static_cast<int>(i);
    }
  }
  return out;
}

template PathResult track_path<double>(Homotopy<double>&, const std::vector<cdouble>&, const TrackerSettings&);
template PathResult track_path<DoubleDouble>(Homotopy<DoubleDouble>&, const std::vector<cdouble>&,
                                             const TrackerSettings&);
template std::vector<PathResult> track_all<double>(const Homotopy<double>&, const std::vector<std::vector<cdouble>>&,
                                                   const TrackerSettings&);
template std::vector<PathResult> track_all<DoubleDouble>(const Homotopy<DoubleDouble>&,
                                                         const std::vector<std::vector<cdouble>>&,
                                                         const TrackerSettings&);

// ---------------------------------------------------------------- solution sets

std::vector<std::vector<cdouble>> dedup(std::vector<std::vector<cdouble>> pts, double tol) {
  auto key_less = [](const std::vector<cdouble>& a, const std::vector<cdouble>& b) {
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].real() != b[i].real()) return a[i].real() < b[i].real();
    for (size_t i = 0; i < a.size(); ++i)
      if (a[i].imag() != b[i].imag()) return a[i].imag() < b[i].imag();
    return false;
  };
  std::sort(pts.begin(), pts.end(), key_less);
  auto norm = [](const std::vector<cdouble>& p) {
    double m = 0.0;
    for (const auto& z : p) m = std::max(m, std::abs(z));
    return m;
  };
  double big = 0.0;
  for (const auto& p : pts) big = std::max(big, norm(p));
  const double window = tol * (1.0 + big);
  std::vector<std::vector<cdouble>> out;
  for (auto& p : pts) {
    if (p.empty()) continue;
    bool dup = false;
    for (auto it = out.rbegin(); it != out.rend(); ++it) {
      if (p[0].real() - (*it)[0].real() > window) break;
      double d = 0.0;
      for (size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - (*it)[i]));
      if (d <= tol * (1.0 + std::max(norm(p), norm(*it)))) {
        dup = true;
        break;
      }
    }
    if (!dup) out.push_back(std::move(p));
  }
  return out;
}

std::string problem_fingerprint(const AssembledProblem& P) {
  PolynomialSystem s{P.vars, P.system, P.grouping};
  return fingerprint(dump_system(s));
}

std::shared_ptr<const CompiledSystem> compiled_system(const AssembledProblem& P) {
  static std::mutex mu;
  static std::map<std::string, std::shared_ptr<const CompiledSystem>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[P.kind.key()];
  if (!slot) slot = std::make_shared<const CompiledSystem>(P.system, P.n_unknowns);
  return slot;
}

namespace {

template <class R>
std::vector<PathResult> run_paths(const Homotopy<R>& H, const std::vector<std::vector<cdouble>>& starts,
                                  const TrackerSettings& s) {
  return track_all(H, starts, s);
}

// Indices of finite results whose endpoints coincide with another finite nonsingular endpoint.
std::vector<int> jumped_paths(const std::vector<PathResult>& res, const TrackerSettings& s, double tol) {
  std::vector<int> idx;
  for (int i = 0; i < static_cast<int>(res.size()); ++i)
    if (res[i].finite(s) && res[i].rcond > 1e-8) idx.push_back(i);
  std::sort(idx.begin(), idx.end(),
            [&](int a, int b) { return res[a].endpoint[0].real() < res[b].endpoint[0].real(); });
  std::vector<char> mark(res.size(), 0);
  for (size_t a = 0; a < idx.size(); ++a)
    for (size_t b = a + 1; b < idx.size(); ++b) {
      const auto& p = res[idx[a]].endpoint;
      const auto& q = res[idx[b]].endpoint;
      const double scale = 1.0 + std::max(res[idx[a]].norm, res[idx[b]].norm);
      if (q[0].real() - p[0].real() > tol * scale * 10.0 + tol * 1e6) break;
      double d = 0.0;
      for (size_t i = 0; i < p.size(); ++i) d = std::max(d, std::abs(p[i] - q[i]));
      if (d <= tol * scale) mark[idx[a]] = mark[idx[b]] = 1;
    }
  std::vector<int> out;
  for (size_t i = 0; i < res.size(); ++i)
    if (mark[i]) out.push_back(static_cast<int>(i));
  return out;
}

template <class R>
void retrack(const Homotopy<R>& H, const std::vector<std::vector<cdouble>>& starts, std::vector<PathResult>& res,
             const std::vector<int>& which, const TrackerSettings& s) {
  std::vector<std::vector<cdouble>> sub;
  for (int i : which) sub.push_back(starts[i]);
  auto again = track_all(H, sub, s);
  for (size_t k = 0; k < which.size(); ++k) {
    again[k].start_index = which[k];
    res[which[k]] = again[k];
  }
}

template <class R>
std::vector<PathResult> robust_track(const Homotopy<R>& H, const std::vector<std::vector<cdouble>>& starts,
                                     const TrackerSettings& s, bool check_jumps, int* retracked) {
  auto res = run_paths(H, starts, s);
  for (int level = 1; level <= s.retries; ++level) {
    std::vector<int> redo;
    for (int i = 0; i < static_cast<int>(res.size()); ++i)
      if (res[i].status == PathStatus::step_failure) redo.push_back(i);
    if (check_jumps) {
      auto j = jumped_paths(res, s, 1e-6);
      redo.insert(redo.end(), j.begin(), j.end());
    }
    std::sort(redo.begin(), redo.end());
    redo.erase(std::unique(redo.begin(), redo.end()), redo.end());
    if (redo.empty()) break;
    if (retracked) *retracked += static_cast<int>(redo.size());
    const TrackerSettings t = s.tightened(level);
    retrack(H, starts, res, redo, t);
    // Results from tightened tracking are judged by the caller's acceptance thresholds.
  }
  return res;
}

// Last resort for paths that failed in double precision: the same paths in double-double.
void escalate(const Homotopy<DoubleDouble>& H, const std::vector<std::vector<cdouble>>& starts,
              std::vector<PathResult>& res, const TrackerSettings& s, int* retracked) {
  std::vector<int> redo;
  for (int i = 0; i < static_cast<int>(res.size()); ++i)
    if (res[i].status == PathStatus::step_failure) redo.push_back(i);
  if (redo.empty()) return;
  if (retracked) *retracked += static_cast<int>(redo.size());
  retrack(H, starts, res, redo, s);
}

// Paths that still fail pass close to a bad parameter value of the straight segment. They are
// tracked again through a random complex waypoint. Going around can end at another path's root,
// so an endpoint counts only if it is converged and no other path reached it.
void detour(const std::shared_ptr<const CompiledSystem>& sys, const ParameterPath& path,
            const std::vector<std::vector<cdouble>>& starts, std::vector<PathResult>& res, const TrackerSettings& s) {
  std::vector<int> redo;
  for (int i = 0; i < static_cast<int>(res.size()); ++i)
    if (res[i].status == PathStatus::step_failure) redo.push_back(i);
  if (redo.empty()) return;
  std::mt19937_64 rng(s.seed ^ 0xd1b54a32d192ed03ULL);
  std::normal_distribution<double> N;
  for (int attempt = 0; attempt < 3 && !redo.empty(); ++attempt) {
    std::vector<cdouble> mid(path.at0.size());
    for (size_t i = 0; i < mid.size(); ++i) {
      const double sc = 0.25 * std::max(std::abs(path.at1[i] - path.at0[i]), 1e-3 * (1.0 + std::abs(path.at0[i])));
      mid[i] = 0.5 * (path.at0[i] + path.at1[i]) + sc * cdouble(N(rng), N(rng));
    }
    ParameterPath a = path, b = path;
    a.at0 = mid;
    b.at1 = mid;
    auto leg = [&](const ParameterPath& p, const std::vector<std::vector<cdouble>>& from) {
      ParameterHomotopy<double> H(sys, p);
      auto r = robust_track(H, from, s, false, nullptr);
      if (s.escalate) escalate(ParameterHomotopy<DoubleDouble>(sys, p), from, r, s, nullptr);
      return r;
    };
    std::vector<std::vector<cdouble>> sub;
    for (int i : redo) sub.push_back(starts[i]);
    const auto r1 = leg(a, sub);
    std::vector<int> through;
    sub.clear();
    for (size_t k = 0; k < redo.size(); ++k)
      if (r1[k].status == PathStatus::converged) {
        through.push_back(redo[k]);
        sub.push_back(r1[k].endpoint);
      }
    const auto r2 = leg(b, sub);
    for (size_t k = 0; k < through.size(); ++k) {
      if (r2[k].status != PathStatus::converged) continue;
      const auto& e = r2[k].endpoint;
      double ne = 0.0;
      for (const auto& z : e) ne = std::max(ne, std::abs(z));
      bool taken = false;
      for (size_t j = 0; j < res.size() && !taken; ++j) {
        if (static_cast<int>(j) == through[k] || res[j].status != PathStatus::converged) continue;
        double d = 0.0;
        for (size_t i = 0; i < e.size(); ++i) d = std::max(d, std::abs(e[i] - res[j].endpoint[i]));
        taken = d < 1e-6 * (1.0 + ne);
      }
      if (taken) continue;
      PathResult got = r2[k];
      got.start_index = through[k];
      got.steps += r1[std::find(redo.begin(), redo.end(), through[k]) - redo.begin()].steps;
      res[through[k]] = got;
    }
    std::erase_if(redo, [&](int i) { return res[i].status != PathStatus::step_failure; });
  }
}

}  // namespace

GenericSolutionSet ab_initio(const AssembledProblem& problem, StartStrategy strategy, const TrackerSettings& s,
                             AbInitioStats* stats) {
  s.validate();
  const auto t0 = std::chrono::steady_clock::now();
  GenericSolutionSet G;
  G.key = problem.kind.key();
  G.fingerprint = problem_fingerprint(problem);
  G.seed = s.seed;
  G.KC = draw_generic_configuration(s.seed);
  G.primitives = primitives_of(G.KC);
  const std::vector<cdouble> params = params_of(G.primitives, problem.omega);
  const auto sys = compiled_system(problem);
  const PolynomialSystem inst = problem.instantiate(params);
  if (!inst.is_square()) throw std::invalid_argument("ab_initio: system is not square");

  if (strategy == StartStrategy::automatic)
    strategy = problem.multihomogeneous ? StartStrategy::multihomogeneous : StartStrategy::total_degree;
  std::mt19937_64 rng(s.seed ^ 0x9e3779b97f4a7c15ULL);
  std::uniform_real_distribution<double> U(0.0, 2.0 * 3.141592653589793);
  const cdouble gamma = std::polar(1.0, U(rng));
  std::shared_ptr<const StartSystem> start;
  if (strategy == StartStrategy::total_degree) {
    std::vector<int> deg;
    for (const auto& e : inst.equations) deg.push_back(e.total_degree());
    start = std::make_shared<const StartSystem>(StartSystem::total_degree(deg));
  } else {
    const auto deg = group_degrees(inst, problem.grouping);
    start = std::make_shared<const StartSystem>(
        StartSystem::linear_product(inst.n_vars(), problem.grouping, deg, rng()));
  }
  const auto starts = start->solutions();
  G.paths = static_cast<long long>(starts.size());

  std::vector<PathResult> res;
  int retracked = 0;
  if (s.precision == Precision::double_double) {
    StartHomotopy<DoubleDouble> H(sys, params, start, gamma);
    res = robust_track(H, starts, s, true, &retracked);
  } else {
    StartHomotopy<double> H(sys, params, start, gamma);
    res = robust_track(H, starts, s, true, &retracked);
    if (s.escalate) escalate(StartHomotopy<DoubleDouble>(sys, params, start, gamma), starts, res, s, &retracked);
  }
  std::vector<std::vector<cdouble>> fin;
  for (const auto& r : res) {
    if (r.finite(s))
      fin.push_back(r.endpoint);
    else if (r.status != PathStatus::diverged) {
      ++G.failures;
      if (stats) stats->failed.push_back(r);
    } else {
      ++G.diverged;
    }
  }
  G.endpoints = dedup(std::move(fin), 1e-6);
  if (stats) {
    stats->start_count = G.paths;
    stats->retracked = retracked;
    stats->seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  }
  return G;
}

std::vector<PathResult> track_user_homotopy(const GenericSolutionSet& generic, const AssembledProblem& target,
                                            const TrackerSettings& s) {
  s.validate();
  if (generic.fingerprint != problem_fingerprint(target))
    throw std::invalid_argument("track_user_homotopy: generic solutions belong to a different problem");
  ParameterPath path;
  path.derived = true;
  path.omega = target.omega;
  path.at0.assign(target.target.begin(), target.target.end());
  path.at1.assign(generic.primitives.begin(), generic.primitives.end());
  const auto sys = compiled_system(target);
  if (s.precision == Precision::double_double) {
    ParameterHomotopy<DoubleDouble> H(sys, path);
    auto res = robust_track(H, generic.endpoints, s, false, nullptr);
    detour(sys, path, generic.endpoints, res, s);
    return res;
  }
  ParameterHomotopy<double> H(sys, path);
  auto res = robust_track(H, generic.endpoints, s, false, nullptr);
  if (s.escalate) escalate(ParameterHomotopy<DoubleDouble>(sys, path), generic.endpoints, res, s, nullptr);
  detour(sys, path, generic.endpoints, res, s);
  return res;
}

}  // namespace rpr
