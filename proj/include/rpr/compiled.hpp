#pragma once

#include <map>
#include <vector>

#include "rpr/numeric.hpp"
#include "rpr/polysys.hpp"

namespace rpr {

/// Flattened evaluator for a list of polynomials whose variable table is
/// [unknowns..., parameters...]. Coefficients of every unknown-monomial are
/// linear combinations of parameter monomials; they are computed once per
/// parameter value (with their derivative along a path) and reused for all
/// evaluations at that value.
class CompiledSystem {
 public:
  CompiledSystem() = default;
  CompiledSystem(const std::vector<Polynomial>& polys, int n_unknowns);

  int n_eq() const { return n_eq_; }
  int n_x() const { return n_x_; }
  int n_p() const { return n_p_; }
  int n_terms() const { return static_cast<int>(terms_.size()); }
  int term_equation(int t) const { return terms_[t].eq; }

  /// Term coefficients c and dc = d c / ds given params p(s) as dual numbers.
  template <class R>
  void coefficients(const Dual<Complex<R>>* params, Complex<R>* c, Complex<R>* dc) const;

  /// f = F(x); optional J (row-major n_eq x n_x) and fs = sum dc * monomial.
  template <class R>
  void eval(const Complex<R>* x, const Complex<R>* c, const Complex<R>* dc, Complex<R>* f, Complex<R>* J,
            Complex<R>* fs) const;

  /// Per-equation sum of |c_t| prod max(|x_v|, 1)^a, the natural scale of each residual.
  template <class R>
  void eval_abs(const Complex<R>* x, const Complex<R>* c, double* out) const;

 private:
  struct Term {
    int eq;
    int f0, nf;  // factor range
    int c0, nc;  // coefficient range
  };
  int n_eq_ = 0, n_x_ = 0, n_p_ = 0;
  std::vector<std::vector<std::pair<int, int>>> pmonos_;
  std::vector<Term> terms_;
  std::vector<std::pair<int, int>> factors_;     // (unknown index, power)
  std::vector<std::pair<int, cdouble>> coefs_;  // (param monomial, constant)
  std::vector<int> max_pow_;
};

inline CompiledSystem::CompiledSystem(const std::vector<Polynomial>& polys, int n_unknowns)
    : n_eq_(static_cast<int>(polys.size())), n_x_(n_unknowns) {
  if (polys.empty()) return;
  const int nv = polys.front().vars()->size();
  n_p_ = nv - n_x_;
  max_pow_.assign(n_x_, 0);
  std::map<std::vector<std::pair<int, int>>, int> pm_index;
  for (int i = 0; i < n_eq_; ++i) {
    // group terms by unknown-exponent
    std::map<std::vector<uint8_t>, std::vector<std::pair<int, cdouble>>> by_x;
    for (const auto& [e, c] : polys[i].terms()) {
      std::vector<uint8_t> ex(e.begin(), e.begin() + n_x_);
      std::vector<std::pair<int, int>> pm;
      for (int k = n_x_; k < nv; ++k)
        if (e[k]) pm.emplace_back(k - n_x_, e[k]);
      auto it = pm_index.find(pm);
      int idx;
      if (it == pm_index.end()) {
        idx = static_cast<int>(pmonos_.size());
        pm_index.emplace(pm, idx);
        pmonos_.push_back(pm);
      } else {
        idx = it->second;
      }
      by_x[ex].emplace_back(idx, c);
    }
    for (const auto& [ex, cl] : by_x) {
      Term t{i, static_cast<int>(factors_.size()), 0, static_cast<int>(coefs_.size()), static_cast<int>(cl.size())};
      for (int v = 0; v < n_x_; ++v)
        if (ex[v]) {
          factors_.emplace_back(v, ex[v]);
          max_pow_[v] = std::max<int>(max_pow_[v], ex[v]);
          ++t.nf;
        }
      for (const auto& pc : cl) coefs_.push_back(pc);
      terms_.push_back(t);
    }
  }
}

template <class R>
void CompiledSystem::coefficients(const Dual<Complex<R>>* params, Complex<R>* c, Complex<R>* dc) const {
  using D = Dual<Complex<R>>;
  std::vector<D> pm(pmonos_.size());
  for (size_t k = 0; k < pmonos_.size(); ++k) {
    D v(Complex<R>(R(1.0)));
    for (const auto& [p, a] : pmonos_[k])
      for (int r = 0; r < a; ++r) v = v * params[p];
    pm[k] = v;
  }
  for (size_t t = 0; t < terms_.size(); ++t) {
    Complex<R> s, ds;
    const Term& tm = terms_[t];
    for (int k = tm.c0; k < tm.c0 + tm.nc; ++k) {
      const Complex<R> w(coefs_[k].second);
      s += w * pm[coefs_[k].first].v;
      ds += w * pm[coefs_[k].first].d;
    }
    c[t] = s;
    dc[t] = ds;
  }
}

template <class R>
void CompiledSystem::eval(const Complex<R>* x, const Complex<R>* c, const Complex<R>* dc, Complex<R>* f,
                          Complex<R>* J, Complex<R>* fs) const {
  using C = Complex<R>;
  thread_local std::vector<C> table;
  thread_local std::vector<C*> pw;
  int total = 0;
  for (int v = 0; v < n_x_; ++v) total += max_pow_[v] + 1;
  table.resize(total);
  pw.resize(n_x_);
  for (int v = 0, off = 0; v < n_x_; off += max_pow_[v] + 1, ++v) {
    pw[v] = table.data() + off;
    pw[v][0] = C(R(1.0));
    for (int k = 1; k <= max_pow_[v]; ++k) pw[v][k] = pw[v][k - 1] * x[v];
  }
  for (int i = 0; i < n_eq_; ++i) {
    f[i] = C();
    if (fs) fs[i] = C();
  }
  if (J)
    for (int i = 0; i < n_eq_ * n_x_; ++i) J[i] = C();
  C pre[32], suf[33];
  for (size_t t = 0; t < terms_.size(); ++t) {
    const Term& tm = terms_[t];
    const auto* fa = &factors_[tm.f0];
    const int k = tm.nf;
    pre[0] = C(R(1.0));
    for (int j = 0; j < k; ++j) pre[j + 1] = pre[j] * pw[fa[j].first][fa[j].second];
    const C m = pre[k];
    f[tm.eq] += c[t] * m;
    if (fs) fs[tm.eq] += dc[t] * m;
    if (J && k > 0) {
      suf[k] = C(R(1.0));
      for (int j = k - 1; j >= 0; --j) suf[j] = suf[j + 1] * pw[fa[j].first][fa[j].second];
      for (int j = 0; j < k; ++j) {
        const int v = fa[j].first, a = fa[j].second;
        const C d = pw[v][a - 1] * pre[j] * suf[j + 1] * R(static_cast<double>(a));
        J[tm.eq * n_x_ + v] += c[t] * d;
      }
    }
  }
}

template <class R>
void CompiledSystem::eval_abs(const Complex<R>* x, const Complex<R>* c, double* out) const {
  for (int i = 0; i < n_eq_; ++i) out[i] = 0.0;
  for (size_t t = 0; t < terms_.size(); ++t) {
    const Term& tm = terms_[t];
    double m = abs_d(c[t]);
    for (int j = tm.f0; j < tm.f0 + tm.nf; ++j)
      m *= std::pow(std::max(abs_d(x[factors_[j].first]), 1.0), factors_[j].second);
    out[tm.eq] += m;
  }
}

}  // namespace rpr
