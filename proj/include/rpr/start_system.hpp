#pragma once

#include <cstdint>
#include <vector>

#include "rpr/numeric.hpp"

namespace rpr {

/// Start system G for the gamma trick: total degree (x_i^{d_i} - 1) or a
/// linear product respecting a variable grouping.
class StartSystem {
 public:
  /// x_i^{d_i} - 1.
  static StartSystem total_degree(const std::vector<int>& degrees);
  /// G_i = prod over groups j of deg[i][j] random affine forms in the variables of group j.
  static StartSystem linear_product(int n, const std::vector<std::vector<int>>& grouping,
                                    const std::vector<std::vector<int>>& deg, uint64_t seed);

  int n() const { return n_; }
  bool is_total_degree() const { return total_; }
  long long root_count() const;
  std::vector<std::vector<cdouble>> solutions() const;

  template <class R>
  void eval(const Complex<R>* x, Complex<R>* g, Complex<R>* J) const;

 private:
  struct Factor {
    int group;
    std::vector<cdouble> a;  // length n, zero outside the group
    cdouble b;
  };
  int n_ = 0;
  bool total_ = true;
  std::vector<int> degrees_;
  std::vector<std::vector<int>> grouping_;
  std::vector<std::vector<Factor>> factors_;  // per equation
};

template <class R>
void StartSystem::eval(const Complex<R>* x, Complex<R>* g, Complex<R>* J) const {
  using C = Complex<R>;
  const C one(R(1.0));
  if (total_) {
    for (int i = 0; i < n_; ++i) {
      C p = one;
      for (int k = 0; k < degrees_[i] - 1; ++k) p = p * x[i];
      g[i] = p * x[i] - one;
      if (J) {
        for (int j = 0; j < n_; ++j) J[i * n_ + j] = C();
        J[i * n_ + i] = p * R(static_cast<double>(degrees_[i]));
      }
    }
    return;
  }
  std::vector<C> val;
  for (int i = 0; i < n_; ++i) {
    const auto& fs = factors_[i];
    const int m = static_cast<int>(fs.size());
    val.assign(m, C());
    for (int k = 0; k < m; ++k) {
      C s(fs[k].b);
      for (int v : grouping_[fs[k].group]) s += C(fs[k].a[v]) * x[v];
      val[k] = s;
    }
    C prod = one;
    for (int k = 0; k < m; ++k) prod = prod * val[k];
    g[i] = prod;
    if (J) {
      for (int j = 0; j < n_; ++j) J[i * n_ + j] = C();
      for (int k = 0; k < m; ++k) {
        C rest = one;
        for (int l = 0; l < m; ++l)
          if (l != k) rest = rest * val[l];
        for (int v : grouping_[fs[k].group]) J[i * n_ + v] += C(fs[k].a[v]) * rest;
      }
    }
  }
}

}  // namespace rpr
