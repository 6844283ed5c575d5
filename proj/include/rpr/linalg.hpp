#pragma once

#include <cmath>
#include <vector>

#include "rpr/numeric.hpp"

namespace rpr {

template <class R>
using CVec = std::vector<Complex<R>>;

/// Dense row-major square matrix over Complex<R>.
template <class R>
struct CMat {
  int n = 0;
  std::vector<Complex<R>> a;

  CMat() = default;
  explicit CMat(int size) : n(size), a(static_cast<size_t>(size) * size) {}
  Complex<R>& operator()(int i, int j) { return a[static_cast<size_t>(i) * n + j]; }
  const Complex<R>& operator()(int i, int j) const { return a[static_cast<size_t>(i) * n + j]; }
  void zero() {
    for (auto& v : a) v = Complex<R>();
  }
};

/// In-place LU factorization with partial pivoting.
template <class R>
struct LU {
  CMat<R> m;
  std::vector<int> piv;
  double min_pivot = 0.0;
  double max_pivot = 0.0;
  bool ok = false;

  explicit LU(CMat<R> mat) : m(std::move(mat)), piv(m.n) { factor(); }

  void factor() {
    const int n = m.n;
    ok = true;
    min_pivot = INFINITY;
    max_pivot = 0.0;
    for (int k = 0; k < n; ++k) {
      int p = k;
      double best = to_double(norm2(m(k, k)));
      for (int i = k + 1; i < n; ++i) {
        const double v = to_double(norm2(m(i, k)));
        if (v > best) {
          best = v;
          p = i;
        }
      }
      piv[k] = p;
      if (p != k)
        for (int j = 0; j < n; ++j) std::swap(m(k, j), m(p, j));
      const double mag = std::sqrt(best);
      min_pivot = std::min(min_pivot, mag);
      max_pivot = std::max(max_pivot, mag);
      if (best == 0.0) {
        ok = false;
        continue;
      }
      const Complex<R> inv = Complex<R>(R(1.0)) / m(k, k);
      for (int i = k + 1; i < n; ++i) {
        const Complex<R> f = m(i, k) * inv;
        m(i, k) = f;
        for (int j = k + 1; j < n; ++j) m(i, j) -= f * m(k, j);
      }
    }
  }

  /// Rough reciprocal condition number from the pivot spread.
  double rcond() const { return max_pivot > 0.0 ? min_pivot / max_pivot : 0.0; }

  void solve(CVec<R>& b) const {
    const int n = m.n;
    for (int k = 0; k < n; ++k)
      if (piv[k] != k) std::swap(b[k], b[piv[k]]);
    for (int i = 1; i < n; ++i)
      for (int j = 0; j < i; ++j) b[i] -= m(i, j) * b[j];
    for (int i = n - 1; i >= 0; --i) {
      for (int j = i + 1; j < n; ++j) b[i] -= m(i, j) * b[j];
      b[i] = b[i] / m(i, i);
    }
  }
};

template <class R>
double inf_norm(const CVec<R>& v) {
  double m = 0.0;
  for (const auto& z : v) m = std::max(m, abs_d(z));
  return m;
}

}  // namespace rpr
