#include "rpr/start_system.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Dense>

namespace rpr {

StartSystem StartSystem::total_degree(const std::vector<int>& degrees) {
  StartSystem s;
  s.n_ = static_cast<int>(degrees.size());
  s.total_ = true;
  s.degrees_ = degrees;
  for (int d : degrees)
    if (d < 1) throw std::invalid_argument("total_degree: every equation needs degree >= 1");
  return s;
}

StartSystem StartSystem::linear_product(int n, const std::vector<std::vector<int>>& grouping,
                                        const std::vector<std::vector<int>>& deg, uint64_t seed) {
  StartSystem s;
  s.n_ = n;
  s.total_ = false;
  s.grouping_ = grouping;
  s.factors_.resize(n);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(-1.0, 1.0);
  auto draw = [&] {
    const double re = U(rng);
    const double im = U(rng);
    return cdouble(re, im);
  };
  for (int i = 0; i < n; ++i) {
    for (size_t j = 0; j < grouping.size(); ++j)
      for (int k = 0; k < deg[i][j]; ++k) {
        Factor f{static_cast<int>(j), std::vector<cdouble>(n, 0.0), 0.0};
        for (int v : grouping[j]) f.a[v] = draw();
        f.b = draw();
        s.factors_[i].push_back(std::move(f));
      }
    if (s.factors_[i].empty()) throw std::invalid_argument("linear_product: constant equation");
  }
  return s;
}

long long StartSystem::root_count() const {
  if (total_) {
    long long c = 1;
    for (int d : degrees_) c *= d;
    return c;
  }
  return static_cast<long long>(solutions().size());
}

std::vector<std::vector<cdouble>> StartSystem::solutions() const {
  std::vector<std::vector<cdouble>> out;
  if (total_) {
    std::vector<int> idx(n_, 0);
    for (;;) {
      std::vector<cdouble> x(n_);
      for (int i = 0; i < n_; ++i) x[i] = std::polar(1.0, 2.0 * std::numbers::pi * idx[i] / degrees_[i]);
      out.push_back(std::move(x));
      int i = n_ - 1;
      while (i >= 0 && ++idx[i] == degrees_[i]) idx[i--] = 0;
      if (i < 0) break;
    }
    return out;
  }
  const int m = static_cast<int>(grouping_.size());
  std::vector<int> need(m), choice(n_);
  for (int j = 0; j < m; ++j) need[j] = static_cast<int>(grouping_[j].size());
  auto solve = [&] {
    std::vector<cdouble> x(n_);
    for (int j = 0; j < m; ++j) {
      const auto& g = grouping_[j];
      const int k = static_cast<int>(g.size());
      Eigen::MatrixXcd A(k, k);
      Eigen::VectorXcd b(k);
      int row = 0;
      for (int i = 0; i < n_; ++i) {
        const Factor& f = factors_[i][choice[i]];
        if (f.group != j) continue;
        for (int c = 0; c < k; ++c) A(row, c) = f.a[g[c]];
        b(row) = -f.b;
        ++row;
      }
      const Eigen::VectorXcd y = A.partialPivLu().solve(b);
      for (int c = 0; c < k; ++c) x[g[c]] = y(c);
    }
    out.push_back(std::move(x));
  };
  // depth-first over one factor per equation, each group used exactly |group| times
  auto rec = [&](auto&& self, int i) -> void {
    if (i == n_) {
      solve();
      return;
    }
    const auto& fs = factors_[i];
    for (int k = 0; k < static_cast<int>(fs.size()); ++k) {
      const int j = fs[k].group;
      if (need[j] == 0) continue;
      --need[j];
      choice[i] = k;
      self(self, i + 1);
      ++need[j];
    }
  };
  rec(rec, 0);
  return out;
}

}  // namespace rpr
