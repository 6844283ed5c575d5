#include "rpr/polysys.hpp"

#include <algorithm>
#include <cstdio>
#include <functional>
#include <numeric>
#include <set>
#include <sstream>

#include <json.hpp>

namespace rpr {

int VarTable::index(const std::string& name) const {
  for (int i = 0; i < size(); ++i)
    if (names[i] == name) return i;
  throw std::invalid_argument("unknown variable: " + name);
}

Polynomial Polynomial::constant(VarTablePtr vars, cdouble c) {
  Polynomial p(vars);
  p.add_term(Exponent(vars->size(), 0), c);
  return p;
}

Polynomial Polynomial::variable(VarTablePtr vars, int index) {
  if (index < 0 || index >= vars->size()) throw std::invalid_argument("variable index out of range");
  Polynomial p(vars);
  Exponent e(vars->size(), 0);
  e[index] = 1;
  p.add_term(e, 1.0);
  return p;
}

Polynomial Polynomial::variable(VarTablePtr vars, const std::string& name) {
  const int i = vars->index(name);
  return variable(std::move(vars), i);
}

void Polynomial::add_term(const Exponent& e, cdouble c) {
  if (c == cdouble(0.0)) return;
  auto it = terms_.find(e);
  if (it == terms_.end()) {
    terms_.emplace(e, c);
    return;
  }
  it->second += c;
  if (it->second == cdouble(0.0)) terms_.erase(it);
}

void Polynomial::check_compatible(const Polynomial& o) const {
  if (vars_ && o.vars_ && vars_ != o.vars_ && vars_->names != o.vars_->names)
    throw std::invalid_argument("polynomials over different variable tables");
}

int Polynomial::total_degree() const {
  int d = 0;
  for (const auto& [e, c] : terms_) d = std::max(d, std::accumulate(e.begin(), e.end(), 0));
  return d;
}

int Polynomial::degree_in(const std::vector<int>& var_indices) const {
  int d = 0;
  for (const auto& [e, c] : terms_) {
    int s = 0;
    for (int v : var_indices) s += e[v];
    d = std::max(d, s);
  }
  return d;
}

bool Polynomial::depends_on(int var) const {
  for (const auto& [e, c] : terms_)
    if (e[var] > 0) return true;
  return false;
}

cdouble Polynomial::evaluate(const std::vector<cdouble>& point) const {
  if (vars_ && static_cast<int>(point.size()) != vars_->size())
    throw std::invalid_argument("evaluation point arity mismatch");
  cdouble sum = 0.0;
  for (const auto& [e, c] : terms_) {
    cdouble m = c;
    for (size_t i = 0; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) m *= point[i];
    sum += m;
  }
  return sum;
}

Polynomial Polynomial::differentiate(int var) const {
  if (!vars_ || var < 0 || var >= vars_->size()) throw std::invalid_argument("unknown variable");
  Polynomial out(vars_);
  for (const auto& [e, c] : terms_) {
    if (e[var] == 0) continue;
    Exponent f = e;
    f[var] -= 1;
    out.add_term(f, c * static_cast<double>(e[var]));
  }
  return out;
}

Polynomial Polynomial::differentiate(const std::string& name) const {
  if (!vars_) throw std::invalid_argument("unknown variable");
  return differentiate(vars_->index(name));
}

Polynomial Polynomial::specialize(VarTablePtr target, const std::vector<cdouble>& tail_values) const {
  const int keep = target->size();
  if (keep + static_cast<int>(tail_values.size()) != vars_->size())
    throw std::invalid_argument("specialize: arity mismatch");
  Polynomial out(target);
  for (const auto& [e, c] : terms_) {
    cdouble m = c;
    for (size_t i = keep; i < e.size(); ++i)
      for (int k = 0; k < e[i]; ++k) m *= tail_values[i - keep];
    out.add_term(Exponent(e.begin(), e.begin() + keep), m);
  }
  return out;
}

Polynomial& Polynomial::operator+=(const Polynomial& o) {
  check_compatible(o);
  if (!vars_) vars_ = o.vars_;
  for (const auto& [e, c] : o.terms_) add_term(e, c);
  return *this;
}

Polynomial& Polynomial::operator-=(const Polynomial& o) {
  check_compatible(o);
  if (!vars_) vars_ = o.vars_;
  for (const auto& [e, c] : o.terms_) add_term(e, -c);
  return *this;
}

Polynomial& Polynomial::operator*=(cdouble s) {
  if (s == cdouble(0.0)) {
    terms_.clear();
    return *this;
  }
  for (auto& [e, c] : terms_) c *= s;
  return *this;
}

Polynomial operator*(const Polynomial& a, const Polynomial& b) {
  a.check_compatible(b);
  Polynomial out(a.vars_ ? a.vars_ : b.vars_);
  Exponent e;
  for (const auto& [ea, ca] : a.terms_)
    for (const auto& [eb, cb] : b.terms_) {
      e.resize(ea.size());
      for (size_t i = 0; i < ea.size(); ++i) e[i] = static_cast<uint8_t>(ea[i] + eb[i]);
      out.add_term(e, ca * cb);
    }
  return out;
}

Polynomial operator+(Polynomial a, cdouble s) {
  a.add_term(Exponent(a.vars_->size(), 0), s);
  return a;
}

Polynomial Polynomial::pow(int k) const {
  Polynomial r = constant(vars_, 1.0);
  for (int i = 0; i < k; ++i) r = r * *this;
  return r;
}

std::vector<cdouble> evaluate(const PolynomialSystem& s, const std::vector<cdouble>& point) {
  if (static_cast<int>(point.size()) != s.n_vars()) throw std::invalid_argument("evaluation point arity mismatch");
  std::vector<cdouble> out;
  out.reserve(s.equations.size());
  for (const auto& p : s.equations) out.push_back(p.evaluate(point));
  return out;
}

std::vector<cdouble> jacobian(const PolynomialSystem& s, const std::vector<cdouble>& point) {
  if (static_cast<int>(point.size()) != s.n_vars()) throw std::invalid_argument("evaluation point arity mismatch");
  const int n = s.n_vars();
  std::vector<cdouble> J(static_cast<size_t>(s.n_equations()) * n);
  for (int i = 0; i < s.n_equations(); ++i)
    for (int j = 0; j < n; ++j) J[static_cast<size_t>(i) * n + j] = s.equations[i].differentiate(j).evaluate(point);
  return J;
}

std::vector<double> scale_factors(const PolynomialSystem& s) {
  std::vector<double> f;
  for (const auto& p : s.equations) {
    double m = 0.0;
    for (const auto& [e, c] : p.terms()) m = std::max(m, std::abs(c));
    if (m == 0.0) throw std::invalid_argument("scale_system: identically zero equation");
    f.push_back(1.0 / m);
  }
  return f;
}

PolynomialSystem scale_system(const PolynomialSystem& s) {
  const auto f = scale_factors(s);
  PolynomialSystem out = s;
  for (size_t i = 0; i < out.equations.size(); ++i) {
    // Divide rather than multiply by the reciprocal so the largest coefficient lands on modulus 1 exactly.
    const double m = 1.0 / f[i];
    Polynomial q(out.equations[i].vars());
    for (const auto& [e, c] : out.equations[i].terms()) q.add_term(e, c / m);
    out.equations[i] = q;
  }
  return out;
}

void validate_grouping(const std::vector<std::vector<int>>& grouping, int n) {
  std::vector<int> seen(n, 0);
  for (const auto& g : grouping) {
    if (g.empty()) throw std::invalid_argument("grouping has an empty group");
    for (int v : g) {
      if (v < 0 || v >= n) throw std::invalid_argument("grouping index out of range");
      if (seen[v]++) throw std::invalid_argument("grouping repeats a variable");
    }
  }
  for (int c : seen)
    if (c != 1) throw std::invalid_argument("grouping does not cover all variables");
}

std::vector<std::vector<int>> group_degrees(const PolynomialSystem& s,
                                            const std::vector<std::vector<int>>& grouping) {
  std::vector<std::vector<int>> deg;
  for (const auto& p : s.equations) {
    std::vector<int> row;
    for (const auto& g : grouping) row.push_back(p.degree_in(g));
    deg.push_back(row);
  }
  return deg;
}

long long bezout_count(const PolynomialSystem& s, const std::vector<std::vector<int>>& grouping) {
  validate_grouping(grouping, s.n_vars());
  if (!s.is_square()) throw std::invalid_argument("bezout_count: system is not square");
  const auto deg = group_degrees(s, grouping);
  const int m = static_cast<int>(grouping.size());
  // Coefficient of prod z_j^{n_j} in prod_i (sum_j deg_ij z_j), by DP over remaining group slots.
  std::map<std::vector<int>, long long> memo;
  std::vector<int> remaining(m);
  for (int j = 0; j < m; ++j) remaining[j] = static_cast<int>(grouping[j].size());
  std::function<long long(int, std::vector<int>&)> rec = [&](int i, std::vector<int>& rem) -> long long {
    if (i == s.n_equations()) return 1;
    std::vector<int> key = rem;
    key.push_back(i);
    if (auto it = memo.find(key); it != memo.end()) return it->second;
    long long total = 0;
    for (int j = 0; j < m; ++j) {
      if (rem[j] == 0 || deg[i][j] == 0) continue;
      --rem[j];
      total += deg[i][j] * rec(i + 1, rem);
      ++rem[j];
    }
    memo[key] = total;
    return total;
  };
  return rec(0, remaining);
}

namespace {

std::string exact(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::string dump_system(const PolynomialSystem& s) {
  nlohmann::ordered_json j;
  j["variables"] = s.vars ? s.vars->names : std::vector<std::string>{};
  j["grouping"] = s.grouping;
  auto eqs = nlohmann::ordered_json::array();
  for (const auto& p : s.equations) {
    auto terms = nlohmann::ordered_json::array();
    for (const auto& [e, c] : p.terms()) {
      std::vector<int> ex(e.begin(), e.end());
      terms.push_back({{"exp", ex}, {"re", exact(c.real())}, {"im", exact(c.imag())}});
    }
    eqs.push_back(terms);
  }
  j["equations"] = eqs;
  return j.dump();
}

PolynomialSystem load_system(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  PolynomialSystem s;
  s.vars = std::make_shared<const VarTable>(j.at("variables").get<std::vector<std::string>>());
  s.grouping = j.at("grouping").get<std::vector<std::vector<int>>>();
  for (const auto& eq : j.at("equations")) {
    Polynomial p(s.vars);
    for (const auto& t : eq) {
      const auto ex = t.at("exp").get<std::vector<int>>();
      if (static_cast<int>(ex.size()) != s.vars->size()) throw std::invalid_argument("load_system: exponent arity");
      Exponent e(ex.begin(), ex.end());
      p.add_term(e, {std::stod(t.at("re").get<std::string>()), std::stod(t.at("im").get<std::string>())});
    }
    s.equations.push_back(p);
  }
  return s;
}

std::string fingerprint(const std::string& dump) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : dump) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[20];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace rpr
