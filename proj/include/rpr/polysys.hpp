#pragma once

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "rpr/numeric.hpp"

namespace rpr {

/// Ordered variable names shared by all polynomials of one system.
struct VarTable {
  std::vector<std::string> names;

  VarTable() = default;
  explicit VarTable(std::vector<std::string> n) : names(std::move(n)) {}
  int size() const { return static_cast<int>(names.size()); }
  int index(const std::string& name) const;  // throws std::invalid_argument
};

using VarTablePtr = std::shared_ptr<const VarTable>;
using Exponent = std::vector<uint8_t>;

/// Sparse multivariate polynomial with complex coefficients.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(VarTablePtr vars) : vars_(std::move(vars)) {}

  static Polynomial constant(VarTablePtr vars, cdouble c);
  static Polynomial variable(VarTablePtr vars, int index);
  static Polynomial variable(VarTablePtr vars, const std::string& name);

  const VarTablePtr& vars() const { return vars_; }
  const std::map<Exponent, cdouble>& terms() const { return terms_; }
  bool is_zero() const { return terms_.empty(); }
  size_t size() const { return terms_.size(); }

  void add_term(const Exponent& e, cdouble c);

  int total_degree() const;
  /// Degree restricted to the given variable indices.
  int degree_in(const std::vector<int>& var_indices) const;
  /// True if any term involves the given variable.
  bool depends_on(int var) const;

  cdouble evaluate(const std::vector<cdouble>& point) const;
  Polynomial differentiate(int var) const;
  Polynomial differentiate(const std::string& name) const;

  /// Substitute numeric values for variables [keep, size) and return a
  /// polynomial over the first `keep` variables of `target`.
  Polynomial specialize(VarTablePtr target, const std::vector<cdouble>& tail_values) const;

  Polynomial& operator+=(const Polynomial& o);
  Polynomial& operator-=(const Polynomial& o);
  Polynomial& operator*=(cdouble s);

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator-(Polynomial a) { return a *= -1.0; }
  friend Polynomial operator*(const Polynomial& a, const Polynomial& b);
  friend Polynomial operator*(Polynomial a, cdouble s) { return a *= s; }
  friend Polynomial operator*(cdouble s, Polynomial a) { return a *= s; }
  friend Polynomial operator+(Polynomial a, cdouble s);
  friend Polynomial operator-(Polynomial a, cdouble s) { return a + (-s); }

  Polynomial pow(int k) const;

 private:
  void check_compatible(const Polynomial& o) const;
  VarTablePtr vars_;
  std::map<Exponent, cdouble> terms_;
};

/// Square (or not yet square) list of polynomials over one variable table.
struct PolynomialSystem {
  VarTablePtr vars;
  std::vector<Polynomial> equations;
  /// Optional partition of variable indices for m-homogeneous structure.
  std::vector<std::vector<int>> grouping;

  int n_vars() const { return vars ? vars->size() : 0; }
  int n_equations() const { return static_cast<int>(equations.size()); }
  bool is_square() const { return n_vars() == n_equations(); }
};

std::vector<cdouble> evaluate(const PolynomialSystem& s, const std::vector<cdouble>& point);
/// Row-major Jacobian, rows = equations.
std::vector<cdouble> jacobian(const PolynomialSystem& s, const std::vector<cdouble>& point);
PolynomialSystem scale_system(const PolynomialSystem& s);
/// Per-equation scale factors 1/max|coefficient| used by scale_system.
std::vector<double> scale_factors(const PolynomialSystem& s);

/// Validates that `grouping` partitions [0, n).
void validate_grouping(const std::vector<std::vector<int>>& grouping, int n);
/// Degree table deg[i][j] of equation i in group j.
std::vector<std::vector<int>> group_degrees(const PolynomialSystem& s,
                                            const std::vector<std::vector<int>>& grouping);
/// m-homogeneous Bezout number; a single group gives the total-degree number.
long long bezout_count(const PolynomialSystem& s, const std::vector<std::vector<int>>& grouping);

/// Text dump with exact (round-trip) decimal coefficients.
std::string dump_system(const PolynomialSystem& s);
PolynomialSystem load_system(const std::string& text);
/// Structural fingerprint (FNV-1a over the dump).
std::string fingerprint(const std::string& dump);

}  // namespace rpr
