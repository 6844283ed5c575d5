#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "rpr/energy.hpp"
#include "rpr/model.hpp"
#include "rpr/numeric.hpp"
#include "rpr/polysys.hpp"

namespace rpr {

enum class Stratum { regular_V, singular_V, regular_coll, singular_coll };
enum class Side { none, base, platform };

std::string stratum_name(Stratum s);

/// One critical-point problem. `interp` is expressed in the solve frame: whenever
/// exactly one side is rigid it is the base (the rigid platform case is solved on
/// the inverse motion).
struct ProblemKind {
  Stratum stratum = Stratum::regular_V;
  Interpretation interp;
  int branch = 0;          // +1 / -1 for the rigid/rigid collinear-legs parametrization
  Side side = Side::none;  // collinear or point-degenerate side for the coll strata
  std::string key() const;
  bool operator==(const ProblemKind&) const = default;
};

/// Number of primitive pose quantities interpolated by the user homotopy:
/// 9 lengths, base edge vectors 12 and 13, platform edge vectors 45 and 46,
/// base points (x2, x3, y3) and platform shape (x5, x6, y6).
inline constexpr int kNumPrimitives = 23;
/// Number of derived coefficients: w_b, s_b for nine bars, two plate blocks, base points, platform shape, 1/x5.
inline constexpr int kNumParams = 33;

using Primitives = std::array<cdouble, kNumPrimitives>;

std::vector<std::string> param_names();

/// Gradient system of a Lagrangian over [unknowns..., parameters...].
struct AssembledProblem {
  ProblemKind kind;
  VarTablePtr vars;
  int n_unknowns = 0;
  int n_multipliers = 0;
  std::vector<Polynomial> system;
  Polynomial objective;
  std::vector<Polynomial> constraints;  // one per multiplier, same order
  std::vector<std::vector<int>> grouping;
  bool multihomogeneous = false;
  IndexSet omega = IndexSet::I1;
  std::array<Polynomial, 12> coords;  // c1, d1, ..., c6, d6 in unknowns and parameters

  // Pose-specific part (filled by the build_* operations).
  bool empty = false;       // stratum has no points for this design
  bool inverted = false;    // solved on the inverse motion
  ConfigurationVector frame_K;  // pose in the solve frame
  Primitives target{};

  std::vector<std::string> unknown_names() const;
  /// Unknown-only system at the given parameters.
  PolynomialSystem instantiate(const std::vector<cdouble>& params) const;
};

/// Symbolic template for a problem kind (cached, thread-safe).
const AssembledProblem& problem_template(const ProblemKind& kind);

Primitives primitives_of(const ConfigurationVector& K);
/// Complex generic configuration: nine coordinates (c2, c3, d3, c4, d4, c5, d5, c6, d6).
using GenericConfiguration = std::array<cdouble, 9>;
GenericConfiguration draw_generic_configuration(uint64_t seed);
Primitives primitives_of(const GenericConfiguration& KC);

namespace detail {
template <class T>
struct Lift;
template <>
struct Lift<cdouble> {
  static cdouble of(double v) { return cdouble(v); }
};
template <class R>
struct Lift<Dual<Complex<R>>> {
  static Dual<Complex<R>> of(double v) { return Dual<Complex<R>>(Complex<R>(R(v))); }
};
}  // namespace detail

/// Derived coefficients from primitives; T is cdouble or a dual number over Complex<R>.
template <class T>
void derive_params(const T* prim, IndexSet omega, T* out) {
  auto k = [](double v) { return detail::Lift<T>::of(v); };
  T Om = k(0.0);
  for (int b : bars_of(omega)) Om = Om + prim[b];
  for (int b = 0; b < 9; ++b) {
    const T l = prim[b];
    out[b] = k(1.0) / (k(8.0) * l * l * l * Om);
    out[9 + b] = l * l;
  }
  auto plate = [&](int e0, int vol0, T* dst) {
    const T ux = prim[e0], uy = prim[e0 + 1], wx = prim[e0 + 2], wy = prim[e0 + 3];
    const T g11 = ux * ux + uy * uy, g12 = ux * wx + uy * wy, g22 = wx * wx + wy * wy;
    const T det = g11 * g22 - g12 * g12;
    dst[0] = g22 / det;
    dst[1] = (k(0.0) - g12) / det;
    dst[2] = g11 / det;
    dst[3] = (prim[vol0] + prim[vol0 + 1] + prim[vol0 + 2]) / Om;
  };
  plate(9, 0, out + 18);
  plate(13, 6, out + 22);
  for (int i = 0; i < 3; ++i) out[26 + i] = prim[17 + i];
  for (int i = 0; i < 3; ++i) out[29 + i] = prim[20 + i];
  out[32] = k(1.0) / prim[20];
}

std::vector<cdouble> params_of(const Primitives& prim, IndexSet omega);

/// Solve-frame configuration for an interpretation (inverse motion if only the platform is rigid).
bool needs_inversion(Interpretation interp);
Interpretation solve_frame(Interpretation interp);

AssembledProblem build_regular_V(Interpretation interp, const ConfigurationVector& K);
AssembledProblem build_singular_V(Interpretation interp, const ConfigurationVector& K, int branch);
AssembledProblem build_regular_coll(Side which, Interpretation interp, const ConfigurationVector& K);
AssembledProblem build_singular_coll(Side which, Interpretation interp, const ConfigurationVector& K);

/// Full 12 coordinates of a solution (unknowns x) at parameters p, in the solve frame.
std::array<cdouble, 12> expand_coordinates(const AssembledProblem& P, const std::vector<cdouble>& x,
                                           const std::vector<cdouble>& params);

}  // namespace rpr
