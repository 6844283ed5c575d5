#pragma once

#include <memory>
#include <vector>

#include "rpr/compiled.hpp"
#include "rpr/lagrangian.hpp"
#include "rpr/numeric.hpp"
#include "rpr/start_system.hpp"

namespace rpr {

/// H(x, h) with h running from 1 (start) to 0 (target).
template <class R>
class Homotopy {
 public:
  virtual ~Homotopy() = default;
  virtual int n() const = 0;
  /// H, and optionally the row-major Jacobian Hx and the h-derivative Hh.
  virtual void eval(const Complex<R>* x, const R& h, Complex<R>* H, Complex<R>* Hx, Complex<R>* Hh) = 0;
  /// Per-equation sum |c||x^a| of H(., h) (denominator of the backward error).
  virtual void residual_scale(const Complex<R>* x, const R& h, double* out) = 0;
  virtual std::unique_ptr<Homotopy<R>> clone() const = 0;
};

/// Coefficients along a segment of parameter space. In `derived` mode the primitives
/// (lengths, edge vectors, anchor data) interpolate and the polynomial coefficients
/// are derived from them; otherwise the coefficients themselves interpolate.
struct ParameterPath {
  bool derived = true;
  IndexSet omega = IndexSet::I1;
  std::vector<cdouble> at0;  // target (h = 0)
  std::vector<cdouble> at1;  // start (h = 1)
};

template <class R>
class ParameterHomotopy final : public Homotopy<R> {
 public:
  ParameterHomotopy(std::shared_ptr<const CompiledSystem> sys, ParameterPath path);
  int n() const override { return sys_->n_x(); }
  void eval(const Complex<R>* x, const R& h, Complex<R>* H, Complex<R>* Hx, Complex<R>* Hh) override;
  void residual_scale(const Complex<R>* x, const R& h, double* out) override;
  std::unique_ptr<Homotopy<R>> clone() const override {
    return std::make_unique<ParameterHomotopy<R>>(*this);
  }
  const std::vector<double>& sigma() const { return sigma_; }

 private:
  void update(const R& h);
  std::shared_ptr<const CompiledSystem> sys_;
  ParameterPath path_;
  std::vector<double> sigma_;
  bool have_ = false;
  R h_{};
  std::vector<Complex<R>> c_, dc_;
};

/// Gamma-trick straight line (1 - h) sigma F + h gamma G between a start system and a fixed target.
template <class R>
class StartHomotopy final : public Homotopy<R> {
 public:
  StartHomotopy(std::shared_ptr<const CompiledSystem> target, std::vector<cdouble> params,
                std::shared_ptr<const StartSystem> start, cdouble gamma);
  int n() const override { return sys_->n_x(); }
  void eval(const Complex<R>* x, const R& h, Complex<R>* H, Complex<R>* Hx, Complex<R>* Hh) override;
  void residual_scale(const Complex<R>* x, const R& h, double* out) override;
  std::unique_ptr<Homotopy<R>> clone() const override { return std::make_unique<StartHomotopy<R>>(*this); }

 private:
  std::shared_ptr<const CompiledSystem> sys_;
  std::shared_ptr<const StartSystem> start_;
  Complex<R> gamma_;
  std::vector<double> sigma_;
  std::vector<Complex<R>> c_, dc_;
};

/// Per-equation scale factors 1 / max|c| of a compiled system at fixed parameters.
std::vector<double> equation_scales(const CompiledSystem& sys, const std::vector<cdouble>& params);

}  // namespace rpr
