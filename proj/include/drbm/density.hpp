#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "drbm/laplace.hpp"
#include "drbm/theta.hpp"

namespace drbm {

struct ExponentialTerm {
  double coefficient;
  double rate;
};

enum class DensityKind { ExponentialSum, ThetaOperator };

// Density of the boundary measure nu_i, from inverting the closed-form phi_i.
// Supported: gamma a negative integer (sum of exponentials); gamma a positive
// integer, gamma1 and gamma2 both positive integers, and the r = -1 regimes
// with a rational decoupling (theta series under a polynomial operator).
// Throws UnsupportedCase otherwise.
class BoundaryDensity {
 public:
  BoundaryDensity(const ModelParams& params, Axis axis);

  // nu_i at a raw argument v > 0.
  double operator()(double v) const;
  // Density of the normalized problem.
  double normalized(double v) const;

  DensityKind kind() const { return kind_; }
  // ExponentialSum: normalized nu = sum c e^{-rate v}, rates increasing.
  const std::vector<ExponentialTerm>& terms() const { return terms_; }
  // ThetaOperator: normalized nu = normalization * P(-d/dv) theta(v).
  const std::optional<ThetaSeries>& series() const { return series_; }
  double normalization() const { return normalization_; }
  // Exponential decay rate of the normalized density.
  double decay_rate() const { return decay_rate_; }
  // Same for the raw density.
  double raw_decay_rate() const;
  // Total mass of the raw density, phi_i(0).
  double mass() const;
  const TransformEvaluator& transform() const { return transform_; }

 private:
  TransformEvaluator transform_;
  DensityKind kind_ = DensityKind::ExponentialSum;
  std::vector<ExponentialTerm> terms_;
  std::optional<ThetaSeries> series_;
  double normalization_ = 1.0;
  double decay_rate_ = 0.0;
};

// int_0^inf e^{y v} f(v) dv by Gauss-Kronrod over consecutive panels, up to
// 200 / (decay_rate - Re y). Throws NonConvergence if the tail is still
// significant there.
Complex laplace_quadrature(const std::function<double(double)>& f, Complex y, double decay_rate,
                           double rel_tol = 1e-10);

}  // namespace drbm
