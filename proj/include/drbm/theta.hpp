#pragma once

#include <utility>
#include <vector>

#include "drbm/specfun.hpp"

namespace drbm {

enum class ThetaKind {
  ThetaA,           // sum (n + g1/2) q^(((2n + g1)^2 - mu1^2)/2)
  ThetaB,           // sum (-1)^n n^2 q^((n^2 - mu1^2)/2)
  EvenAlternating,  // sum (-1)^n q^((4n^2 - mu1^2)/2)
  QuarterOdd,       // sum (4n + 1) q^(((4n + 1)^2 - mu1^2)/2)
  // d/dgamma1 of ThetaA at an integer gamma1, where ThetaA itself vanishes:
  // sum (1 - v u^2) q^((u^2 - mu1^2)/2) / 2,  u = 2n + gamma1.
  ThetaAInteger,
};

enum class ThetaRepresentation { Direct, PoissonSummed, Auto };

// T(v) = scale * sum_n sign^n u_n^power exp(-v (u_n^2 - mu1^2)/2),  u_n = alpha n + beta,
// evaluated at q = e^{-v}. Optionally the operator P(-d/dv) is applied, with
// P given by its real roots; on the direct side it multiplies each term by
// P(rate_n), on the Poisson side it differentiates the dual terms exactly.
class ThetaSeries {
 public:
  static ThetaSeries theta_a(double gamma1, double mu1);
  static ThetaSeries theta_b(double mu1);
  static ThetaSeries even_alternating(double mu1);
  static ThetaSeries quarter_odd(double mu1);
  static ThetaSeries theta_a_integer(long gamma1, double mu1);

  ThetaSeries with_operator(std::vector<double> roots) const;
  ThetaSeries with_tolerance(double tol) const;

  double operator()(double v, ThetaRepresentation rep = ThetaRepresentation::Auto) const;
  double direct(double v) const;
  double poisson(double v) const;
  // Sum of |terms| on the direct side; rounding in direct() is a few ulps of this.
  double magnitude(double v) const;

  // Laplace transform of the bare series (operator ignored), in closed form.
  Complex laplace(Complex y) const;

  ThetaKind kind() const { return kind_; }
  double rate(long n) const;
  double weight(long n) const;
  // Terms whose rate is a root of P vanish identically.
  bool annihilated(long n) const;
  std::span<const double> operator_roots() const { return roots_; }
  double mu1() const { return mu1_; }

 private:
  ThetaSeries(ThetaKind kind, int sign, double alpha, double beta, int power, double scale,
              double mu1, double gamma1)
      : kind_(kind), sign_(sign), alpha_(alpha), beta_(beta), power_(power), scale_(scale),
        mu1_(mu1), gamma1_(gamma1) {}

  double operator_factor(double rate) const;
  double direct_sum(double v, bool absolute) const;
  // ThetaAInteger term n after the operator, as (A + B v) exp(-rate v).
  std::pair<double, double> integer_coefficients(long n) const;

  ThetaKind kind_;
  int sign_;
  double alpha_;
  double beta_;
  int power_;
  double scale_;
  double mu1_;
  double gamma1_;
  double tol_ = 1e-14;
  std::vector<double> roots_;
};

}  // namespace drbm
