#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "drbm/model.hpp"
#include "drbm/surface.hpp"

namespace drbm {

// Principal-branch log Gamma: reflection for Re z < 1/2, upward shift and
// Stirling series otherwise. Throws PoleOfGamma at non-positive integers.
Complex log_gamma(Complex z);

// cos(sqrt z) and sin(sqrt z)/sqrt z as entire functions of z.
Complex cos_sqrt(Complex z);
Complex sinc_sqrt(Complex z);

// Real polynomial; when built from roots it also evaluates in product form,
// which is better conditioned near the roots.
class Polynomial {
 public:
  Polynomial() : coefficients_{1.0} {}
  explicit Polynomial(std::vector<double> ascending) : coefficients_(std::move(ascending)) {}
  static Polynomial from_roots(std::vector<double> roots);

  Complex operator()(Complex y) const;
  double operator()(double y) const { return (*this)(Complex{y}).real(); }

  std::size_t degree() const { return coefficients_.size() - 1; }
  std::span<const double> coefficients() const { return coefficients_; }
  // Empty unless built with from_roots.
  std::span<const double> roots() const { return roots_; }

 private:
  std::vector<double> coefficients_;
  std::vector<double> roots_;
};

// Gamma-quotient decoupling function. Dispatches on the parameter regime:
//   generic:  Gamma(s-s1) Gamma(s+s2+mu2) / (Gamma(s-s2) Gamma(s+s1+mu2))
//   r1 = -1:  Gamma(s+s2+mu2) / Gamma(s-s2)
//   r2 = -1:  Gamma(s-s1) / Gamma(s+s1+mu2)
// Throws PoleOfD when any Gamma argument sits on a pole.
Complex decoupling_gamma(Complex s, const SurfaceContext& ctx);

enum class RationalDecouplingCase {
  GammaNegInt,       // (a)
  GammaPosInt,       // (b)
  Gamma1NegGamma2Pos,  // (c)
  Gamma1PosGamma2Neg,  // (d)
  BothGammaPos,      // (e)
  R1MinusOne,        // r1 = -1, gamma2 a positive integer
  R2MinusOne,        // r2 = -1, gamma1 a positive integer
};

// prefactor * P(y(s)) / Q(y(s)) * (sqrt2 (s - s_plus))^epsilon
struct RationalDecoupling {
  RationalDecouplingCase which;
  Polynomial p;
  Polynomial q;
  int epsilon = 0;
  double prefactor = 1.0;

  Complex operator()(Complex s, const SurfaceContext& ctx) const;
};

// Empty exactly when no rational decoupling exists.
std::optional<RationalDecoupling> decoupling_rational(const DerivedConstants& consts);

// y(a) for a rational point a, evaluated in floating point.
double y_at(const Rational& a, const DerivedConstants& consts);

}  // namespace drbm
