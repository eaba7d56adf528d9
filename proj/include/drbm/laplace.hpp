#pragma once

#include <optional>
#include <string>

#include "drbm/model.hpp"
#include "drbm/specfun.hpp"
#include "drbm/surface.hpp"

namespace drbm {

enum class TransformTag {
  RationalCase,     // gamma a negative integer
  GammaPosIntCase,  // gamma a positive integer
  Gamma12Case,      // gamma1, gamma2 integers, gamma not
  GeneralCase,      // no rational decoupling
  R1MinusOne,
  R2MinusOne,
};

enum class SignPattern { NegPos, NegNeg, PosPos };

struct TransformCase {
  TransformTag tag = TransformTag::GeneralCase;
  int subcase = 0;                      // Gamma12Case: 1, 2 or 3
  SignPattern signs = SignPattern::NegPos;  // sign of (s1, s2), generic regime only
  bool natural = false;                 // R1/R2: the relevant gamma_i is a positive integer
  bool odd = false;                     // R1/R2 with natural: parity of that gamma_i
  std::optional<RationalDecoupling> decoupling;
};

std::string to_string(const TransformCase& c);

TransformCase build_case(const DerivedConstants& consts);

// phi1 on the s-plane up to a constant, per the case formula.
Complex phi1_unnormalized_s(Complex s, const TransformCase& c, const SurfaceContext& ctx);
// The forced no-rational-decoupling formula D(s) * trig(s); valid in every
// regime with r1, r2 != -1.
Complex phi1_general_formula_s(Complex s, const SurfaceContext& ctx);
// phi1 in the y variable up to a constant; entire-function building blocks
// where the case allows, otherwise through s = (mu1 + sqrt(2y + mu1^2))/2.
Complex phi1_unnormalized_y(Complex y, const TransformCase& c, const SurfaceContext& ctx);

enum class Axis { Phi1, Phi2 };

// Closed-form boundary transform with its constant pinned so that the value
// at 0 equals the boundary mass. Accepts raw (non-normalized) parameters.
class TransformEvaluator {
 public:
  TransformEvaluator(const ModelParams& params, Axis axis);

  // phi_i at a raw argument.
  Complex operator()(Complex arg) const;
  // phi1 of the normalized (and, for Phi2, axis-swapped) problem.
  Complex normalized(Complex y) const;
  // Same function on the s-plane, with the same constant.
  Complex normalized_s(Complex s) const;

  const TransformCase& transform_case() const { return case_; }
  const DerivedConstants& constants() const { return consts_; }
  const SurfaceContext& context() const { return ctx_; }
  const NormalizedParams& normalized_params() const { return params_; }
  double norm_constant() const { return norm_y_; }
  double boundary_mass() const;  // value at 0 for the normalized problem
  Axis axis() const { return axis_; }

 private:
  NormalizedParams params_;
  DerivedConstants consts_;
  SurfaceContext ctx_;
  TransformCase case_;
  Axis axis_;
  double norm_y_ = 1.0;
  double norm_s_ = 1.0;
};

class Transforms {
 public:
  explicit Transforms(const ModelParams& params);

  Complex phi1(Complex y) const { return phi1_(y); }
  Complex phi2(Complex x) const { return phi2_(x); }
  // -(k1 phi1 + k2 phi2)/K; exactly 1 at the origin.
  Complex bivariate(Complex x, Complex y) const;

  const TransformEvaluator& evaluator1() const { return phi1_; }
  const TransformEvaluator& evaluator2() const { return phi2_; }
  const ModelParams& params() const { return params_; }

 private:
  ModelParams params_;
  TransformEvaluator phi1_;
  TransformEvaluator phi2_;
};

// Max relative deviation from a constant of the ratio between the forced
// general formula and the special-case formula, over 50 points. Requires a
// rational-decoupling regime with r1, r2 != -1.
double consistency_check(const DerivedConstants& consts);

// True when s1 is within 1e-10 of a non-positive integer or s2 - mu1 of a
// positive one; the generic formulas then rely on removable singularities.
bool near_special_configuration(const SurfaceContext& ctx);

}  // namespace drbm
