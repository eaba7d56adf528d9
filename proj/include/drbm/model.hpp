#pragma once

#include <optional>
#include <string>
#include <vector>

#include "drbm/rational.hpp"

namespace drbm {

// Drift is -mu; sigma1, sigma2 scale the single Brownian driver so that the
// kernel reads (sigma1 x - sigma2 y)^2 - 2 mu1 x - 2 mu2 y.
struct ModelParams {
  Rational mu1{1, 2};
  Rational mu2{1, 2};
  Rational sigma1{1};
  Rational sigma2{1};
  Rational r1{0};
  Rational r2{0};

  friend bool operator==(const ModelParams&, const ModelParams&) = default;
};

struct HypothesisFailure {
  std::string hypothesis;  // "H1", "H2", "H3" or "sigma"
  std::string detail;      // the violated inequality with its value
};

struct ValidationReport {
  bool existence = false;   // H1
  bool recurrence = false;  // H2
  bool negative_drift = false;  // H3
  bool positive_scales = false;
  std::vector<HypothesisFailure> failures;

  bool passed() const { return failures.empty(); }
};

ValidationReport validate(const ModelParams& params);

struct ScaleRecord {
  Rational q{1};
  Rational sigma1{1};
  Rational sigma2{1};
};

// sigma1 = sigma2 = 1 and mu1 + mu2 = 1.
struct NormalizedParams {
  Rational mu1{1, 2};
  Rational mu2{1, 2};
  Rational r1{0};
  Rational r2{0};
  ScaleRecord scale{};

  ModelParams as_model() const { return {mu1, mu2, Rational{1}, Rational{1}, r1, r2}; }
  friend bool operator==(const NormalizedParams&, const NormalizedParams&) = default;
};

// Throws Error(Config) for non-positive sigma, Error(Hypothesis) if validate fails.
NormalizedParams normalize(const ModelParams& params);

// Exchanges the roles of the two coordinates (mu1 <-> mu2, r1 <-> r2); the
// result describes phi2 as a "phi1" problem.
NormalizedParams swap_axes(const NormalizedParams& params);

struct DerivedConstants {
  Rational mu1;
  Rational mu2;
  Rational r1;
  Rational r2;
  std::optional<Rational> s1;  // absent when r1 = -1
  std::optional<Rational> s2;  // absent when r2 = -1
  Rational s_minus;
  Rational s_plus;
  std::optional<Rational> gamma;
  std::optional<Rational> gamma1;
  std::optional<Rational> gamma2;

  bool r1_is_minus_one() const { return !s1.has_value(); }
  bool r2_is_minus_one() const { return !s2.has_value(); }
};

// Throws Error(InternalInvariant) if a structural constraint on s1, s2 or the
// gammas fails; that cannot happen for parameters that passed validate.
DerivedConstants derive(const NormalizedParams& params);

enum class Verdict { Rational, DAlgebraicNotDFinite, DTranscendental };

enum class Trigger {
  GammaNegInt,
  GammaPosInt,
  Gamma12Int,
  R1MinusOneGamma2Nat,
  R2MinusOneGamma1Nat,
  NoDecoupling,
};

struct NatureClass {
  Verdict verdict;
  Trigger trigger;
  friend bool operator==(const NatureClass&, const NatureClass&) = default;
};

NatureClass classify(const DerivedConstants& consts);

std::string to_string(Verdict verdict);
std::string to_string(Trigger trigger);

// phi1(0) and phi2(0) for the given parameters (depends only on mu and r).
Rational boundary_mass1(const ModelParams& params);
Rational boundary_mass2(const ModelParams& params);

}  // namespace drbm
