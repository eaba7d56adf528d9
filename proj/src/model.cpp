#include "drbm/model.hpp"

#include "drbm/error.hpp"

namespace drbm {

namespace {

const Rational kZero{0};
const Rational kOne{1};

std::string show(const Rational& q) { return format_rational(q); }

}  // namespace

ValidationReport validate(const ModelParams& p) {
  ValidationReport report;
  const Rational det = kOne - p.r1 * p.r2;
  report.existence = det > kZero || (p.r1 > kZero && p.r2 > kZero);
  if (!report.existence) {
    report.failures.push_back(
        {"H1", "1 - r1*r2 = " + show(det) + " <= 0 and not (r1 > 0 and r2 > 0)"});
  }
  const Rational rec1 = p.mu1 - p.r2 * p.mu2;
  const Rational rec2 = p.mu2 - p.r1 * p.mu1;
  report.recurrence = rec1 > kZero && rec2 > kZero;
  if (rec1 <= kZero) report.failures.push_back({"H2", "mu1 - r2*mu2 = " + show(rec1) + " <= 0"});
  if (rec2 <= kZero) report.failures.push_back({"H2", "mu2 - r1*mu1 = " + show(rec2) + " <= 0"});
  report.negative_drift = p.mu1 > kZero && p.mu2 > kZero;
  if (p.mu1 <= kZero) report.failures.push_back({"H3", "mu1 = " + show(p.mu1) + " <= 0"});
  if (p.mu2 <= kZero) report.failures.push_back({"H3", "mu2 = " + show(p.mu2) + " <= 0"});
  report.positive_scales = p.sigma1 > kZero && p.sigma2 > kZero;
  if (p.sigma1 <= kZero) report.failures.push_back({"sigma", "sigma1 = " + show(p.sigma1) + " <= 0"});
  if (p.sigma2 <= kZero) report.failures.push_back({"sigma", "sigma2 = " + show(p.sigma2) + " <= 0"});
  return report;
}

NormalizedParams normalize(const ModelParams& p) {
  if (p.sigma1 <= kZero || p.sigma2 <= kZero) {
    throw Error(ErrorCode::Config, "sigma1 and sigma2 must be positive");
  }
  const auto report = validate(p);
  if (!report.passed()) {
    const auto& first = report.failures.front();
    throw Error(ErrorCode::Hypothesis, first.hypothesis + " violated: " + first.detail);
  }
  const Rational q = p.mu1 / p.sigma1 + p.mu2 / p.sigma2;
  NormalizedParams n;
  n.mu1 = p.mu1 / (p.sigma1 * q);
  n.mu2 = p.mu2 / (p.sigma2 * q);
  n.r1 = p.r1 * p.sigma1 / p.sigma2;
  n.r2 = p.r2 * p.sigma2 / p.sigma1;
  n.scale = {q, p.sigma1, p.sigma2};
  return n;
}

NormalizedParams swap_axes(const NormalizedParams& p) {
  NormalizedParams s;
  s.mu1 = p.mu2;
  s.mu2 = p.mu1;
  s.r1 = p.r2;
  s.r2 = p.r1;
  s.scale = {p.scale.q, p.scale.sigma2, p.scale.sigma1};
  return s;
}

DerivedConstants derive(const NormalizedParams& p) {
  DerivedConstants c;
  c.mu1 = p.mu1;
  c.mu2 = p.mu2;
  c.r1 = p.r1;
  c.r2 = p.r2;
  c.s_minus = -p.mu2 / 2;
  c.s_plus = p.mu1 / 2;
  if (p.r1 != Rational{-1}) {
    c.s1 = (p.r1 * p.mu1 - p.mu2) / (kOne + p.r1);
    c.gamma1 = p.mu1 - 2 * *c.s1;
  }
  if (p.r2 != Rational{-1}) {
    c.s2 = (p.mu1 - p.r2 * p.mu2) / (kOne + p.r2);
    c.gamma2 = p.mu2 + 2 * *c.s2;
  }
  if (c.s1 && c.s2) c.gamma = *c.s2 - *c.s1;

  auto fail = [](const std::string& what) { throw Error(ErrorCode::InternalInvariant, what); };
  if (c.s1 && *c.s1 >= kZero && *c.s1 <= p.mu1) fail("s1 lies in [0, mu1]");
  if (c.s2 && *c.s2 >= -p.mu2 && *c.s2 <= kZero) fail("s2 lies in [-mu2, 0]");
  if (c.gamma1 && *c.gamma1 == kZero) fail("gamma1 = 0");
  if (c.gamma2 && *c.gamma2 == kZero) fail("gamma2 = 0");
  if (c.gamma) {
    if (*c.gamma == kZero) fail("gamma = 0");
    if (*c.gamma1 < kZero && *c.gamma2 < kZero) fail("gamma1 < 0 and gamma2 < 0");
    if (*c.gamma1 + *c.gamma2 != 2 * *c.gamma + 1) fail("gamma1 + gamma2 != 2 gamma + 1");
    if (*c.gamma > kZero && (*c.gamma1 < kZero || *c.gamma2 < kZero)) {
      fail("gamma > 0 with a negative gamma_i");
    }
  }
  if (!c.s1 && *c.gamma2 <= kZero) fail("r1 = -1 requires gamma2 > 0");
  if (!c.s2 && *c.gamma1 <= kZero) fail("r2 = -1 requires gamma1 > 0");
  return c;
}

NatureClass classify(const DerivedConstants& c) {
  if (c.r1_is_minus_one()) {
    return is_positive_integer(*c.gamma2)
               ? NatureClass{Verdict::DAlgebraicNotDFinite, Trigger::R1MinusOneGamma2Nat}
               : NatureClass{Verdict::DTranscendental, Trigger::NoDecoupling};
  }
  if (c.r2_is_minus_one()) {
    return is_positive_integer(*c.gamma1)
               ? NatureClass{Verdict::DAlgebraicNotDFinite, Trigger::R2MinusOneGamma1Nat}
               : NatureClass{Verdict::DTranscendental, Trigger::NoDecoupling};
  }
  if (is_negative_integer(*c.gamma)) return {Verdict::Rational, Trigger::GammaNegInt};
  if (is_positive_integer(*c.gamma)) return {Verdict::DAlgebraicNotDFinite, Trigger::GammaPosInt};
  if (is_integer(*c.gamma1) && is_integer(*c.gamma2)) {
    return {Verdict::DAlgebraicNotDFinite, Trigger::Gamma12Int};
  }
  return {Verdict::DTranscendental, Trigger::NoDecoupling};
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::Rational: return "Rational";
    case Verdict::DAlgebraicNotDFinite: return "DAlgebraicNotDFinite";
    case Verdict::DTranscendental: return "DTranscendental";
  }
  return "?";
}

std::string to_string(Trigger trigger) {
  switch (trigger) {
    case Trigger::GammaNegInt: return "GammaNegInt";
    case Trigger::GammaPosInt: return "GammaPosInt";
    case Trigger::Gamma12Int: return "Gamma12Int";
    case Trigger::R1MinusOneGamma2Nat: return "R1MinusOneGamma2Nat";
    case Trigger::R2MinusOneGamma1Nat: return "R2MinusOneGamma1Nat";
    case Trigger::NoDecoupling: return "NoDecoupling";
  }
  return "?";
}

Rational boundary_mass1(const ModelParams& p) {
  return 2 * (p.mu1 - p.r2 * p.mu2) / (kOne - p.r1 * p.r2);
}

Rational boundary_mass2(const ModelParams& p) {
  return 2 * (p.mu2 - p.r1 * p.mu1) / (kOne - p.r1 * p.r2);
}

}  // namespace drbm
