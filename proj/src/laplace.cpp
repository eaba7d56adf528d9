#include "drbm/laplace.hpp"

#include <cmath>
#include <numbers>
#include <optional>
#include <random>

#include "drbm/error.hpp"

namespace drbm {

namespace {

using std::numbers::pi;

constexpr double kBranchRadius = 1e-14;
constexpr double kBranchStep = 1e-3;

// Case formulas as numerator / denominator, so that removable 0/0 points can
// be detected and bridged.
struct Ratio {
  Complex num;
  Complex den;
};

constexpr double kRemovable = 1e-7;

Complex resolve(const Ratio& r) {
  if (std::abs(r.den) < kPoleThreshold) {
    throw Error(ErrorCode::PoleOfPhi, "boundary transform evaluated at a pole");
  }
  return r.num / r.den;
}

// Evaluates f at `at`; where numerator and denominator both (nearly) vanish,
// or a Gamma factor sits on a cancelled pole, uses the 4-point average
// f(at +- h), f(at +- ih), whose error is O(h^4) for analytic f.
template <class F>
Complex evaluate_removable(F&& f, Complex at) {
  try {
    const Ratio r = f(at);
    if (std::abs(r.den) >= kRemovable || std::abs(r.num) >= kRemovable) return resolve(r);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::PoleOfD && e.code() != ErrorCode::PoleOfGamma) throw;
  }
  const Complex h{kBranchStep};
  const Complex ih{0.0, kBranchStep};
  return 0.25 * (resolve(f(at + h)) + resolve(f(at - h)) + resolve(f(at + ih)) +
                 resolve(f(at - ih)));
}

Complex sin_pi(Complex z) { return std::sin(pi * z); }
Complex cos_pi(Complex z) { return std::cos(pi * z); }

SignPattern sign_pattern(const SurfaceContext& ctx) {
  const double s1 = *ctx.s1;
  const double s2 = *ctx.s2;
  if (s1 < 0.0 && s2 > 0.0) return SignPattern::NegPos;
  if (s1 < 0.0 && s2 < 0.0) return SignPattern::NegNeg;
  if (s1 > 0.0 && s2 > 0.0) return SignPattern::PosPos;
  throw Error(ErrorCode::InternalInvariant, "s1 > 0 > s2 cannot occur under H1-H3");
}

Ratio general_formula(Complex s, SignPattern signs, const SurfaceContext& ctx) {
  const double s1 = *ctx.s1;
  const double s2 = *ctx.s2;
  const double mu2 = ctx.mu2;
  const Complex d = decoupling_gamma(s, ctx);
  switch (signs) {
    case SignPattern::NegPos:
      return {d, sin_pi(s + s1 + mu2) * sin_pi(s - s2)};
    case SignPattern::NegNeg:
      return {d * sin_pi(s + s2 + mu2), sin_pi(s + s1 + mu2)};
    case SignPattern::PosPos:
      return {d * sin_pi(s - s1), sin_pi(s - s2)};
  }
  return {};
}

// D for the r = -1 regimes: the rational form when it exists, else Gamma quotients.
Complex appendix_decoupling(Complex s, const TransformCase& c, const SurfaceContext& ctx) {
  if (c.decoupling) return (*c.decoupling)(s, ctx);
  return decoupling_gamma(s, ctx);
}

}  // namespace

std::string to_string(const TransformCase& c) {
  switch (c.tag) {
    case TransformTag::RationalCase: return "RationalCase";
    case TransformTag::GammaPosIntCase: return "GammaPosIntCase";
    case TransformTag::Gamma12Case: return "Gamma12Case/" + std::to_string(c.subcase);
    case TransformTag::GeneralCase:
      switch (c.signs) {
        case SignPattern::NegPos: return "GeneralCase/NegPos";
        case SignPattern::NegNeg: return "GeneralCase/NegNeg";
        case SignPattern::PosPos: return "GeneralCase/PosPos";
      }
      break;
    case TransformTag::R1MinusOne: return c.natural ? "R1MinusOne/natural" : "R1MinusOne";
    case TransformTag::R2MinusOne: return c.natural ? "R2MinusOne/natural" : "R2MinusOne";
  }
  return "unknown";
}

TransformCase build_case(const DerivedConstants& consts) {
  TransformCase c;
  c.decoupling = decoupling_rational(consts);
  if (consts.r1_is_minus_one()) {
    c.tag = TransformTag::R1MinusOne;
    c.natural = c.decoupling.has_value();
    c.odd = c.natural && is_odd_integer(*consts.gamma2);
    return c;
  }
  if (consts.r2_is_minus_one()) {
    c.tag = TransformTag::R2MinusOne;
    c.natural = c.decoupling.has_value();
    c.odd = c.natural && is_odd_integer(*consts.gamma1);
    return c;
  }
  c.signs = sign_pattern(SurfaceContext::from(consts));
  if (!c.decoupling) {
    c.tag = TransformTag::GeneralCase;
    return c;
  }
  switch (c.decoupling->which) {
    case RationalDecouplingCase::GammaNegInt: c.tag = TransformTag::RationalCase; break;
    case RationalDecouplingCase::GammaPosInt: c.tag = TransformTag::GammaPosIntCase; break;
    case RationalDecouplingCase::Gamma1NegGamma2Pos:
    case RationalDecouplingCase::Gamma1PosGamma2Neg:
      c.tag = TransformTag::Gamma12Case;
      c.subcase = c.decoupling->epsilon < 0 ? 1 : 2;
      break;
    case RationalDecouplingCase::BothGammaPos:
      c.tag = TransformTag::Gamma12Case;
      c.subcase = 3;
      break;
    default: throw Error(ErrorCode::InternalInvariant, "r = -1 decoupling in the generic regime");
  }
  return c;
}

Complex phi1_general_formula_s(Complex s, const SurfaceContext& ctx) {
  if (!ctx.s1 || !ctx.s2) {
    throw Error(ErrorCode::UnsupportedCase, "general formula needs r1, r2 != -1");
  }
  const SignPattern signs = sign_pattern(ctx);
  return evaluate_removable([&](Complex t) { return general_formula(t, signs, ctx); }, s);
}

namespace {

Ratio ratio_s(Complex s, const TransformCase& c, const SurfaceContext& ctx) {
  switch (c.tag) {
    case TransformTag::RationalCase: return {1.0, c.decoupling->q(y_of(s, ctx))};
    case TransformTag::GammaPosIntCase: {
      const double g1 = ctx.mu1 - 2.0 * *ctx.s1;
      return {c.decoupling->p(y_of(s, ctx)), cos_pi(2.0 * s - ctx.mu1) - std::cos(pi * g1)};
    }
    case TransformTag::Gamma12Case: {
      const Complex d = (*c.decoupling)(s, ctx);
      const Complex t = s - ctx.s_minus;
      if (c.subcase == 1) return {d * cos_pi(t), sin_pi(t)};
      if (c.subcase == 2) return {d * sin_pi(t), cos_pi(t)};
      return {d, sin_pi(2.0 * (s - ctx.s_plus))};
    }
    case TransformTag::GeneralCase: return general_formula(s, c.signs, ctx);
    case TransformTag::R1MinusOne: return {appendix_decoupling(s, c, ctx), sin_pi(s - *ctx.s2)};
    case TransformTag::R2MinusOne:
      return {appendix_decoupling(s, c, ctx), sin_pi(s + *ctx.s1 + ctx.mu2)};
  }
  return {0.0, 1.0};
}

// Empty when the case has no entire-function form in y.
std::optional<Ratio> ratio_y(Complex y, const TransformCase& c, const SurfaceContext& ctx) {
  const Complex z = 2.0 * y + ctx.mu1 * ctx.mu1;
  const Complex quarter = 0.25 * pi * pi * z;
  const Complex half_sinc = 0.5 * pi * sinc_sqrt(quarter);
  switch (c.tag) {
    case TransformTag::RationalCase: return Ratio{1.0, c.decoupling->q(y)};
    case TransformTag::GammaPosIntCase: {
      const double g1 = ctx.mu1 - 2.0 * *ctx.s1;
      return Ratio{c.decoupling->p(y), cos_sqrt(pi * pi * z) - std::cos(pi * g1)};
    }
    case TransformTag::Gamma12Case: {
      const Complex p = c.decoupling->p(y);
      const Complex q = c.decoupling->q(y);
      if (c.subcase == 1) return Ratio{p * half_sinc, q * cos_sqrt(quarter)};
      if (c.subcase == 2) return Ratio{p * cos_sqrt(quarter), q * half_sinc};
      return Ratio{p, pi * sinc_sqrt(pi * pi * z)};
    }
    case TransformTag::R1MinusOne:
    case TransformTag::R2MinusOne:
      if (!c.natural) return std::nullopt;
      return Ratio{c.decoupling->p(y),
                   c.odd == (c.tag == TransformTag::R1MinusOne) ? half_sinc : cos_sqrt(quarter)};
    case TransformTag::GeneralCase: return std::nullopt;
  }
  return std::nullopt;
}

}  // namespace

Complex phi1_unnormalized_s(Complex s, const TransformCase& c, const SurfaceContext& ctx) {
  return evaluate_removable([&](Complex t) { return ratio_s(t, c, ctx); }, s);
}

Complex phi1_unnormalized_y(Complex y, const TransformCase& c, const SurfaceContext& ctx) {
  if (ratio_y(Complex{}, c, ctx)) {
    return evaluate_removable([&](Complex t) { return *ratio_y(t, c, ctx); }, y);
  }
  // Through the s-plane; phi1 is even in sqrt(z), so near the branch point
  // an even-symmetric average removes the ambiguity.
  const Complex z = 2.0 * y + ctx.mu1 * ctx.mu1;
  auto at = [&](Complex root) { return phi1_unnormalized_s(0.5 * (ctx.mu1 + root), c, ctx); };
  if (std::abs(z) < kBranchRadius) {
    const Complex h{kBranchStep};
    const Complex ih{0.0, kBranchStep};
    return 0.25 * (at(h) + at(-h) + at(ih) + at(-ih));
  }
  return at(std::sqrt(z));
}

bool near_special_configuration(const SurfaceContext& ctx) {
  auto near_int = [](double v) { return std::abs(v - std::round(v)) < 1e-10; };
  bool flagged = false;
  if (ctx.s1 && *ctx.s1 <= 1e-10 && near_int(*ctx.s1)) flagged = true;
  if (ctx.s2 && *ctx.s2 - ctx.mu1 >= 1.0 - 1e-10 && near_int(*ctx.s2 - ctx.mu1)) flagged = true;
  return flagged;
}

TransformEvaluator::TransformEvaluator(const ModelParams& params, Axis axis) : axis_(axis) {
  params_ = normalize(params);
  if (axis == Axis::Phi2) params_ = swap_axes(params_);
  consts_ = derive(params_);
  ctx_ = SurfaceContext::from(consts_);
  case_ = build_case(consts_);

  const double target = boundary_mass();
  norm_y_ = target / phi1_unnormalized_y(Complex{0.0}, case_, ctx_).real();

  // y = 0 corresponds to s = mu1.
  norm_s_ = target / phi1_unnormalized_s(Complex{ctx_.mu1}, case_, ctx_).real();
}

double TransformEvaluator::boundary_mass() const {
  return to_float(boundary_mass1(params_.as_model()));
}

Complex TransformEvaluator::normalized(Complex y) const {
  return norm_y_ * phi1_unnormalized_y(y, case_, ctx_);
}

Complex TransformEvaluator::normalized_s(Complex s) const {
  return norm_s_ * phi1_unnormalized_s(s, case_, ctx_);
}

Complex TransformEvaluator::operator()(Complex arg) const {
  const double q = to_float(params_.scale.q);
  const double own = to_float(params_.scale.sigma1);
  const double other = to_float(params_.scale.sigma2);
  return q * own * normalized(other * arg / q);
}

Transforms::Transforms(const ModelParams& params)
    : params_(params), phi1_(params, Axis::Phi1), phi2_(params, Axis::Phi2) {}

Complex Transforms::bivariate(Complex x, Complex y) const {
  if (x == Complex{} && y == Complex{}) return 1.0;
  const Complex k = kernel(x, y, params_);
  if (std::abs(k) < kPoleThreshold) {
    throw Error(ErrorCode::OnKernelZeroSet, "K(x, y) = 0 away from the origin");
  }
  return -(k1(x, y, params_) * phi1(y) + k2(x, y, params_) * phi2(x)) / k;
}

double consistency_check(const DerivedConstants& consts) {
  if (consts.r1_is_minus_one() || consts.r2_is_minus_one()) {
    throw Error(ErrorCode::UnsupportedCase, "consistency check needs r1, r2 != -1");
  }
  const TransformCase special = build_case(consts);
  if (special.tag == TransformTag::GeneralCase) {
    throw Error(ErrorCode::UnsupportedCase, "consistency check needs a rational decoupling");
  }
  const SurfaceContext ctx = SurfaceContext::from(consts);
  std::mt19937_64 rng(20240601);
  std::uniform_real_distribution<double> re(ctx.s_minus, ctx.s_plus);
  std::uniform_real_distribution<double> im(0.2, 1.5);
  std::vector<Complex> ratios;
  int attempts = 0;
  while (ratios.size() < 50) {
    if (++attempts > 1000) throw Error(ErrorCode::NonConvergence, "no regular sample points");
    const Complex s{re(rng), im(rng)};
    try {
      ratios.push_back(phi1_general_formula_s(s, ctx) / phi1_unnormalized_s(s, special, ctx));
    } catch (const Error&) {
    }
  }
  double worst = 0.0;
  for (const Complex& r : ratios) worst = std::max(worst, std::abs(r / ratios.front() - 1.0));
  return worst;
}

}  // namespace drbm
