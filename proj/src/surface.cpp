#include "drbm/surface.hpp"

#include <cmath>
#include <numbers>

#include "drbm/error.hpp"

namespace drbm {

namespace {

using std::numbers::pi;

void guard_pole(Complex s, double pole, ErrorCode code) {
  if (std::abs(s - pole) < kPoleThreshold) {
    throw Error(code, "argument within 1e-12 of pole at " + std::to_string(pole));
  }
}

}  // namespace

SurfaceContext SurfaceContext::from(const DerivedConstants& c) {
  SurfaceContext ctx;
  ctx.mu1 = to_float(c.mu1);
  ctx.mu2 = to_float(c.mu2);
  ctx.r1 = to_float(c.r1);
  ctx.r2 = to_float(c.r2);
  if (c.s1) ctx.s1 = to_float(*c.s1);
  if (c.s2) ctx.s2 = to_float(*c.s2);
  ctx.s_minus = to_float(c.s_minus);
  ctx.s_plus = to_float(c.s_plus);
  return ctx;
}

Complex kernel(Complex x, Complex y, const SurfaceContext& ctx) {
  const Complex d = x - y;
  return d * d - 2.0 * ctx.mu1 * x - 2.0 * ctx.mu2 * y;
}

Complex k1(Complex x, Complex y, const SurfaceContext& ctx) { return x + ctx.r1 * y; }
Complex k2(Complex x, Complex y, const SurfaceContext& ctx) { return y + ctx.r2 * x; }

Complex kernel(Complex x, Complex y, const ModelParams& p) {
  const Complex d = to_float(p.sigma1) * x - to_float(p.sigma2) * y;
  return d * d - 2.0 * to_float(p.mu1) * x - 2.0 * to_float(p.mu2) * y;
}

Complex k1(Complex x, Complex y, const ModelParams& p) { return x + to_float(p.r1) * y; }
Complex k2(Complex x, Complex y, const ModelParams& p) { return y + to_float(p.r2) * x; }

Complex x_of(Complex s, const SurfaceContext& ctx) { return 2.0 * s * (s + ctx.mu2); }
Complex y_of(Complex s, const SurfaceContext& ctx) { return 2.0 * s * (s - ctx.mu1); }

std::pair<Complex, Complex> uniformize(Complex s, const SurfaceContext& ctx) {
  return {x_of(s, ctx), y_of(s, ctx)};
}

Complex step_coefficient(Complex s, const SurfaceContext& ctx) {
  if (!ctx.s1 || !ctx.s2) {
    throw Error(ErrorCode::InternalInvariant, "step_coefficient needs r1, r2 != -1");
  }
  const double s1 = *ctx.s1;
  const double s2 = *ctx.s2;
  guard_pole(s, s2, ErrorCode::PoleOfG);
  guard_pole(s, -s1 - ctx.mu2, ErrorCode::PoleOfG);
  return (s - s1) * (s + s2 + ctx.mu2) / ((s - s2) * (s + s1 + ctx.mu2));
}

Complex step_coefficient_r1_minus_one(Complex s, const SurfaceContext& ctx) {
  if (!ctx.s2 || ctx.s1) {
    throw Error(ErrorCode::InternalInvariant, "step_coefficient_r1_minus_one needs r1 = -1");
  }
  const double s2 = *ctx.s2;
  guard_pole(s, s2, ErrorCode::PoleOfG);
  return -(s + s2 + ctx.mu2) / (s - s2);
}

Complex step_coefficient_r2_minus_one(Complex s, const SurfaceContext& ctx) {
  if (!ctx.s1 || ctx.s2) {
    throw Error(ErrorCode::InternalInvariant, "step_coefficient_r2_minus_one needs r2 = -1");
  }
  const double s1 = *ctx.s1;
  guard_pole(s, -s1 - ctx.mu2, ErrorCode::PoleOfG);
  return -(s - s1) / (s + s1 + ctx.mu2);
}

Complex difference_coefficient(Complex s, const SurfaceContext& ctx) {
  if (!ctx.s1) return step_coefficient_r1_minus_one(s, ctx);
  if (!ctx.s2) return step_coefficient_r2_minus_one(s, ctx);
  return step_coefficient(s, ctx);
}

Complex difference_coefficient_from_kernel(Complex s, const SurfaceContext& ctx) {
  const auto [x, y] = uniformize(s, ctx);
  const auto [xz, yz] = uniformize(zeta(s, ctx), ctx);
  return k1(x, y, ctx) * k2(xz, yz, ctx) / (k2(x, y, ctx) * k1(xz, yz, ctx));
}

Complex gluing_w1(Complex s, const SurfaceContext& ctx) {
  const Complex t = s + ctx.mu2;
  if (std::abs(t - std::round(t.real())) < kPoleThreshold) {
    throw Error(ErrorCode::PoleOfW1, "s + mu2 is an integer");
  }
  return std::tan(pi * (t - 0.5));
}

Complex gluing_w2(Complex s, const SurfaceContext& ctx) {
  return std::cos(2.0 * pi * (s - ctx.s_minus));
}

Complex inverse_w1(Complex w, const SurfaceContext& ctx) {
  return 0.5 - ctx.mu2 + std::atan(w) / pi;
}

Complex inverse_w2(Complex w, const SurfaceContext& ctx) {
  const Complex i{0.0, 1.0};
  return ctx.s_minus + std::log(w + i * std::sqrt(1.0 - w * w)) / (2.0 * i * pi);
}

DomainFlags domain_membership(Complex s, const SurfaceContext& ctx) {
  DomainFlags flags;
  flags.in_delta_x = x_of(s, ctx).real() < 0.0;
  flags.in_delta_y = y_of(s, ctx).real() < 0.0;
  flags.in_b1 = -ctx.mu2 < s.real() && s.real() < ctx.mu1;
  flags.in_b2 = ctx.s_minus < s.real() && s.real() < ctx.s_plus;
  return flags;
}

Interval delta_x_bounds(double b, const SurfaceContext& ctx) {
  const double r = std::hypot(ctx.s_minus, b);
  return {ctx.s_minus - r, ctx.s_minus + r};
}

Interval delta_y_bounds(double b, const SurfaceContext& ctx) {
  const double r = std::hypot(ctx.s_plus, b);
  return {ctx.s_plus - r, ctx.s_plus + r};
}

}  // namespace drbm
