#pragma once

#include <complex>
#include <optional>
#include <utility>

#include "drbm/model.hpp"

namespace drbm {

using Complex = std::complex<double>;

inline constexpr double kPoleThreshold = 1e-12;

// Floating view of a normalized parameter set and its derived constants.
struct SurfaceContext {
  double mu1 = 0.5;
  double mu2 = 0.5;
  double r1 = 0.0;
  double r2 = 0.0;
  std::optional<double> s1;
  std::optional<double> s2;
  double s_minus = -0.25;
  double s_plus = 0.25;

  static SurfaceContext from(const DerivedConstants& consts);
};

// Kernel and boundary coefficients in (x, y), under mu1 + mu2 = 1, sigma = 1.
Complex kernel(Complex x, Complex y, const SurfaceContext& ctx);
Complex k1(Complex x, Complex y, const SurfaceContext& ctx);
Complex k2(Complex x, Complex y, const SurfaceContext& ctx);

// Raw-parameter kernel (sigma1 x - sigma2 y)^2 - 2 mu1 x - 2 mu2 y and its
// boundary coefficients; used for non-normalized parameter sets.
Complex kernel(Complex x, Complex y, const ModelParams& params);
Complex k1(Complex x, Complex y, const ModelParams& params);
Complex k2(Complex x, Complex y, const ModelParams& params);

// s -> (x(s), y(s)) = (2s(s + mu2), 2s(s - mu1)).
std::pair<Complex, Complex> uniformize(Complex s, const SurfaceContext& ctx);
Complex x_of(Complex s, const SurfaceContext& ctx);
Complex y_of(Complex s, const SurfaceContext& ctx);

// Involutions fixing x (zeta) and y (eta); eta(zeta(s)) = s + 1.
inline Complex zeta(Complex s, const SurfaceContext& ctx) { return -s - ctx.mu2; }
inline Complex eta(Complex s, const SurfaceContext& ctx) { return -s + ctx.mu1; }

// Coefficient of phi1(s + 1) = G(s) phi1(s), factored form. Requires r1, r2 != -1.
Complex step_coefficient(Complex s, const SurfaceContext& ctx);
// r1 = -1: G(s) = -(s - (s2 - gamma2)) / (s - s2).
Complex step_coefficient_r1_minus_one(Complex s, const SurfaceContext& ctx);
// r2 = -1: G(s) = -(s - s1) / (s + s1 + mu2).
Complex step_coefficient_r2_minus_one(Complex s, const SurfaceContext& ctx);
// Picks whichever of the three applies.
Complex difference_coefficient(Complex s, const SurfaceContext& ctx);
// k1(s) k2(zeta s) / (k2(s) k1(zeta s)) from kernel-coefficient evaluations.
Complex difference_coefficient_from_kernel(Complex s, const SurfaceContext& ctx);

Complex gluing_w1(Complex s, const SurfaceContext& ctx);
Complex gluing_w2(Complex s, const SurfaceContext& ctx);
// Principal-branch inverses; only meant for round-trip checks.
Complex inverse_w1(Complex w, const SurfaceContext& ctx);
Complex inverse_w2(Complex w, const SurfaceContext& ctx);

struct DomainFlags {
  bool in_delta_x = false;  // Re x(s) < 0
  bool in_delta_y = false;  // Re y(s) < 0
  bool in_b1 = false;       // -mu2 < Re s < mu1
  bool in_b2 = false;       // s_minus < Re s < s_plus
};

DomainFlags domain_membership(Complex s, const SurfaceContext& ctx);

// Real-part bounds of Delta_x (f) and Delta_y (g) on the line Im s = b.
struct Interval {
  double lo;
  double hi;
};
Interval delta_x_bounds(double b, const SurfaceContext& ctx);
Interval delta_y_bounds(double b, const SurfaceContext& ctx);

}  // namespace drbm
