#include "drbm/theta.hpp"

#include <cmath>
#include <map>
#include <numbers>

#include "drbm/error.hpp"

namespace drbm {

namespace {

using std::numbers::pi;

constexpr long kMaxTerms = 2'000'000;
constexpr double kSqrt2Pi = 2.5066282746310005024157652848110;

// Laurent polynomial in v with half-integer exponents, keyed by 2*exponent.
using Laurent = std::map<int, double>;

// Applies (-d/dv - root) to L(v) exp(-a/v + b v).
Laurent apply_factor(const Laurent& in, double a, double b, double root) {
  Laurent out;
  for (const auto& [twice_e, c] : in) {
    const double e = 0.5 * twice_e;
    out[twice_e - 2] -= c * e;
    out[twice_e - 4] -= c * a;
    out[twice_e] -= c * (b + root);
  }
  return out;
}

double evaluate(const Laurent& l, double v, double a, double b) {
  const double log_v = std::log(v);
  double sum = 0.0;
  for (const auto& [twice_e, c] : l) {
    if (c == 0.0) continue;
    sum += c * std::exp(0.5 * twice_e * log_v - a / v + b * v);
  }
  return sum;
}

}  // namespace

ThetaSeries ThetaSeries::theta_a(double gamma1, double mu1) {
  return {ThetaKind::ThetaA, +1, 2.0, gamma1, 1, 0.5, mu1, gamma1};
}

ThetaSeries ThetaSeries::theta_b(double mu1) {
  return {ThetaKind::ThetaB, -1, 1.0, 0.0, 2, 1.0, mu1, 0.0};
}

ThetaSeries ThetaSeries::even_alternating(double mu1) {
  return {ThetaKind::EvenAlternating, -1, 2.0, 0.0, 0, 1.0, mu1, 0.0};
}

ThetaSeries ThetaSeries::quarter_odd(double mu1) {
  return {ThetaKind::QuarterOdd, +1, 4.0, 1.0, 1, 1.0, mu1, 0.0};
}

ThetaSeries ThetaSeries::theta_a_integer(long gamma1, double mu1) {
  const double g = static_cast<double>(gamma1);
  return {ThetaKind::ThetaAInteger, +1, 2.0, g, 1, 0.5, mu1, g};
}

ThetaSeries ThetaSeries::with_operator(std::vector<double> roots) const {
  ThetaSeries copy = *this;
  copy.roots_ = std::move(roots);
  return copy;
}

ThetaSeries ThetaSeries::with_tolerance(double tol) const {
  ThetaSeries copy = *this;
  copy.tol_ = tol;
  return copy;
}

double ThetaSeries::rate(long n) const {
  const double u = alpha_ * static_cast<double>(n) + beta_;
  return 0.5 * (u * u - mu1_ * mu1_);
}

double ThetaSeries::weight(long n) const {
  if (kind_ == ThetaKind::ThetaAInteger) return scale_;  // coefficient of v^0
  const double u = alpha_ * static_cast<double>(n) + beta_;
  const double sign = (sign_ < 0 && (n % 2 != 0)) ? -1.0 : 1.0;
  return scale_ * sign * std::pow(u, power_);
}

std::pair<double, double> ThetaSeries::integer_coefficients(long n) const {
  const double u = alpha_ * static_cast<double>(n) + beta_;
  const double lambda = rate(n);
  double a = scale_;
  double b = -scale_ * u * u;
  // (-d/dv - r) maps (A + B v) e^{-lambda v} to ((lambda - r) A - B + (lambda - r) B v) e^{-lambda v}.
  for (double r : roots_) {
    double gap = lambda - r;
    if (std::abs(gap) <= 1e-12 * std::max(1.0, std::abs(lambda))) gap = 0.0;
    a = gap * a - b;
    b = gap * b;
  }
  return {a, b};
}

bool ThetaSeries::annihilated(long n) const {
  if (kind_ == ThetaKind::ThetaAInteger) {
    const auto [a, b] = integer_coefficients(n);
    return a == 0.0 && b == 0.0;
  }
  const double lambda = rate(n);
  for (double r : roots_) {
    if (std::abs(lambda - r) <= 1e-12 * std::max(1.0, std::abs(lambda))) return true;
  }
  return false;
}

double ThetaSeries::operator_factor(double lambda) const {
  double product = 1.0;
  for (double r : roots_) product *= lambda - r;
  return product;
}

double ThetaSeries::operator()(double v, ThetaRepresentation rep) const {
  switch (rep) {
    case ThetaRepresentation::Direct: return direct(v);
    case ThetaRepresentation::PoissonSummed: return poisson(v);
    case ThetaRepresentation::Auto: return v < 1.0 ? poisson(v) : direct(v);
  }
  return direct(v);
}

double ThetaSeries::direct(double v) const { return direct_sum(v, false); }

double ThetaSeries::magnitude(double v) const { return direct_sum(v, true); }

double ThetaSeries::direct_sum(double v, bool absolute) const {
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "theta series needs v > 0");
  const bool integer = kind_ == ThetaKind::ThetaAInteger;
  auto signed_term = [&](long n) {
    const double lambda = rate(n);
    if (integer) {
      const auto [a, b] = integer_coefficients(n);
      return (a + b * v) * std::exp(-v * lambda);
    }
    if (annihilated(n)) return 0.0;
    return weight(n) * operator_factor(lambda) * std::exp(-v * lambda);
  };
  auto term = [&](long n) { return absolute ? std::abs(signed_term(n)) : signed_term(n); };
  // Terms are monotone in |u| once u^2 exceeds (power + 2 deg P + 1)/v.
  const double order = static_cast<double>(power_ + 2 * roots_.size() + 1 + (integer ? 2 : 0));
  const long centre = std::lround(-beta_ / alpha_);
  const long k_min =
      static_cast<long>(std::ceil((std::sqrt(order / v) + std::abs(beta_)) / alpha_)) + 1;
  double total = term(centre);
  int small_run = 0;
  for (long k = 1; k < kMaxTerms; ++k) {
    const double up = term(centre + k);
    const double down = term(centre - k);
    total += up + down;
    const double bound = tol_ * std::max(1.0, std::abs(total));
    if (k >= k_min && std::abs(up) < bound && std::abs(down) < bound) {
      if (++small_run >= 3) return total;
    } else {
      small_run = 0;
    }
  }
  throw Error(ErrorCode::NonConvergence, "direct theta series did not converge");
}

double ThetaSeries::poisson(double v) const {
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "theta series needs v > 0");
  const double b = 0.5 * mu1_ * mu1_;
  const double shift = sign_ < 0 ? 0.5 : 0.0;
  auto term = [&](long m) {
    const double k = 2.0 * pi * (static_cast<double>(m) - shift) / alpha_;
    const double a = 0.5 * k * k;
    Laurent laurent;
    Complex constant{kSqrt2Pi};
    switch (power_) {
      case 0: laurent[-1] = 1.0; break;
      case 1:
        laurent[-3] = 1.0;
        constant *= Complex{0.0, -k};
        break;
      default:
        laurent[-3] = 1.0;
        laurent[-5] = -k * k;
        break;
    }
    for (double r : roots_) laurent = apply_factor(laurent, a, b, r);
    // The gamma1-derivative only touches the phase e^{i k gamma1}.
    if (kind_ == ThetaKind::ThetaAInteger) constant *= Complex{0.0, k};
    const Complex phase = std::polar(1.0, k * beta_);
    return (scale_ / alpha_ * phase * constant).real() * evaluate(laurent, v, a, b);
  };
  // Pair m with (2*shift - m) so that k and -k are accumulated together.
  const long base = sign_ < 0 ? 1 : 0;
  double total = term(0) + (base == 1 ? term(1) : 0.0);
  int small_run = 0;
  for (long j = 1; j < kMaxTerms; ++j) {
    const double up = term(base + j);
    const double down = term(-j);
    total += up + down;
    const double bound = tol_ * std::max(1.0, std::abs(total));
    if (std::abs(up) < bound && std::abs(down) < bound) {
      if (++small_run >= 3) return total;
    } else {
      small_run = 0;
    }
  }
  throw Error(ErrorCode::NonConvergence, "Poisson-summed theta series did not converge");
}

Complex ThetaSeries::laplace(Complex y) const {
  const Complex z = 2.0 * y + mu1_ * mu1_;
  switch (kind_) {
    case ThetaKind::ThetaA:
      return 0.5 * pi * std::sin(pi * gamma1_) / (cos_sqrt(pi * pi * z) - std::cos(pi * gamma1_));
    case ThetaKind::ThetaB: return -2.0 / sinc_sqrt(pi * pi * z);
    case ThetaKind::EvenAlternating: return -2.0 / (z * sinc_sqrt(0.25 * pi * pi * z));
    case ThetaKind::QuarterOdd: return 0.5 * pi / cos_sqrt(0.25 * pi * pi * z);
    case ThetaKind::ThetaAInteger: {
      const double c = std::cos(pi * gamma1_);
      return 0.5 * pi * pi * c / (cos_sqrt(pi * pi * z) - c);
    }
  }
  return {};
}

}  // namespace drbm
