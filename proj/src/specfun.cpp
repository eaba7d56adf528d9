#include "drbm/specfun.hpp"

#include <array>
#include <cmath>
#include <numbers>

#include "drbm/error.hpp"

namespace drbm {

namespace {

using std::numbers::pi;

constexpr double kHalfLog2Pi = 0.91893853320467274178032973640562;

// B_{2k} for k = 1..12.
constexpr std::array<double, 12> kBernoulli = {
    1.0 / 6.0,           -1.0 / 30.0,          1.0 / 42.0,      -1.0 / 30.0,
    5.0 / 66.0,          -691.0 / 2730.0,      7.0 / 6.0,       -3617.0 / 510.0,
    43867.0 / 798.0,     -174611.0 / 330.0,    854513.0 / 138.0, -236364091.0 / 2730.0,
};

constexpr double kStirlingRadius = 15.0;

Complex stirling(Complex z) {
  Complex sum = (z - 0.5) * std::log(z) - z + kHalfLog2Pi;
  const Complex inv = 1.0 / z;
  const Complex inv2 = inv * inv;
  Complex power = inv;
  for (std::size_t k = 0; k < kBernoulli.size(); ++k) {
    const double n = 2.0 * static_cast<double>(k + 1);
    const Complex term = kBernoulli[k] / (n * (n - 1.0)) * power;
    sum += term;
    if (std::abs(term) < 1e-17 * std::abs(sum)) break;
    power *= inv2;
  }
  return sum;
}

// log sin(pi z), stable for large |Im z|.
Complex log_sin_pi(Complex z) {
  const Complex i{0.0, 1.0};
  if (z.imag() > 1.0) {
    return -i * pi * z + std::log(1.0 - std::exp(2.0 * i * pi * z)) - std::log(-2.0 * i);
  }
  if (z.imag() < -1.0) {
    return i * pi * z + std::log(1.0 - std::exp(-2.0 * i * pi * z)) - std::log(2.0 * i);
  }
  return std::log(std::sin(pi * z));
}

}  // namespace

Complex log_gamma(Complex z) {
  if (z.real() < 0.5) {
    const double nearest = std::round(z.real());
    if (nearest <= 0.0 && std::abs(z - nearest) < kPoleThreshold) {
      throw Error(ErrorCode::PoleOfGamma, "log_gamma at a non-positive integer");
    }
    return std::log(pi) - log_sin_pi(z) - log_gamma(1.0 - z);
  }
  Complex shift{0.0};
  while (std::abs(z) < kStirlingRadius) {
    shift += std::log(z);
    z += 1.0;
  }
  return stirling(z) - shift;
}

Complex cos_sqrt(Complex z) {
  if (std::abs(z) < 1.0) {
    Complex term{1.0};
    Complex sum{1.0};
    for (int n = 1; n < 30; ++n) {
      term *= -z / static_cast<double>((2 * n - 1) * (2 * n));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  return std::cos(std::sqrt(z));
}

Complex sinc_sqrt(Complex z) {
  if (std::abs(z) < 1.0) {
    Complex term{1.0};
    Complex sum{1.0};
    for (int n = 1; n < 30; ++n) {
      term *= -z / static_cast<double>((2 * n) * (2 * n + 1));
      sum += term;
      if (std::abs(term) < 1e-18) break;
    }
    return sum;
  }
  const Complex w = std::sqrt(z);
  return std::sin(w) / w;
}

Polynomial Polynomial::from_roots(std::vector<double> roots) {
  std::vector<double> c{1.0};
  for (double r : roots) {
    std::vector<double> next(c.size() + 1, 0.0);
    for (std::size_t i = 0; i < c.size(); ++i) {
      next[i + 1] += c[i];
      next[i] -= r * c[i];
    }
    c = std::move(next);
  }
  Polynomial p(std::move(c));
  p.roots_ = std::move(roots);
  return p;
}

Complex Polynomial::operator()(Complex y) const {
  if (!roots_.empty()) {
    Complex product{1.0};
    for (double r : roots_) product *= y - r;
    return product;
  }
  Complex acc{0.0};
  for (auto it = coefficients_.rbegin(); it != coefficients_.rend(); ++it) acc = acc * y + *it;
  return acc;
}

Complex decoupling_gamma(Complex s, const SurfaceContext& ctx) {
  auto lg = [](Complex z) {
    try {
      return log_gamma(z);
    } catch (const Error&) {
      throw Error(ErrorCode::PoleOfD, "Gamma argument on a pole");
    }
  };
  const double mu2 = ctx.mu2;
  if (!ctx.s1) {
    const double s2 = *ctx.s2;
    return std::exp(lg(s + s2 + mu2) - lg(s - s2));
  }
  if (!ctx.s2) {
    const double s1 = *ctx.s1;
    return std::exp(lg(s - s1) - lg(s + s1 + mu2));
  }
  const double s1 = *ctx.s1;
  const double s2 = *ctx.s2;
  return std::exp(lg(s - s1) + lg(s + s2 + mu2) - lg(s - s2) - lg(s + s1 + mu2));
}

double y_at(const Rational& a, const DerivedConstants& c) {
  return to_float(2 * a * (a - c.mu1));
}

Complex RationalDecoupling::operator()(Complex s, const SurfaceContext& ctx) const {
  const Complex y = y_of(s, ctx);
  Complex value = prefactor * p(y) / q(y);
  if (epsilon != 0) {
    const Complex centre = std::numbers::sqrt2 * (s - ctx.s_plus);
    value *= epsilon > 0 ? centre : 1.0 / centre;
  }
  return value;
}

namespace {

// Roots y(base + sign*k) for k in [first, last].
std::vector<double> shifted_roots(const Rational& base, int sign, std::int64_t first,
                                  std::int64_t last, const DerivedConstants& c) {
  std::vector<double> roots;
  for (std::int64_t k = first; k <= last; ++k) roots.push_back(y_at(base + sign * k, c));
  return roots;
}

std::int64_t as_int(const Rational& q) { return q.numerator(); }

}  // namespace

std::optional<RationalDecoupling> decoupling_rational(const DerivedConstants& c) {
  using Case = RationalDecouplingCase;
  if (c.r1_is_minus_one()) {
    const Rational& g2 = *c.gamma2;
    if (!is_positive_integer(g2)) return std::nullopt;
    const std::int64_t n = as_int(g2);
    RationalDecoupling d{Case::R1MinusOne, {}, {}, 0, 1.0};
    // floor(gamma2/2 - 1) is n/2 - 1 for even n and (n-3)/2 for odd n.
    d.p = Polynomial::from_roots(shifted_roots(*c.s2, -1, 0, n / 2 - 1, c));
    d.epsilon = n % 2 == 0 ? 0 : 1;
    d.prefactor = std::pow(2.0, -to_float(g2) / 2.0);
    return d;
  }
  if (c.r2_is_minus_one()) {
    const Rational& g1 = *c.gamma1;
    if (!is_positive_integer(g1)) return std::nullopt;
    const std::int64_t n = as_int(g1);
    RationalDecoupling d{Case::R2MinusOne, {}, {}, 0, 1.0};
    d.p = Polynomial::from_roots(shifted_roots(*c.s1, +1, 1, (n - 1) / 2, c));
    d.epsilon = n % 2 == 0 ? 1 : 0;
    d.prefactor = std::pow(2.0, -(to_float(g1) - 1.0) / 2.0);
    return d;
  }

  const Rational& g = *c.gamma;
  const Rational& s1 = *c.s1;
  RationalDecoupling d{Case::GammaNegInt, {}, {}, 0, std::pow(2.0, -to_float(g))};
  if (is_negative_integer(g)) {
    d.q = Polynomial::from_roots(shifted_roots(s1, -1, 0, -as_int(g) - 1, c));
    return d;
  }
  if (is_positive_integer(g)) {
    d.which = Case::GammaPosInt;
    d.p = Polynomial::from_roots(shifted_roots(s1, +1, 1, as_int(g), c));
    return d;
  }
  const Rational& g1 = *c.gamma1;
  const Rational& g2 = *c.gamma2;
  const Rational& s2 = *c.s2;
  if (!is_integer(g1) || !is_integer(g2)) return std::nullopt;
  const std::int64_t a = as_int(g1);
  const std::int64_t b = as_int(g2);
  if (a < 0) {
    d.which = Case::Gamma1NegGamma2Pos;
    if (a % 2 == 0) {
      d.epsilon = -1;
      d.p = Polynomial::from_roots(shifted_roots(s2, -1, 0, b / 2 - 1, c));
      d.q = Polynomial::from_roots(shifted_roots(s1, -1, 0, -a / 2 - 1, c));
    } else {
      d.epsilon = 1;
      d.p = Polynomial::from_roots(shifted_roots(s2, -1, 0, (b - 1) / 2 - 1, c));
      d.q = Polynomial::from_roots(shifted_roots(s1, -1, 0, -(a + 1) / 2, c));
    }
    return d;
  }
  if (b < 0) {
    d.which = Case::Gamma1PosGamma2Neg;
    if (a % 2 == 0) {
      d.epsilon = 1;
      d.p = Polynomial::from_roots(shifted_roots(s1, +1, 1, a / 2 - 1, c));
      d.q = Polynomial::from_roots(shifted_roots(s2, +1, 1, -b / 2, c));
    } else {
      d.epsilon = -1;
      d.p = Polynomial::from_roots(shifted_roots(s1, +1, 1, (a - 1) / 2, c));
      d.q = Polynomial::from_roots(shifted_roots(s2, +1, 1, -(b + 1) / 2, c));
    }
    return d;
  }
  d.which = Case::BothGammaPos;
  d.epsilon = 1;
  std::vector<double> roots = shifted_roots(s1, +1, 1, (a - 1) / 2, c);
  // floor(b/2 - 1): b/2 - 1 for even b, (b - 3)/2 for odd b; both equal b/2 - 1 in
  // integer division for b >= 1.
  for (double r : shifted_roots(s2, -1, 0, b / 2 - 1, c)) roots.push_back(r);
  d.p = Polynomial::from_roots(std::move(roots));
  return d;
}

}  // namespace drbm
