#include "drbm/density.hpp"

#include <algorithm>
#include <cmath>

#include <boost/math/quadrature/gauss_kronrod.hpp>

#include "drbm/error.hpp"

namespace drbm {

namespace {

// A generic point of the left half-plane, away from the real roots of P.
const Complex kNormalizationPoint{-0.7, 0.37};

constexpr long kRateScan = 200;
constexpr unsigned kMaxDepth = 6;

std::vector<double> with_root(std::span<const double> roots, double extra) {
  std::vector<double> out(roots.begin(), roots.end());
  out.push_back(extra);
  return out;
}

}  // namespace

BoundaryDensity::BoundaryDensity(const ModelParams& params, Axis axis)
    : transform_(params, axis) {
  const DerivedConstants& consts = transform_.constants();
  const SurfaceContext& ctx = transform_.context();
  const TransformCase& c = transform_.transform_case();
  const double mass0 = transform_.boundary_mass();

  if (c.tag == TransformTag::RationalCase) {
    // 1/Q(y) = sum_k c_k/(y - a_k), and 1/(a - y) is the transform of e^{-a v}.
    const auto roots = c.decoupling->q.roots();
    double mass_unit = 0.0;
    for (std::size_t k = 0; k < roots.size(); ++k) {
      double coefficient = 1.0;
      for (std::size_t j = 0; j < roots.size(); ++j) {
        if (j != k) coefficient /= roots[k] - roots[j];
      }
      terms_.push_back({-coefficient, roots[k]});
      mass_unit += -coefficient / roots[k];
    }
    std::sort(terms_.begin(), terms_.end(),
              [](const ExponentialTerm& a, const ExponentialTerm& b) { return a.rate < b.rate; });
    normalization_ = mass0 / mass_unit;
    for (auto& t : terms_) t.coefficient *= normalization_;
    kind_ = DensityKind::ExponentialSum;
    decay_rate_ = terms_.front().rate;
    return;
  }

  const double mu1 = ctx.mu1;
  const double y_plus = to_float(2 * consts.s_plus * (consts.s_plus - consts.mu1));
  switch (c.tag) {
    case TransformTag::GammaPosIntCase:
      if (const Rational g1 = consts.mu1 - 2 * *consts.s1; is_integer(g1)) {
        // theta_a vanishes identically; its gamma1-derivative carries the double poles.
        series_ = ThetaSeries::theta_a_integer(g1.numerator(), mu1)
                      .with_operator({c.decoupling->p.roots().begin(), c.decoupling->p.roots().end()});
        break;
      }
      series_ = ThetaSeries::theta_a(to_float(*consts.gamma1), mu1)
                    .with_operator({c.decoupling->p.roots().begin(), c.decoupling->p.roots().end()});
      break;
    case TransformTag::Gamma12Case:
      if (c.subcase != 3) {
        throw Error(ErrorCode::UnsupportedCase,
                    "gamma1, gamma2 integers of opposite signs: no flat theta representation");
      }
      series_ = ThetaSeries::theta_b(mu1).with_operator(
          {c.decoupling->p.roots().begin(), c.decoupling->p.roots().end()});
      break;
    case TransformTag::R1MinusOne:
    case TransformTag::R2MinusOne: {
      if (!c.natural) {
        throw Error(ErrorCode::UnsupportedCase, "r = -1 without a rational decoupling");
      }
      const bool alternating = c.odd == (c.tag == TransformTag::R1MinusOne);
      const auto roots = c.decoupling->p.roots();
      series_ = alternating
                    ? ThetaSeries::even_alternating(mu1).with_operator(with_root(roots, y_plus))
                    : ThetaSeries::quarter_odd(mu1).with_operator({roots.begin(), roots.end()});
      break;
    }
    default:
      throw Error(ErrorCode::UnsupportedCase, "no closed-form density in this regime");
  }
  kind_ = DensityKind::ThetaOperator;

  decay_rate_ = INFINITY;
  for (long n = -kRateScan; n <= kRateScan; ++n) {
    if (series_->annihilated(n) || series_->weight(n) == 0.0) continue;
    const double rate = series_->rate(n);
    if (rate <= 0.0) {
      throw Error(ErrorCode::InternalInvariant, "theta density has a non-decaying term");
    }
    decay_rate_ = std::min(decay_rate_, rate);
  }

  const auto roots = series_->operator_roots();
  Complex p{1.0};
  for (double r : roots) p *= kNormalizationPoint - r;
  const Complex target = transform_.normalized(kNormalizationPoint);
  normalization_ = (target / (p * series_->laplace(kNormalizationPoint))).real();
}

double BoundaryDensity::normalized(double v) const {
  if (!(v > 0.0)) throw Error(ErrorCode::NonPositiveArgument, "density needs v > 0");
  if (kind_ == DensityKind::ExponentialSum) {
    double sum = 0.0;
    for (const auto& t : terms_) sum += t.coefficient * std::exp(-t.rate * v);
    return sum;
  }
  return normalization_ * (*series_)(v);
}

double BoundaryDensity::operator()(double v) const {
  const ScaleRecord& scale = transform_.normalized_params().scale;
  const double q = to_float(scale.q);
  const double own = to_float(scale.sigma1);
  const double other = to_float(scale.sigma2);
  return q * q * own / other * normalized(q * v / other);
}

double BoundaryDensity::raw_decay_rate() const {
  const ScaleRecord& scale = transform_.normalized_params().scale;
  return decay_rate_ * to_float(scale.q) / to_float(scale.sigma2);
}

double BoundaryDensity::mass() const {
  const ScaleRecord& scale = transform_.normalized_params().scale;
  return to_float(scale.q) * to_float(scale.sigma1) * transform_.boundary_mass();
}

Complex laplace_quadrature(const std::function<double(double)>& f, Complex y, double decay_rate,
                           double rel_tol) {
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  const double decay = decay_rate - y.real();
  if (!(decay > 0.0)) {
    throw Error(ErrorCode::NonConvergence, "integrand does not decay");
  }
  const double cutoff = 200.0 / decay;
  const double width = std::min(1.0, 4.0 / decay);
  auto re = [&](double v) { return std::exp(y.real() * v) * std::cos(y.imag() * v) * f(v); };
  auto im = [&](double v) { return std::exp(y.real() * v) * std::sin(y.imag() * v) * f(v); };
  Complex total{};
  int small_run = 0;
  for (double a = 0.0; a < cutoff; a += width) {
    const double b = a + width;
    // Panels are short enough that a smooth integrand needs few bisections; a
    // deeper cap would only chase rounding noise in flat stretches.
    const Complex panel{Quadrature::integrate(re, a, b, kMaxDepth, 1e-13),
                        y.imag() == 0.0 ? 0.0 : Quadrature::integrate(im, a, b, kMaxDepth, 1e-13)};
    total += panel;
    if (std::abs(panel) < rel_tol * 1e-2 * std::abs(total)) {
      if (++small_run >= 3) return total;
    } else {
      small_run = 0;
    }
  }
  throw Error(ErrorCode::NonConvergence, "Laplace quadrature tail not reached");
}

}  // namespace drbm
