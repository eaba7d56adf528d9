#include <cmath>
#include <numbers>
#include <vector>

#include <gsl/gsl_errno.h>
#include <gsl/gsl_integration.h>
#include <gtest/gtest.h>

#include "drbm/checks.hpp"
#include "drbm/error.hpp"
#include "drbm/theta.hpp"

namespace drbm {
namespace {


// Brute-force partial sum of scale * sum sign^n u^power e^{-v (u^2 - mu1^2)/2}, u = alpha n + beta.
double brute(double v, double mu1, int sign, double alpha, double beta, int power, double scale) {
  long double total = 0.0L;
  for (long n = -4000; n <= 4000; ++n) {
    const long double u = alpha * n + beta;
    const long double s = (sign < 0 && n % 2 != 0) ? -1.0L : 1.0L;
    total += s * std::pow(u, power) * std::exp(-v * (u * u - mu1 * mu1) / 2.0L);
  }
  return static_cast<double>(scale * total);
}

struct Named {
  const char* label;
  ThetaSeries series;
  int sign;
  double alpha;
  double beta;
  int power;
  double scale;
};

std::vector<Named> bare_series(double mu1) {
  return {
      {"theta_a", ThetaSeries::theta_a(1.0 / 3.0, mu1), +1, 2.0, 1.0 / 3.0, 1, 0.5},
      {"theta_b", ThetaSeries::theta_b(mu1), -1, 1.0, 0.0, 2, 1.0},
      {"even_alternating", ThetaSeries::even_alternating(mu1), -1, 2.0, 0.0, 0, 1.0},
      {"quarter_odd", ThetaSeries::quarter_odd(mu1), +1, 4.0, 1.0, 1, 1.0},
  };
}

TEST(ThetaSeries, DirectSideMatchesBruteForce) {
  for (const auto& s : bare_series(0.4)) {
    for (double v : {0.05, 0.3, 2.0, 9.0}) {
      const double expected = brute(v, 0.4, s.sign, s.alpha, s.beta, s.power, s.scale);
      EXPECT_NEAR(s.series.direct(v), expected, 1e-12 * std::max(1.0, std::abs(expected)))
          << s.label << " v = " << v;
    }
  }
}

TEST(ThetaSeries, PoissonSideMatchesBruteForce) {
  for (const auto& s : bare_series(0.4)) {
    for (double v : {0.05, 0.3, 2.0}) {
      const double expected = brute(v, 0.4, s.sign, s.alpha, s.beta, s.power, s.scale);
      EXPECT_NEAR(s.series.poisson(v), expected, 1e-11 * std::max(1.0, std::abs(expected)))
          << s.label << " v = " << v;
    }
  }
  const ThetaSeries b = ThetaSeries::theta_b(0.5);
  EXPECT_NEAR(b.direct(2.0), b.poisson(2.0), 1e-12);
}

TEST(ThetaSeries, RejectsNonPositiveArguments) {
  const ThetaSeries b = ThetaSeries::theta_b(0.5);
  for (double v : {0.0, -1.0}) {
    try {
      b.direct(v);
      FAIL() << v;
    } catch (const Error& e) {
      EXPECT_EQ(e.code(), ErrorCode::NonPositiveArgument);
    }
  }
}

TEST(ThetaSeries, OperatorMatchesFiniteDifferences) {
  // (-d/dv - r) by a central difference of the bare series.
  const double h = 1e-4;
  for (const auto& s : bare_series(0.6)) {
    const ThetaSeries op = s.series.with_operator({0.7});
    for (double v : {0.4, 1.5}) {
      const double derivative = (s.series.direct(v + h) - s.series.direct(v - h)) / (2.0 * h);
      const double expected = -derivative - 0.7 * s.series.direct(v);
      EXPECT_NEAR(op.direct(v), expected, 1e-6 * std::max(1.0, std::abs(expected))) << s.label;
      EXPECT_NEAR(op.poisson(v), op.direct(v), 1e-10 * std::max(1.0, std::abs(expected))) << s.label;
    }
  }
}

TEST(ThetaSeries, OperatorRootsAnnihilateTerms) {
  const ThetaSeries a = ThetaSeries::theta_a(0.25, 0.5);
  const ThetaSeries op = a.with_operator({a.rate(2), a.rate(-1)});
  EXPECT_TRUE(op.annihilated(2));
  EXPECT_TRUE(op.annihilated(-1));
  EXPECT_FALSE(op.annihilated(0));
  EXPECT_FALSE(a.annihilated(2));
}

TEST(ThetaSeries, IntegerVariantIsTheGamma1Derivative) {
  const double h = 1e-5;
  const double mu1 = 0.5;
  for (long g1 : {1L, 2L, 3L}) {
    const ThetaSeries integer = ThetaSeries::theta_a_integer(g1, mu1);
    const ThetaSeries up = ThetaSeries::theta_a(g1 + h, mu1);
    const ThetaSeries down = ThetaSeries::theta_a(g1 - h, mu1);
    for (double v : {0.2, 0.8, 3.0}) {
      const double fd = (up.direct(v) - down.direct(v)) / (2.0 * h);
      EXPECT_NEAR(integer.direct(v), fd, 1e-7 * std::max(1.0, std::abs(fd))) << g1 << " " << v;
      EXPECT_NEAR(integer.poisson(v), integer.direct(v), 1e-10 * std::max(1.0, std::abs(fd)));
    }
    for (const Complex y : {Complex{-1.0}, Complex{-0.3, 2.0}}) {
      const Complex fd = (up.laplace(y) - down.laplace(y)) / (2.0 * h);
      EXPECT_LE(std::abs(integer.laplace(y) - fd), 1e-7 * std::max(1.0, std::abs(fd))) << g1;
    }
    // With an operator, the direct side against differences of the operated ThetaA.
    const std::vector<double> roots{0.3, integer.rate(1)};
    const double v = 1.1;
    const double fd = (up.with_operator(roots).direct(v) - down.with_operator(roots).direct(v)) / (2.0 * h);
    EXPECT_NEAR(integer.with_operator(roots).direct(v), fd, 1e-6 * std::max(1.0, std::abs(fd)));
  }
}

// GSL adaptive quadrature of e^{y v} T(v) for real y; past v = 200 the
// integrand is below 1e-30 for every series used here.
double gsl_laplace(const ThetaSeries& series, double y) {
  struct Data {
    const ThetaSeries* series;
    double y;
  } data{&series, y};
  gsl_function f;
  f.function = [](double v, void* p) {
    const auto* d = static_cast<Data*>(p);
    return std::exp(d->y * v) * (*d->series)(v);
  };
  f.params = &data;
  gsl_integration_workspace* w = gsl_integration_workspace_alloc(2000);
  double result = 0.0;
  double error = 0.0;
  gsl_set_error_handler_off();
  gsl_integration_qags(&f, 0.0, 200.0, 1e-12, 1e-11, 2000, w, &result, &error);
  gsl_integration_workspace_free(w);
  return result;
}

TEST(ThetaSeries, ClosedFormTransformsMatchQuadrature) {
  const double mu1 = 0.5;
  std::vector<ThetaSeries> all;
  for (const auto& s : bare_series(mu1)) all.push_back(s.series);
  all.push_back(ThetaSeries::theta_a_integer(2, mu1));
  all.push_back(ThetaSeries::theta_a_integer(3, mu1));
  for (const ThetaSeries& s : all) {
    for (double y : {-0.5, -2.0, -7.0}) {
      const double closed = s.laplace(y).real();
      EXPECT_NEAR(gsl_laplace(s, y), closed, 1e-8 * std::max(1.0, std::abs(closed)))
          << static_cast<int>(s.kind()) << " y = " << y;
    }
  }
}

TEST(ThetaChecks, DualityFlatnessAndTransform) {
  const double mu1 = 0.25;
  std::vector<ThetaSeries> all;
  for (const auto& s : bare_series(mu1)) {
    all.push_back(s.series);
    all.push_back(s.series.with_operator({0.0, 1.5, 4.0}));
  }
  all.push_back(ThetaSeries::theta_a_integer(1, mu1).with_operator({0.5}));
  for (const ThetaSeries& s : all) {
    const CheckResult duality = check_theta_duality(s, "series");
    EXPECT_TRUE(duality.passed) << duality.detail << " " << duality.value;
    const CheckResult flat = check_theta_flatness(s, "series");
    EXPECT_TRUE(flat.passed) << flat.detail << " " << flat.value;
    const CheckResult transform = check_theta_laplace(s.with_operator({}), "series");
    EXPECT_TRUE(transform.passed) << transform.detail << " " << transform.value;
  }
}

TEST(ThetaChecks, MittagLefflerExpansions) {
  const CheckResult r = check_mittag_leffler();
  EXPECT_TRUE(r.passed) << r.detail << " " << r.value;
}

}  // namespace
}  // namespace drbm
