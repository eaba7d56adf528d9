#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "drbm/density.hpp"
#include "drbm/simulate.hpp"

namespace drbm {

// Outcome of one numerical identity check; `value` is the worst observed
// error in the units `tolerance` is stated in.
struct CheckResult {
  std::string name;
  bool passed = false;
  bool applicable = true;
  double value = 0.0;
  double tolerance = 0.0;
  std::string detail;
};

CheckResult not_applicable(std::string name, std::string why);

// |K(x(s), y(s))| <= 1e-9 (1 + |s|^4) at `samples` random s with |s| <= 10.
CheckResult check_kernel_uniformization(const ModelParams& params, int samples = 1000,
                                        std::uint64_t seed = 1);
// |phi1(s + 1) - G(s) phi1(s)| <= 1e-9 |phi1(s)| on the s-plane.
CheckResult check_difference_equation(const ModelParams& params, int samples = 100,
                                      std::uint64_t seed = 2);
// |k1 phi1(y(s)) + k2 phi2(x(s))| <= 1e-8 (|k1 phi1| + |k2 phi2|) for s where both converge.
CheckResult check_functional_equation(const ModelParams& params, int samples = 200,
                                      std::uint64_t seed = 3);
// phi1(0), phi2(0) against the boundary masses to 1e-12; phi(0, 0) == 1.
CheckResult check_normalization(const ModelParams& params);
// Gamma-quotient and rational decouplings agree to 1e-11.
CheckResult check_decoupling_cross_form(const ModelParams& params, int samples = 100,
                                        std::uint64_t seed = 4);
// D(s) / s^e within 5% of 1 at |s| = 1e3, e = 2 gamma (gamma2, gamma1 - 1 when r = -1).
CheckResult check_decoupling_asymptotics(const ModelParams& params);
// General-formula / special-formula ratio constant to 1e-9.
CheckResult check_consistency(const ModelParams& params);

// Direct vs Poisson-summed series on 50 points of [0.05, 20], 1e-10 max(1, |value|).
CheckResult check_theta_duality(const ThetaSeries& series, const std::string& label);
// Fourth finite difference quotient at v = 1e-3 below 1e-8.
CheckResult check_theta_flatness(const ThetaSeries& series, const std::string& label);
// Quadrature of the bare series against its closed-form transform, 1e-6 relative.
CheckResult check_theta_laplace(const ThetaSeries& series, const std::string& label);
// Symmetric partial sums (N = 1e4) of the pole expansions against the trig
// closed forms at 20 random (z, gamma1), 1e-4.
CheckResult check_mittag_leffler(std::uint64_t seed = 5);

// Quadrature of nu_i against phi_i on y in {-5, -2, -1, -0.5, -0.1}, 1e-6 relative.
CheckResult check_density_oracle(const ModelParams& params, Axis axis);
// Quadrature mass of nu_i against phi_i(0), 1e-8 relative.
CheckResult check_density_mass(const ModelParams& params, Axis axis);
// Raw phi(x, y) from the raw kernel equation against the normalized problem
// at the rescaled point, 1e-10 relative.
CheckResult check_homogeneity(const ModelParams& raw, int points = 20, std::uint64_t seed = 6);

struct MonteCarloOutcome {
  CheckResult laplace_grid;  // every grid point within 3 standard errors
  CheckResult local_time;    // local-time rate of face 1 against phi1(0)/2, 3 standard errors
  CheckResult histogram;     // L1 distance of the face-1 histogram to nu1
  EmpiricalSummary summary;
};

// With noise_aware, the histogram passes if L1 <= l1_tolerance or L1 <= 2x its
// expected sampling-noise level; otherwise the tolerance is absolute.
MonteCarloOutcome check_monte_carlo(const SimConfig& config, double l1_tolerance,
                                    bool noise_aware);

struct SuiteOptions {
  bool simulation = true;
  SimConfig simulation_config{};
};

// Every check that applies to one parameter set.
std::vector<CheckResult> validation_suite(const ModelParams& params, const SuiteOptions& options);

}  // namespace drbm
