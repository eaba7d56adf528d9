#pragma once

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "drbm/model.hpp"

namespace drbm {

struct ReflectResult {
  std::pair<double, double> g;
  std::pair<double, double> delta_l;
};

// Solves g = y + R dL, g >= 0, dL >= 0, g_i dL_i = 0 with R = [[1, r2], [r1, 1]]
// by checking the interior, face 1, face 2 and corner cases in turn.
// Throws NoSolution if none applies.
ReflectResult reflect_step(std::pair<double, double> y_free, double r1, double r2);

enum class Estimator { TimeAverage, EnsembleAtHorizon };

struct SimConfig {
  ModelParams params;
  double dt = 1e-4;
  double horizon = 2e3;
  std::optional<double> burn_in;  // horizon / 10 when unset
  int paths = 1;
  std::uint64_t seed = 1;
  Estimator estimator = Estimator::TimeAverage;
  std::vector<std::pair<double, double>> grid;  // (x, y); 3x3 over [-2, -0.5]^2 when empty
  int blocks = 30;
  int bins = 200;
  double upper_quantile = 0.999;

  double effective_burn_in() const { return burn_in.value_or(horizon / 10.0); }
};

struct LaplaceEstimate {
  double x;
  double y;
  double estimate;
  double std_error;
};

// Local time of one face, binned by the opposite coordinate over [0, upper].
struct BoundaryHistogram {
  double upper = 0.0;
  std::vector<double> probability;  // unit mass over the bins
  std::vector<double> std_error;    // per bin, from the time blocks
  double rate = 0.0;                // local time per unit time
  double rate_std_error = 0.0;
  std::size_t events = 0;

  double width() const { return probability.empty() ? 0.0 : upper / probability.size(); }
};

struct EmpiricalSummary {
  std::vector<LaplaceEstimate> laplace_grid;
  BoundaryHistogram boundary1;  // dL1 binned by G2
  BoundaryHistogram boundary2;  // dL2 binned by G1
  double observed_time = 0.0;   // post burn-in, summed over paths
  std::uint64_t steps = 0;
};

std::vector<std::pair<double, double>> default_laplace_grid();

// Euler scheme driven by one standard normal per step, noise increment
// (sigma1 xi sqrt(dt), -sigma2 xi sqrt(dt)), drift -mu dt, then reflect_step.
EmpiricalSummary simulate(const SimConfig& config);

struct BoundaryComparison {
  std::vector<double> analytic;  // unit mass over the same bins
  std::vector<double> z_scores;
  double sup_z = 0.0;
  double l1 = 0.0;
  // L1 expected from sampling noise alone, sqrt(2/pi) * sum of bin errors.
  double noise_l1 = 0.0;
};

BoundaryComparison compare_empirical_boundary(const BoundaryHistogram& histogram,
                                              const std::function<double(double)>& density);

void write_summary_json(const EmpiricalSummary& summary, std::ostream& out);
void write_histogram_csv(const BoundaryHistogram& histogram, std::ostream& out);

}  // namespace drbm
