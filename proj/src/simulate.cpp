#include "drbm/simulate.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <ostream>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <fmt/format.h>
#include <json.hpp>

#include "drbm/error.hpp"

namespace drbm {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Independent stream per (seed, path), regardless of the order paths run in.
std::mt19937_64 path_stream(std::uint64_t seed, int path) {
  const std::uint64_t key = splitmix64(seed ^ splitmix64(static_cast<std::uint64_t>(path) + 1));
  std::seed_seq seq{static_cast<std::uint32_t>(key), static_cast<std::uint32_t>(key >> 32),
                    static_cast<std::uint32_t>(path)};
  return std::mt19937_64(seq);
}

struct Event {
  double value;
  double weight;
  int block;
};

struct MeanError {
  double mean;
  double error;
};

MeanError batch_mean(const std::vector<double>& xs) {
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0) / n)};
}

BoundaryHistogram bin_events(std::vector<Event> events, int blocks, double block_time, int bins,
                             double quantile) {
  BoundaryHistogram h;
  h.events = events.size();
  h.probability.assign(bins, 0.0);
  h.std_error.assign(bins, 0.0);

  std::vector<double> block_rate(blocks, 0.0);
  for (const Event& e : events) block_rate[e.block] += e.weight / block_time;
  const MeanError rate = batch_mean(block_rate);
  h.rate = rate.mean;
  h.rate_std_error = rate.error;
  if (events.empty()) return h;

  std::sort(events.begin(), events.end(),
            [](const Event& a, const Event& b) { return a.value < b.value; });
  double total = 0.0;
  for (const Event& e : events) total += e.weight;
  double running = 0.0;
  for (const Event& e : events) {
    running += e.weight;
    h.upper = e.value;
    if (running >= quantile * total) break;
  }
  if (!(h.upper > 0.0)) h.upper = events.back().value;
  if (!(h.upper > 0.0)) return h;

  std::vector<std::vector<double>> per_block(blocks, std::vector<double>(bins, 0.0));
  for (const Event& e : events) {
    if (e.value > h.upper) break;
    const int bin = std::min(bins - 1, static_cast<int>(e.value / h.upper * bins));
    per_block[e.block][bin] += e.weight;
    h.probability[bin] += e.weight;
  }
  const double in_range = std::accumulate(h.probability.begin(), h.probability.end(), 0.0);
  for (double& p : h.probability) p /= in_range;

  std::vector<double> column(blocks);
  for (int i = 0; i < bins; ++i) {
    int used = 0;
    for (int b = 0; b < blocks; ++b) {
      const double mass = std::accumulate(per_block[b].begin(), per_block[b].end(), 0.0);
      if (mass > 0.0) column[used++] = per_block[b][i] / mass;
    }
    h.std_error[i] = batch_mean({column.begin(), column.begin() + used}).error;
  }
  return h;
}

}  // namespace

ReflectResult reflect_step(std::pair<double, double> y, double r1, double r2) {
  const auto [y1, y2] = y;
  if (y1 >= 0.0 && y2 >= 0.0) return {{y1, y2}, {0.0, 0.0}};
  if (y1 < 0.0) {
    const double dl1 = -y1;
    const double g2 = y2 + r1 * dl1;
    if (g2 >= 0.0) return {{0.0, g2}, {dl1, 0.0}};
  }
  if (y2 < 0.0) {
    const double dl2 = -y2;
    const double g1 = y1 + r2 * dl2;
    if (g1 >= 0.0) return {{g1, 0.0}, {0.0, dl2}};
  }
  const double det = 1.0 - r1 * r2;
  if (det != 0.0) {
    const double dl1 = (-y1 + r2 * y2) / det;
    const double dl2 = (-y2 + r1 * y1) / det;
    if (dl1 >= 0.0 && dl2 >= 0.0) return {{0.0, 0.0}, {dl1, dl2}};
  }
  throw Error(ErrorCode::NoSolution,
              fmt::format("no complementary solution for y = ({}, {})", y1, y2));
}

std::vector<std::pair<double, double>> default_laplace_grid() {
  std::vector<std::pair<double, double>> grid;
  for (double x : {-2.0, -1.25, -0.5}) {
    for (double y : {-2.0, -1.25, -0.5}) grid.emplace_back(x, y);
  }
  return grid;
}

EmpiricalSummary simulate(const SimConfig& config) {
  if (!(config.dt > 0.0)) throw Error(ErrorCode::Config, "dt must be positive");
  if (config.paths < 1) throw Error(ErrorCode::Config, "paths must be at least 1");
  if (config.blocks < 1 || config.bins < 1) {
    throw Error(ErrorCode::Config, "blocks and bins must be at least 1");
  }
  const double burn_in = config.effective_burn_in();
  if (!(burn_in >= 0.0 && burn_in < config.horizon)) {
    throw Error(ErrorCode::Config, "burn-in must lie in [0, horizon)");
  }
  const ValidationReport report = validate(config.params);
  if (!report.passed()) {
    throw Error(ErrorCode::Hypothesis,
                report.failures.front().hypothesis + " violated: " + report.failures.front().detail);
  }

  const ModelParams& p = config.params;
  const double mu1 = to_float(p.mu1);
  const double mu2 = to_float(p.mu2);
  const double sigma1 = to_float(p.sigma1);
  const double sigma2 = to_float(p.sigma2);
  const double r1 = to_float(p.r1);
  const double r2 = to_float(p.r2);
  const auto grid = config.grid.empty() ? default_laplace_grid() : config.grid;

  const auto burn_steps = static_cast<std::uint64_t>(std::llround(burn_in / config.dt));
  const auto total_steps = static_cast<std::uint64_t>(std::llround(config.horizon / config.dt));
  const std::uint64_t block_steps = (total_steps - burn_steps) / config.blocks;
  if (block_steps == 0) throw Error(ErrorCode::Config, "horizon too short for the block count");
  const double block_time = static_cast<double>(block_steps) * config.dt;
  const double sqrt_dt = std::sqrt(config.dt);
  const int total_blocks = config.paths * config.blocks;

  std::vector<std::vector<double>> block_means(grid.size(), std::vector<double>(total_blocks));
  std::vector<std::vector<double>> at_horizon(grid.size(), std::vector<double>(config.paths));
  std::vector<Event> events1;
  std::vector<Event> events2;

  for (int path = 0; path < config.paths; ++path) {
    auto rng = path_stream(config.seed, path);
    std::normal_distribution<double> normal;
    double g1 = 0.0;
    double g2 = 0.0;
    std::vector<double> sums(grid.size(), 0.0);
    auto step = [&] {
      const double xi = normal(rng) * sqrt_dt;
      const ReflectResult r = reflect_step(
          {g1 - mu1 * config.dt + sigma1 * xi, g2 - mu2 * config.dt - sigma2 * xi}, r1, r2);
      g1 = r.g.first;
      g2 = r.g.second;
      return r.delta_l;
    };
    for (std::uint64_t n = 0; n < burn_steps; ++n) step();
    for (int b = 0; b < config.blocks; ++b) {
      const int block = path * config.blocks + b;
      std::fill(sums.begin(), sums.end(), 0.0);
      for (std::uint64_t n = 0; n < block_steps; ++n) {
        const auto [dl1, dl2] = step();
        if (dl1 > 0.0) events1.push_back({g2, dl1, block});
        if (dl2 > 0.0) events2.push_back({g1, dl2, block});
        for (std::size_t k = 0; k < grid.size(); ++k) {
          sums[k] += std::exp(grid[k].first * g1 + grid[k].second * g2);
        }
      }
      for (std::size_t k = 0; k < grid.size(); ++k) {
        block_means[k][block] = sums[k] / static_cast<double>(block_steps);
      }
    }
    for (std::size_t k = 0; k < grid.size(); ++k) {
      at_horizon[k][path] = std::exp(grid[k].first * g1 + grid[k].second * g2);
    }
  }

  EmpiricalSummary summary;
  summary.steps = static_cast<std::uint64_t>(config.paths) *
                  (burn_steps + block_steps * static_cast<std::uint64_t>(config.blocks));
  summary.observed_time = block_time * total_blocks;
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const MeanError m = config.estimator == Estimator::TimeAverage ? batch_mean(block_means[k])
                                                                   : batch_mean(at_horizon[k]);
    summary.laplace_grid.push_back({grid[k].first, grid[k].second, m.mean, m.error});
  }
  summary.boundary1 =
      bin_events(std::move(events1), total_blocks, block_time, config.bins, config.upper_quantile);
  summary.boundary2 =
      bin_events(std::move(events2), total_blocks, block_time, config.bins, config.upper_quantile);
  return summary;
}

BoundaryComparison compare_empirical_boundary(const BoundaryHistogram& histogram,
                                              const std::function<double(double)>& density) {
  using Quadrature = boost::math::quadrature::gauss_kronrod<double, 31>;
  BoundaryComparison out;
  const std::size_t bins = histogram.probability.size();
  const double width = histogram.width();
  out.analytic.resize(bins);
  double total = 0.0;
  for (std::size_t i = 0; i < bins; ++i) {
    const double a = width * static_cast<double>(i);
    out.analytic[i] = Quadrature::integrate(density, a, a + width, 10, 1e-12);
    total += out.analytic[i];
  }
  out.z_scores.resize(bins);
  for (std::size_t i = 0; i < bins; ++i) {
    out.analytic[i] /= total;
    const double diff = histogram.probability[i] - out.analytic[i];
    out.l1 += std::abs(diff);
    // Bins no block reached have no spread; fall back to a counting error.
    double se = histogram.std_error[i];
    if (!(se > 0.0)) {
      const double events = static_cast<double>(std::max<std::size_t>(histogram.events, 1));
      se = std::sqrt(std::max(out.analytic[i], histogram.probability[i]) / events);
    }
    out.z_scores[i] = se > 0.0 ? diff / se : 0.0;
    out.sup_z = std::max(out.sup_z, std::abs(out.z_scores[i]));
    out.noise_l1 += std::sqrt(2.0 / std::numbers::pi) * histogram.std_error[i];
  }
  return out;
}

void write_summary_json(const EmpiricalSummary& s, std::ostream& out) {
  using nlohmann::ordered_json;
  ordered_json j;
  j["steps"] = s.steps;
  j["observed_time"] = s.observed_time;
  ordered_json grid = ordered_json::array();
  for (const auto& e : s.laplace_grid) {
    grid.push_back({{"x", e.x}, {"y", e.y}, {"estimate", e.estimate}, {"std_error", e.std_error}});
  }
  j["laplace_grid"] = grid;
  auto face = [](const BoundaryHistogram& h) {
    return ordered_json{{"local_time_rate", h.rate},
                        {"local_time_rate_std_error", h.rate_std_error},
                        {"events", h.events},
                        {"upper", h.upper},
                        {"bins", h.probability.size()}};
  };
  j["boundary1"] = face(s.boundary1);
  j["boundary2"] = face(s.boundary2);
  out << j.dump(2) << '\n';
}

void write_histogram_csv(const BoundaryHistogram& h, std::ostream& out) {
  out << "lo,hi,probability,std_error\n";
  const double width = h.width();
  for (std::size_t i = 0; i < h.probability.size(); ++i) {
    const double lo = width * static_cast<double>(i);
    out << fmt::format("{:.17g},{:.17g},{:.17g},{:.17g}\n", lo, lo + width, h.probability[i],
                       h.std_error[i]);
  }
}

}  // namespace drbm
