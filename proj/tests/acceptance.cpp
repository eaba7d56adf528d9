// Acceptance run: one PASS/FAIL line per criterion, nonzero exit if any fails.
#include <chrono>
#include <cstdio>
#include <functional>
#include <random>
#include <string>
#include <vector>

#include <fmt/core.h>

#include "drbm/checks.hpp"
#include "drbm/error.hpp"
#include "fixtures.hpp"

namespace {

using namespace drbm;
using testing::make_params;

// Pinned tolerances; the per-check ones live next to each check.
constexpr double kKernelSeconds = 1.0;
constexpr double kDifferenceSeconds = 10.0;
constexpr double kMonteCarloSeconds = 300.0;
constexpr double kHistogramL1 = 0.05;
constexpr double kGridZ = 3.0;

struct Outcome {
  bool passed = true;
  std::string detail;
  int checks = 0;
  double worst_ratio = 0.0;  // largest value / tolerance seen

  void absorb(const CheckResult& r, const std::string& where) {
    if (!r.applicable) return;
    ++checks;
    if (r.tolerance > 0.0) worst_ratio = std::max(worst_ratio, r.value / r.tolerance);
    if (!r.passed && passed) {
      passed = false;
      detail = fmt::format("{} [{}]: {} value {:.3g} > {:.3g}", r.name, where, r.detail, r.value, r.tolerance);
    }
  }
  void fail(const std::string& why) {
    if (passed) detail = why;
    passed = false;
  }
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::pair<std::string, ModelParams>> catalogue_sets(std::size_t per_case) {
  std::vector<std::pair<std::string, ModelParams>> out;
  for (const auto& [label, sets] : testing::case_catalogue(per_case)) {
    for (const ModelParams& p : sets) out.emplace_back(label, p);
  }
  return out;
}

bool density_supported(const std::string& label) {
  return label == "RationalCase" || label.starts_with("GammaPosIntCase") || label == "Gamma12Case/3" ||
         label.find("/natural/") != std::string::npos;
}

Outcome criterion_kernel() {
  Outcome v;
  const auto start = std::chrono::steady_clock::now();
  v.absorb(check_kernel_uniformization(testing::skew()), "skew");
  const double elapsed = seconds_since(start);
  for (const ModelParams& p : {testing::symmetric(), testing::transcendental(), testing::appendix_r1()}) {
    v.absorb(check_kernel_uniformization(p), "preset");
  }
  if (elapsed >= kKernelSeconds) v.fail(fmt::format("1000 samples took {:.2f} s", elapsed));
  if (v.passed) v.detail = fmt::format("4 sets x 1000 samples, one set in {:.2g} s", elapsed);
  return v;
}

Outcome criterion_difference_equation() {
  Outcome v;
  const auto start = std::chrono::steady_clock::now();
  int labels = 0;
  std::string last;
  for (const auto& [label, p] : catalogue_sets(3)) {
    const CheckResult r = check_difference_equation(p);
    v.absorb(r, label);
    if (r.applicable && label != last) ++labels;
    if (r.applicable) last = label;
  }
  const double elapsed = seconds_since(start);
  if (labels < 10) v.fail(fmt::format("only {} case labels exercised", labels));
  if (elapsed >= kDifferenceSeconds) v.fail(fmt::format("took {:.1f} s", elapsed));
  if (v.passed) v.detail = fmt::format("{} sets over {} case labels, {:.2f} s", v.checks, labels, elapsed);
  return v;
}

Outcome per_set(const std::function<CheckResult(const ModelParams&)>& check) {
  Outcome v;
  for (const auto& [label, p] : catalogue_sets(3)) v.absorb(check(p), label);
  if (v.passed) v.detail = fmt::format("{} sets, worst value/tolerance {:.2g}", v.checks, v.worst_ratio);
  return v;
}

Outcome criterion_decoupling() {
  Outcome v;
  auto sets = catalogue_sets(3);
  // Both signs of the decoupling form with gamma1 < 0 < gamma2.
  sets.emplace_back("gamma1 = -1", make_params({1, 2}, {1, 2}, -5, {1, 3}));
  sets.emplace_back("gamma1 = -2", make_params({1, 2}, {1, 2}, {-7, 3}, {-1, 5}));
  int cross = 0;
  for (const auto& [label, p] : sets) {
    const CheckResult r = check_decoupling_cross_form(p);
    if (r.applicable) ++cross;
    v.absorb(r, label);
    v.absorb(check_decoupling_asymptotics(p), label);
  }
  if (cross < 30) v.fail(fmt::format("only {} sets carry a decoupling", cross));
  if (v.passed) v.detail = fmt::format("{} decoupled sets, worst value/tolerance {:.2g}", cross, v.worst_ratio);
  return v;
}

Outcome criterion_consistency() {
  Outcome v;
  v.absorb(check_consistency(testing::symmetric()), "gamma = 3");
  v.absorb(check_consistency(testing::skew()), "gamma = -1");
  if (v.checks != 2) v.fail("consistency not applicable to both presets");
  if (v.passed) v.detail = fmt::format("gamma = 3 and gamma = -1, worst value/tolerance {:.2g}", v.worst_ratio);
  return v;
}

std::vector<std::pair<std::string, ThetaSeries>> theta_series() {
  std::vector<std::pair<std::string, ThetaSeries>> out{
      {"theta_a", ThetaSeries::theta_a(1.0 / 3.0, 0.5)},
      {"theta_b", ThetaSeries::theta_b(0.5)},
  };
  for (const auto& [label, p] : catalogue_sets(1)) {
    if (!density_supported(label) || label == "RationalCase") continue;
    const BoundaryDensity d(p, Axis::Phi1);
    out.emplace_back(label, *d.series());
  }
  return out;
}

Outcome criterion_theta_duality() {
  Outcome v;
  for (const auto& [label, s] : theta_series()) {
    v.absorb(check_theta_duality(s, label), label);
    v.absorb(check_theta_flatness(s, label), label);
  }
  if (v.passed) v.detail = fmt::format("{} series, worst value/tolerance {:.2g}", v.checks / 2, v.worst_ratio);
  return v;
}

Outcome criterion_theta_laplace() {
  Outcome v;
  for (const auto& [label, s] : theta_series()) v.absorb(check_theta_laplace(s.with_operator({}), label), label);
  v.absorb(check_mittag_leffler(), "Mittag-Leffler");
  if (v.passed) v.detail = fmt::format("{} checks, worst value/tolerance {:.2g}", v.checks, v.worst_ratio);
  return v;
}

Outcome criterion_density() {
  Outcome v;
  int labels = 0;
  for (const auto& [label, sets] : testing::case_catalogue(2)) {
    if (!density_supported(label)) continue;
    ++labels;
    for (const ModelParams& p : sets) {
      v.absorb(check_density_oracle(p, Axis::Phi1), label);
      v.absorb(check_density_mass(p, Axis::Phi1), label);
    }
  }
  if (labels != 8) v.fail(fmt::format("{} supported labels, expected 8", labels));
  if (v.passed) v.detail = fmt::format("{} labels, worst value/tolerance {:.2g}", labels, v.worst_ratio);
  return v;
}

Outcome criterion_homogeneity() {
  Outcome v;
  std::mt19937_64 rng(2024);
  for (int i = 0; i < 20; ++i) v.absorb(check_homogeneity(testing::random_raw_params(rng)), "raw");
  if (v.passed) v.detail = fmt::format("20 raw sets, worst value/tolerance {:.2g}", v.worst_ratio);
  return v;
}

// Expected verdicts worked out by hand from gamma = s2 - s1, gamma1 = mu1 - 2 s1 and
// gamma2 = mu2 + 2 s2, where s1 = (mu1 r1 - mu2)/(1 + r1) and s2 = (mu1 - mu2 r2)/(1 + r2).
struct Fixture {
  const char* what;
  ModelParams params;
  drbm::Verdict verdict;
  Trigger trigger;
};

std::vector<Fixture> classification_fixture() {
  using V = drbm::Verdict;
  return {
      {"skew, gamma = -1", testing::skew(), V::Rational, Trigger::GammaNegInt},
      {"gamma = -1, mu1 = 1/4", make_params({1, 4}, {3, 4}, {-3, 7}, {-11, 7}), V::Rational, Trigger::GammaNegInt},
      {"gamma = -2", make_params({1, 2}, {1, 2}, {1, 3}, {-11, 7}), V::Rational, Trigger::GammaNegInt},
      {"symmetric, gamma = 3", testing::symmetric(), V::DAlgebraicNotDFinite, Trigger::GammaPosInt},
      {"gamma = 3, gamma1 = 5", make_params({1, 3}, {2, 3}, {-5, 8}, {-1, 4}), V::DAlgebraicNotDFinite,
       Trigger::GammaPosInt},
      {"gamma1 = 3, gamma2 = -3", make_params({1, 3}, {2, 3}, {-2, 5}, {-13, 7}), V::DAlgebraicNotDFinite,
       Trigger::Gamma12Int},
      {"gamma1 = -1, gamma2 = 1", make_params({1, 2}, {1, 2}, -5, {1, 3}), V::DAlgebraicNotDFinite,
       Trigger::Gamma12Int},
      {"gamma1 = 5, gamma2 = 1", make_params({1, 3}, {2, 3}, {-5, 8}, {1, 5}), V::DAlgebraicNotDFinite,
       Trigger::Gamma12Int},
      {"transcendental", testing::transcendental(), V::DTranscendental, Trigger::NoDecoupling},
      {"gamma = -1/12", make_params({1, 4}, {3, 4}, {-5, 8}, {-11, 7}), V::DTranscendental, Trigger::NoDecoupling},
      {"appendix r1 = -1, gamma2 = 2", testing::appendix_r1(), V::DAlgebraicNotDFinite,
       Trigger::R1MinusOneGamma2Nat},
      {"r1 = -1, gamma2 = 1", make_params({1, 3}, {2, 3}, -1, {1, 5}), V::DAlgebraicNotDFinite,
       Trigger::R1MinusOneGamma2Nat},
      {"r1 = -1, gamma2 = 11/12", make_params({1, 4}, {3, 4}, -1, {1, 5}), V::DTranscendental,
       Trigger::NoDecoupling},
      {"r2 = -1, gamma1 = 5", make_params({1, 3}, {2, 3}, {-5, 8}, -1), V::DAlgebraicNotDFinite,
       Trigger::R2MinusOneGamma1Nat},
      {"r2 = -1, gamma1 = 21/4", make_params({1, 4}, {3, 4}, {-7, 11}, -1), V::DTranscendental,
       Trigger::NoDecoupling},
  };
}

// The rule table applied from scratch to the hand-derived constants.
Trigger oracle_trigger(const ModelParams& p) {
  const Rational one{1};
  const Rational mu1 = p.mu1;
  const Rational mu2 = p.mu2;
  const auto integer = [](const Rational& q) { return q.denominator() == 1; };
  const auto natural = [&](const Rational& q) { return integer(q) && q > 0; };
  if (p.r1 == Rational{-1}) {
    const Rational s2 = (mu1 - mu2 * p.r2) / (one + p.r2);
    return natural(mu2 + 2 * s2) ? Trigger::R1MinusOneGamma2Nat : Trigger::NoDecoupling;
  }
  const Rational s1 = (mu1 * p.r1 - mu2) / (one + p.r1);
  if (p.r2 == Rational{-1}) return natural(mu1 - 2 * s1) ? Trigger::R2MinusOneGamma1Nat : Trigger::NoDecoupling;
  const Rational s2 = (mu1 - mu2 * p.r2) / (one + p.r2);
  const Rational gamma = s2 - s1;
  if (integer(gamma) && gamma < 0) return Trigger::GammaNegInt;
  if (natural(gamma)) return Trigger::GammaPosInt;
  if (integer(mu1 - 2 * s1) && integer(mu2 + 2 * s2)) return Trigger::Gamma12Int;
  return Trigger::NoDecoupling;
}

Outcome criterion_classification() {
  Outcome v;
  std::vector<Trigger> seen;
  const auto fixture = classification_fixture();
  for (const Fixture& f : fixture) {
    const NatureClass got = classify(derive(normalize(f.params)));
    if (got.verdict != f.verdict || got.trigger != f.trigger) {
      v.fail(fmt::format("{}: got {}/{}, expected {}/{}", f.what, to_string(got.verdict), to_string(got.trigger),
                         to_string(f.verdict), to_string(f.trigger)));
    }
    if (oracle_trigger(f.params) != f.trigger) v.fail(fmt::format("{}: fixture disagrees with the rule table", f.what));
    if (std::find(seen.begin(), seen.end(), got.trigger) == seen.end()) seen.push_back(got.trigger);
  }
  if (fixture.size() != 15 || seen.size() != 6) v.fail(fmt::format("{} triggers covered", seen.size()));
  if (v.passed) v.detail = "15 exact sets, all 6 triggers";
  return v;
}

Outcome criterion_monte_carlo() {
  Outcome v;
  SimConfig config;
  config.params = testing::skew();
  config.dt = 1e-4;
  config.horizon = 2e3;
  config.seed = 1;
  const auto start = std::chrono::steady_clock::now();
  const MonteCarloOutcome mc = check_monte_carlo(config, kHistogramL1, false);
  const double elapsed = seconds_since(start);
  if (mc.laplace_grid.tolerance != kGridZ) v.fail("grid tolerance drifted");
  v.absorb(mc.laplace_grid, "grid");
  v.absorb(mc.histogram, "histogram");
  if (elapsed > kMonteCarloSeconds) v.fail(fmt::format("took {:.0f} s", elapsed));
  v.detail = fmt::format("grid max |z| {:.2f} (<= {}), histogram L1 {:.4f} (<= {}; {}), {:.0f} s", mc.laplace_grid.value,
                         kGridZ, mc.histogram.value, kHistogramL1, mc.histogram.detail, elapsed);
  return v;
}

}  // namespace

int main() {
  struct Criterion {
    const char* name;
    std::function<Outcome()> run;
  };
  const std::vector<Criterion> criteria{
      {"kernel uniformization", criterion_kernel},
      {"difference equation", criterion_difference_equation},
      {"functional equation", [] { return per_set([](const ModelParams& p) { return check_functional_equation(p); }); }},
      {"normalization", [] { return per_set([](const ModelParams& p) { return check_normalization(p); }); }},
      {"decoupling cross-form and growth", criterion_decoupling},
      {"general vs special consistency", criterion_consistency},
      {"theta duality and flatness", criterion_theta_duality},
      {"theta transforms and Mittag-Leffler", criterion_theta_laplace},
      {"density vs transform", criterion_density},
      {"homogeneity", criterion_homogeneity},
      {"classification regression", criterion_classification},
      {"Monte Carlo end-to-end", criterion_monte_carlo},
  };
  int failures = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    Outcome v;
    try {
      v = criteria[i].run();
    } catch (const std::exception& e) {
      v.fail(std::string("exception: ") + e.what());
    }
    if (!v.passed) ++failures;
    fmt::print("{} {:2} {}: {}\n", v.passed ? "PASS" : "FAIL", i + 1, criteria[i].name, v.detail);
    std::fflush(stdout);
  }
  fmt::print("{} of {} criteria passed\n", criteria.size() - failures, criteria.size());
  return failures == 0 ? 0 : 1;
}
