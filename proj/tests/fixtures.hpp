#pragma once

#include <algorithm>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "drbm/laplace.hpp"
#include "drbm/model.hpp"

namespace drbm::testing {

inline ModelParams make_params(Rational mu1, Rational mu2, Rational r1, Rational r2,
                               Rational sigma1 = 1, Rational sigma2 = 1) {
  return {mu1, mu2, sigma1, sigma2, r1, r2};
}

inline ModelParams symmetric() { return make_params({1, 2}, {1, 2}, {-1, 2}, {-1, 2}); }
inline ModelParams skew() { return make_params({1, 4}, {3, 4}, 1, -3); }
inline ModelParams transcendental() { return make_params({1, 2}, {1, 2}, {1, 2}, {1, 3}); }
inline ModelParams appendix_r1() { return make_params({1, 2}, {1, 2}, -1, {-1, 5}); }

inline bool usable(const ModelParams& p) {
  if (!validate(p).passed()) return false;
  try {
    derive(normalize(p));
    return true;
  } catch (const std::exception&) {
    return false;
  }
}

// Transform-case label, with the integer-gamma1 variant of GammaPosIntCase
// split out because its density takes a different form.
inline std::string case_label(const ModelParams& p) {
  const DerivedConstants c = derive(normalize(p));
  const TransformCase tc = build_case(c);
  std::string label = to_string(tc);
  if (tc.tag == TransformTag::GammaPosIntCase && is_integer(*c.gamma1)) label += "/integer-gamma1";
  if ((tc.tag == TransformTag::R1MinusOne || tc.tag == TransformTag::R2MinusOne) && tc.natural) {
    label += tc.odd ? "/odd" : "/even";
  }
  return label;
}

// Normalized parameter sets built from exact (mu1, s1, s2), bucketed by
// case label, at most `per_case` each. r1 = (mu2 + s1)/(mu1 - s1),
// r2 = (mu1 - s2)/(mu2 + s2); r = -1 is reached through a separate sweep.
inline std::map<std::string, std::vector<ModelParams>> case_catalogue(std::size_t per_case = 3) {
  // Candidates per label and drift, then picked round-robin over the drifts.
  std::map<std::string, std::map<Rational, std::vector<ModelParams>>> candidates;
  auto offer = [&](const ModelParams& p) {
    if (!usable(p)) return;
    auto& bucket = candidates[case_label(p)][p.mu1];
    if (std::find(bucket.begin(), bucket.end(), p) == bucket.end()) bucket.push_back(p);
  };
  const std::vector<Rational> mus{{1, 2}, {1, 4}, {3, 4}, {1, 3}, {2, 3}};
  std::vector<Rational> grid;
  for (int k = -30; k <= 30; ++k) grid.emplace_back(k, 12);
  for (const Rational& mu1 : mus) {
    const Rational mu2 = 1 - mu1;
    for (const Rational& s1 : grid) {
      if (s1 == mu1) continue;
      const Rational r1 = (mu2 + s1) / (mu1 - s1);
      for (const Rational& s2 : grid) {
        if (s2 == -mu2) continue;
        offer(make_params(mu1, mu2, r1, (mu1 - s2) / (mu2 + s2)));
      }
      // r2 = -1 with r1 from s1.
      offer(make_params(mu1, mu2, r1, -1));
      // r1 = -1 with r2 from s1 playing the role of s2.
      if (s1 != -mu2) offer(make_params(mu1, mu2, -1, (mu1 - s1) / (mu2 + s1)));
    }
  }
  std::map<std::string, std::vector<ModelParams>> out;
  for (auto& [label, by_mu] : candidates) {
    auto& picked = out[label];
    for (std::size_t round = 0; picked.size() < per_case; ++round) {
      bool any = false;
      for (auto& [mu1, sets] : by_mu) {
        // Spread each drift's picks over its candidate list.
        const std::size_t index = round * 7;
        if (index < sets.size() && picked.size() < per_case) {
          picked.push_back(sets[index]);
          any = true;
        }
      }
      if (!any) break;
    }
  }
  return out;
}

// Random valid raw parameters: small rationals for mu, sigma and r, with no
// reflection coefficient equal to -1 after normalization.
inline ModelParams random_raw_params(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> num(1, 12);
  std::uniform_int_distribution<int> den(1, 6);
  std::uniform_int_distribution<int> signed_num(-9, 9);
  for (;;) {
    ModelParams p{Rational(num(rng), den(rng)), Rational(num(rng), den(rng)),
                  Rational(num(rng), den(rng)), Rational(num(rng), den(rng)),
                  Rational(signed_num(rng), den(rng)), Rational(signed_num(rng), den(rng))};
    if (!usable(p)) continue;
    const NormalizedParams n = normalize(p);
    if (n.r1 != Rational{-1} && n.r2 != Rational{-1}) return p;
  }
}

}  // namespace drbm::testing
