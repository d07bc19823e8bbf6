/*
 * Copyright 2026 The dgsum Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef DGSUM_TESTS_TEST_UTIL_HPP_
#define DGSUM_TESTS_TEST_UTIL_HPP_

#include <cmath>
#include <cstdint>
#include <map>
#include <random>
#include <vector>

#include <boost/math/distributions/chi_squared.hpp>

#include "dgsum/gaussian.hpp"
#include "dgsum/int_matrix.hpp"

namespace dgsum::testing {

inline IntMatrix random_matrix(std::mt19937_64& rng, std::size_t n, std::size_t m, int lo, int hi) {
  std::uniform_int_distribution<int> d(lo, hi);
  IntMatrix x(n, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < m; ++j) x(i, j) = d(rng);
  return x;
}

// Brute-force integer vectors with entries in [-b, b]^dim.
template <class F>
void for_each_box_point(std::size_t dim, int b, F&& f) {
  std::vector<std::int64_t> v(dim, -b);
  while (true) {
    f(v);
    std::size_t i = 0;
    while (i < dim && v[i] == b) v[i++] = -b;
    if (i == dim) return;
    ++v[i];
  }
}

struct GoodnessOfFit {
  double tvd = 0.0;
  double chi2 = 0.0;
  double p_value = 0.0;
  std::size_t dof = 0;
};

// Empirical counts against a pmf: total variation over the union of both
// supports, and Pearson chi-square with cells of expected count < 5 pooled.
inline GoodnessOfFit goodness_of_fit(const std::map<IntPoint, std::size_t>& counts,
                                     const DiscretePMF& pmf) {
  double n = 0.0;
  for (const auto& [p, c] : counts) n += static_cast<double>(c);
  auto q = pmf.as_map();
  GoodnessOfFit g;
  double tv = 0.0;
  for (const auto& [p, m] : q) {
    auto it = counts.find(p);
    tv += std::abs((it == counts.end() ? 0.0 : static_cast<double>(it->second)) / n - m);
  }
  double pooled_obs = 0.0, pooled_exp = 0.0;
  std::size_t cells = 0;
  for (const auto& [p, c] : counts)
    if (!q.count(p)) {
      tv += static_cast<double>(c) / n;
      pooled_obs += static_cast<double>(c);
    }
  g.tvd = 0.5 * tv;
  for (const auto& [p, m] : q) {
    auto it = counts.find(p);
    double obs = it == counts.end() ? 0.0 : static_cast<double>(it->second);
    double exp = m * n;
    if (exp < 5.0) {
      pooled_obs += obs;
      pooled_exp += exp;
      continue;
    }
    g.chi2 += (obs - exp) * (obs - exp) / exp;
    ++cells;
  }
  if (pooled_exp >= 5.0) {
    g.chi2 += (pooled_obs - pooled_exp) * (pooled_obs - pooled_exp) / pooled_exp;
    ++cells;
  }
  g.dof = cells > 1 ? cells - 1 : 1;
  boost::math::chi_squared dist(static_cast<double>(g.dof));
  g.p_value = boost::math::cdf(boost::math::complement(dist, g.chi2));
  return g;
}

}  // namespace dgsum::testing

#endif  // DGSUM_TESTS_TEST_UTIL_HPP_
