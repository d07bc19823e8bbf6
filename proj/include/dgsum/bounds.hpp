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

#ifndef DGSUM_BOUNDS_HPP_
#define DGSUM_BOUNDS_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <optional>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/errors.hpp"
#include "dgsum/gaussian.hpp"
#include "dgsum/lattice.hpp"

namespace dgsum {

// erf(x) = (2/sqrt(pi)) * integral_0^x exp(-t^2) dt. Positive-term series for
// |x| <= 3, continued fraction for erfc beyond.
inline double erf(double x) {
  if (std::isnan(x)) return x;
  if (x < 0.0) return -erf(-x);
  if (x <= 3.0) {
    const double x2 = x * x;
    double term = x, sum = x;
    for (int k = 0; k < 200; ++k) {
      term *= 2.0 * x2 / (2.0 * k + 3.0);
      sum += term;
      if (term < 1e-17 * sum) break;
    }
    return 2.0 / std::sqrt(std::numbers::pi) * std::exp(-x2) * sum;
  }
  // erfc(x) = exp(-x^2)/sqrt(pi) / (x + (1/2)/(x + 1/(x + (3/2)/(x + ...))))
  double frac = x;
  for (int k = 80; k >= 1; --k) frac = x + 0.5 * k / frac;
  double erfc = std::exp(-x * x) / std::sqrt(std::numbers::pi) / frac;
  return 1.0 - erfc;
}

// Probability-tail estimate for ||v|| >= sigma_1(S) c sqrt(n), v from a
// discrete Gaussian over an n-dimensional lattice coset with smoothing slack
// eps: (1+eps)/(1-eps) * (c sqrt(2 pi e) exp(-pi c^2))^n.
inline double tail_bound_eval(std::size_t n, double eps, double c) {
  const double pi = std::numbers::pi;
  if (c < 1.0 / std::sqrt(2.0 * pi) * (1.0 - 1e-15))
    throw InvalidArgument("tail_bound_eval: c must be >= 1/sqrt(2 pi)");
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("tail_bound_eval: eps must lie in [0, 1)");
  double log_base = std::log(c) + 0.5 * std::log(2.0 * pi * std::numbers::e) - pi * c * c;
  return (1.0 + eps) / (1.0 - eps) * std::exp(static_cast<double>(n) * log_base);
}

// erf(q/2 + 2q/c) / erf(2q) * (1+eps)/(1-eps), q = ||v|| sqrt(pi) / sigma_n.
inline double shift_bound_eval(double norm_v, double sigma_n, double eps, double c) {
  if (!(c > 2.0)) throw InvalidArgument("shift_bound_eval: c must be > 2");
  if (!(sigma_n > 0.0)) throw InvalidArgument("shift_bound_eval: sigma_n must be > 0");
  if (!(norm_v > 0.0)) throw InvalidArgument("shift_bound_eval: ||v|| must be > 0");
  if (!(eps >= 0.0 && eps < 1.0)) throw InvalidArgument("shift_bound_eval: eps must lie in [0, 1)");
  double q = norm_v * std::sqrt(std::numbers::pi) / sigma_n;
  return erf(q / 2.0 + 2.0 * q / c) / erf(2.0 * q) * (1.0 + eps) / (1.0 - eps);
}

struct RatioBandReport {
  std::vector<double> ratios;  // rho_S(L + c) / rho_S(L) per shift
  double min_ratio = 0.0;
  double max_ratio = 0.0;
  double lower = 0.0;  // (1-eps)/(1+eps)
  double upper = 1.0;
  double slack = 0.0;  // truncation allowance applied to both ends
  bool contained = false;
  std::optional<bool> precondition_met;  // sigma_min >= smoothing bound, when lambda_n given
};

// Evaluates rho_S(L + c)/rho_S(L) over a grid of shifts and tests containment
// in [(1-eps)/(1+eps), 1]. A failed precondition is reported, not thrown.
inline RatioBandReport ratio_band_check(const IntMatrix& basis,
                                        const std::vector<Eigen::VectorXd>& shifts,
                                        const GaussianShape& shape, double eps,
                                        std::optional<double> lambda_n = std::nullopt,
                                        double radius = 0.0) {
  if (!(eps > 0.0 && eps < 1.0)) throw InvalidArgument("ratio_band_check: eps must lie in (0, 1)");
  if (shifts.empty()) throw InvalidArgument("ratio_band_check: empty shift grid");
  RatioBandReport rep;
  rep.lower = (1.0 - eps) / (1.0 + eps);
  if (lambda_n)
    rep.precondition_met =
        shape.sigma_min() >= smoothing_bound(basis.cols(), eps, *lambda_n).value;
  LatticeCoset base{basis, Eigen::VectorXd::Zero(static_cast<Eigen::Index>(basis.rows()))};
  CosetMass denom = coset_mass(base, shape, radius);
  rep.min_ratio = std::numeric_limits<double>::infinity();
  rep.max_ratio = -std::numeric_limits<double>::infinity();
  for (const auto& c : shifts) {
    CosetMass num = coset_mass(LatticeCoset{basis, c}, shape, radius);
    double r = num.mass / denom.mass;
    rep.ratios.push_back(r);
    rep.min_ratio = std::min(rep.min_ratio, r);
    rep.max_ratio = std::max(rep.max_ratio, r);
    rep.slack = std::max(rep.slack, num.tail_bound + denom.tail_bound);
  }
  rep.contained = rep.min_ratio >= rep.lower * (1.0 - rep.slack) &&
                  rep.max_ratio <= rep.upper * (1.0 + rep.slack);
  return rep;
}

}  // namespace dgsum

#endif  // DGSUM_BOUNDS_HPP_
