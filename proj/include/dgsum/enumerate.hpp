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

#ifndef DGSUM_ENUMERATE_HPP_
#define DGSUM_ENUMERATE_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/errors.hpp"

namespace dgsum {

// Banaszczyk-type tail factor for a rank-k lattice coset under rho (s = 1):
//   rho((L + t) \ radius*Ball) <= factor * rho(L),
//   factor = 2 * (c * sqrt(2*pi*e) * exp(-pi*c^2))^k,  c = radius / sqrt(k).
// Returns +inf when c < 1/sqrt(2*pi), where the estimate is vacuous.
inline double gaussian_tail_factor(std::size_t k, double radius) {
  if (k == 0) return 0.0;
  const double pi = std::numbers::pi;
  double c = radius / std::sqrt(static_cast<double>(k));
  if (c < 1.0 / std::sqrt(2.0 * pi)) return std::numeric_limits<double>::infinity();
  double log_base = std::log(c) + 0.5 * std::log(2.0 * pi * std::numbers::e) -
                    pi * c * c;
  double f = 2.0 * std::exp(static_cast<double>(k) * log_base);
  return f;
}

// Smallest radius (up to bisection tolerance, rounded up) whose tail factor
// is at most `budget`.
inline double radius_for_tail(std::size_t k, double budget) {
  if (k == 0) return 0.0;
  if (!(budget > 0.0)) throw InvalidArgument("radius_for_tail: budget must be > 0");
  double lo = std::sqrt(static_cast<double>(k) / (2.0 * std::numbers::pi));
  double hi = lo + 1.0;
  while (gaussian_tail_factor(k, hi) > budget) hi *= 2.0;
  for (int it = 0; it < 100; ++it) {
    double mid = 0.5 * (lo + hi);
    if (gaussian_tail_factor(k, mid) > budget)
      lo = mid;
    else
      hi = mid;
  }
  return hi;
}

// Fincke-Pohst enumeration of integer coefficient vectors y with
// (y - center)^T G (y - center) <= radius^2 for a positive definite Gram G.
class Enumerator {
 public:
  using Callback =
      std::function<void(const std::vector<std::int64_t>& y, double dist_sq)>;

  explicit Enumerator(const Eigen::MatrixXd& gram) : k_(gram.rows()) {
    if (gram.rows() != gram.cols())
      throw DimensionMismatch("Enumerator: Gram must be square");
    Eigen::LLT<Eigen::MatrixXd> llt(gram);
    if (llt.info() != Eigen::Success)
      throw SingularMatrix("Enumerator: Gram matrix not positive definite");
    upper_ = llt.matrixU();
  }

  std::size_t rank() const { return static_cast<std::size_t>(k_); }

  // Visits every point in the ellipsoid; throws BudgetExceeded after
  // `budget` points. Returns the number of points visited.
  std::size_t run(const Eigen::VectorXd& center, double radius,
                  std::size_t budget, const Callback& visit) const {
    if (center.size() != k_) throw DimensionMismatch("Enumerator: center size");
    std::vector<std::int64_t> y(static_cast<std::size_t>(k_), 0);
    std::size_t count = 0;
    if (k_ == 0) {
      visit(y, 0.0);
      return 1;
    }
    // Slack so rounding never drops a point that sits on the boundary.
    const double r2 = radius * radius * (1.0 + 1e-9) + 1e-12;
    recurse(static_cast<Eigen::Index>(k_ - 1), 0.0, center, r2, y, count,
            budget, visit);
    return count;
  }

 private:
  void recurse(Eigen::Index i, double partial, const Eigen::VectorXd& center,
               double r2, std::vector<std::int64_t>& y, std::size_t& count,
               std::size_t budget, const Callback& visit) const {
    double uii = upper_(i, i);
    double shift = 0.0;
    for (Eigen::Index j = i + 1; j < k_; ++j)
      shift += upper_(i, j) * (static_cast<double>(y[static_cast<std::size_t>(j)]) - center(j));
    double mid = center(i) - shift / uii;
    double room = r2 - partial;
    if (room < 0.0) return;
    double width = std::sqrt(room) / std::abs(uii);
    auto lo = static_cast<std::int64_t>(std::ceil(mid - width));
    auto hi = static_cast<std::int64_t>(std::floor(mid + width));
    for (std::int64_t v = lo; v <= hi; ++v) {
      double d = uii * (static_cast<double>(v) - mid);
      double next = partial + d * d;
      if (next > r2) continue;
      y[static_cast<std::size_t>(i)] = v;
      if (i == 0) {
        if (++count > budget)
          throw BudgetExceeded("enumeration exceeded budget of " +
                               std::to_string(budget) + " points");
        visit(y, next);
      } else {
        recurse(i - 1, next, center, r2, y, count, budget, visit);
      }
    }
    y[static_cast<std::size_t>(i)] = 0;
  }

  Eigen::Index k_;
  Eigen::MatrixXd upper_;
};

// Enumerates points basis*y + shift whose distance to the origin, measured
// inside span(basis), is at most radius. The callback receives y and the full
// squared norm ||basis*y + shift||^2 (in-span part plus the fixed component of
// the shift orthogonal to the span).
inline std::size_t enumerate_coset(
    const Eigen::MatrixXd& basis, const Eigen::VectorXd& shift, double radius,
    std::size_t budget, const Enumerator::Callback& visit) {
  if (shift.size() != basis.rows())
    throw DimensionMismatch("enumerate_coset: shift size");
  Eigen::MatrixXd gram = basis.transpose() * basis;
  Enumerator en(gram);
  Eigen::VectorXd center = -gram.ldlt().solve(basis.transpose() * shift);
  Eigen::VectorXd par = basis * (-center);
  double residual = std::max(0.0, (shift - par).squaredNorm());
  return en.run(center, radius, budget,
                [&](const std::vector<std::int64_t>& y, double d) {
                  visit(y, d + residual);
                });
}

}  // namespace dgsum

#endif  // DGSUM_ENUMERATE_HPP_
