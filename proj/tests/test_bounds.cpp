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

#include <cmath>
#include <numbers>

#include <gtest/gtest.h>

#include "dgsum/bounds.hpp"
#include "dgsum/gaussian.hpp"
#include "dgsum/lattice.hpp"
#include "dgsum/sampler.hpp"

namespace dgsum {
namespace {

const double kPi = std::numbers::pi;

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

TEST(Erf, AgreesWithTheStandardLibrary) {
  for (double x = -7.0; x <= 7.0; x += 0.01) EXPECT_NEAR(dgsum::erf(x), std::erf(x), 1e-12) << x;
  EXPECT_EQ(dgsum::erf(0.0), 0.0);
  EXPECT_NEAR(dgsum::erf(3.0), std::erf(3.0), 1e-15);
  EXPECT_NEAR(dgsum::erf(3.0 + 1e-9), std::erf(3.0 + 1e-9), 1e-15);
}

TEST(TailBoundEval, DegenerateEndpointIsVacuous) {
  double c = 1.0 / std::sqrt(2.0 * kPi);
  EXPECT_NEAR(tail_bound_eval(3, 0.1, c), 1.1 / 0.9, 1e-12);
  EXPECT_THROW(tail_bound_eval(3, 0.1, 0.3), InvalidArgument);
}

TEST(TailBoundEval, LogCoefficientCase) {
  double c = std::sqrt(std::log2(1024.0));
  double base = std::sqrt(10.0 * 2.0 * kPi * std::numbers::e) * std::exp(-10.0 * kPi);
  EXPECT_NEAR(tail_bound_eval(2, 1e-3, c) / (1.001 / 0.999 * base * base), 1.0, 1e-12);
}

TEST(TailBoundEval, ExactTailOfPlaneGaussianIsBelowBound) {
  // For Z^2 at s = 1 the smoothing parameter is exactly 1 for eps = theta(1)^2 - 1.
  double theta = 0.0;
  for (int k = -40; k <= 40; ++k) theta += std::exp(-kPi * k * k);
  const double eps = theta * theta - 1.0;
  DiscretePMF p = exact_pmf(LatticeCoset::integer(2), GaussianShape::spherical(1.0), 8.0);
  for (double c : {1.0, 1.5, 2.0}) {
    double tail = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) {
      double r2 = static_cast<double>(p.points[i][0] * p.points[i][0] + p.points[i][1] * p.points[i][1]);
      if (r2 >= 2.0 * c * c) tail += p.masses[i];
    }
    EXPECT_LE(tail, tail_bound_eval(2, eps, c)) << c;
  }
}

TEST(TailBoundEval, SampledTailIsBelowBound) {
  double theta = 0.0;
  for (int k = -40; k <= 40; ++k) theta += std::exp(-kPi * k * k);
  const double eps = theta * theta - 1.0;
  SampleStream st{314, 0, 0};
  const int n = 200000;
  int hits[3] = {0, 0, 0};
  const double cs[3] = {1.0, 1.5, 2.0};
  for (int i = 0; i < n; ++i) {
    double a = static_cast<double>(sample_dg_int(1.0, st));
    double b = static_cast<double>(sample_dg_int(1.0, st));
    for (int j = 0; j < 3; ++j)
      if (a * a + b * b >= 2.0 * cs[j] * cs[j]) ++hits[j];
  }
  for (int j = 0; j < 3; ++j) EXPECT_LE(hits[j] / static_cast<double>(n), tail_bound_eval(2, eps, cs[j]));
}

TEST(ShiftBoundEval, SmallGapConstant) {
  const double sigma = 9.0 * std::sqrt(std::log(2.0 * 100.0 * (1.0 + 1e4)) / kPi);
  double v = shift_bound_eval(1.0, sigma, 1e-4, 8.0);
  double direct = std::erf(3.0 * std::sqrt(kPi) / (4.0 * sigma)) / std::erf(2.0 * std::sqrt(kPi) / sigma) *
                  (1.0 + 1e-4) / (1.0 - 1e-4);
  EXPECT_NEAR(v, direct, 1e-12);
  EXPECT_LT(v, 0.39);
}

TEST(ShiftBoundEval, IncreasesAsSigmaDecreases) {
  double prev = 0.0;
  for (double sigma = 100.0; sigma >= 0.5; sigma *= 0.8) {
    double v = shift_bound_eval(1.0, sigma, 0.01, 8.0);
    EXPECT_GT(v, prev);
    prev = v;
  }
  EXPECT_THROW(shift_bound_eval(1.0, 1.0, 0.01, 2.0), InvalidArgument);
  EXPECT_THROW(shift_bound_eval(1.0, 0.0, 0.01, 3.0), InvalidArgument);
}

TEST(ShiftBoundEval, IntervalShiftDifferencesStayBelowBound) {
  for (double eps : {0.1, 0.01}) {
    const double c = 8.0;
    const double s = (1.0 + c) * smoothing_bound(1, eps, 1.0).value;
    DiscretePMF p = exact_pmf(LatticeCoset::integer(1), GaussianShape::spherical(s));
    auto mass = p.as_map();
    auto prob = [&](long a, long b) {
      double t = 0.0;
      for (long k = a; k <= b; ++k) {
        auto it = mass.find({k});
        if (it != mass.end()) t += it->second;
      }
      return t;
    };
    const double bound = shift_bound_eval(1.0, s, eps, c);
    double worst = 0.0;
    for (long a = -60; a <= 60; ++a)
      for (long b = a; b <= 60; ++b) worst = std::max(worst, prob(a, b) - prob(a - 1, b - 1));
    EXPECT_LE(worst, bound);
    EXPECT_GT(worst, 0.0);
  }
}

TEST(RatioBandCheck, ZeroShiftIsUpperEndpoint) {
  RatioBandReport r = ratio_band_check(IntMatrix::identity(1), {vec({0.0})}, GaussianShape::spherical(1.3), 0.01);
  EXPECT_NEAR(r.max_ratio, 1.0, 1e-15);
  EXPECT_TRUE(r.contained);
}

TEST(RatioBandCheck, HalfShiftAtSmoothingParameter) {
  const double s = 1.3;
  RatioBandReport r = ratio_band_check(IntMatrix::identity(1), {vec({0.5})}, GaussianShape::spherical(s), 0.01, 1.0);
  double num = 0.0, den = 0.0;
  for (int k = -50; k <= 50; ++k) {
    num += std::exp(-kPi * (k + 0.5) * (k + 0.5) / (s * s));
    den += std::exp(-kPi * k * k / (s * s));
  }
  EXPECT_NEAR(r.ratios[0], num / den, 1e-14);
  EXPECT_GE(r.ratios[0], 0.9802);
  EXPECT_LE(r.ratios[0], 1.0);
  EXPECT_TRUE(r.contained);
  ASSERT_TRUE(r.precondition_met.has_value());
  EXPECT_TRUE(*r.precondition_met);
}

TEST(RatioBandCheck, NarrowParameterViolatesBand) {
  RatioBandReport r = ratio_band_check(IntMatrix::identity(1), {vec({0.5})}, GaussianShape::spherical(0.2), 0.01, 1.0);
  EXPECT_FALSE(r.contained);
  EXPECT_FALSE(*r.precondition_met);
  EXPECT_LT(r.min_ratio, 1e-5);
}

TEST(RatioBandCheck, TwoDimensionalGrid) {
  IntMatrix b = IntMatrix::from_cols({to_int_vec({1, 0}), to_int_vec({1, 2})});
  const double eps = 0.01;
  auto lam = successive_minima_upper(lll_reduce(LatticeBasis::from_columns(b)));
  double s = smoothing_bound(2, eps, lam.back()).value;
  std::vector<Eigen::VectorXd> grid;
  for (double a = 0.0; a < 1.0; a += 0.25)
    for (double c = 0.0; c < 2.0; c += 0.5) grid.push_back(vec({a, c}));
  RatioBandReport r = ratio_band_check(b, grid, GaussianShape::spherical(s), eps, lam.back());
  EXPECT_TRUE(*r.precondition_met);
  EXPECT_TRUE(r.contained);
  EXPECT_EQ(r.ratios.size(), grid.size());
}

}  // namespace
}  // namespace dgsum
