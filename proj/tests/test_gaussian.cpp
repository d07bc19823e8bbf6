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
#include <map>
#include <numbers>

#include <gtest/gtest.h>

#include "dgsum/gaussian.hpp"
#include "dgsum/sampler.hpp"

namespace dgsum {
namespace {

Eigen::VectorXd vec(std::initializer_list<double> v) {
  Eigen::VectorXd x(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double d : v) x(i++) = d;
  return x;
}

// sum_{|k| <= kmax} exp(-pi (k + c)^2 / s^2)
double theta1(double s, double c, int kmax) {
  double t = 0.0;
  for (int k = -kmax; k <= kmax; ++k) t += std::exp(-std::numbers::pi * (k + c) * (k + c) / (s * s));
  return t;
}

TEST(Rho, ValuesAndSymmetry) {
  EXPECT_EQ(rho(GaussianShape::spherical(1.0), Eigen::VectorXd::Zero(4)), 1.0);
  EXPECT_NEAR(rho(GaussianShape::spherical(2.0), vec({1, 1})), std::exp(-std::numbers::pi / 2), 1e-15);
  EXPECT_NEAR(std::exp(-std::numbers::pi / 2), 0.207880, 5e-7);
  Eigen::MatrixXd s = 2.0 * Eigen::MatrixXd::Identity(2, 2);
  EXPECT_NEAR(rho(GaussianShape::ellipsoidal(s), vec({1, 1})),
              rho(GaussianShape::spherical(2.0), vec({1, 1})), 1e-15);
  GaussianShape e = GaussianShape::ellipsoidal((Eigen::MatrixXd(2, 2) << 1, 2, 0, 3).finished());
  EXPECT_DOUBLE_EQ(rho(e, vec({0.3, -1.2})), rho(e, vec({-0.3, 1.2})));
}

TEST(Rho, EllipsoidalMatchesDirectQuadraticForm) {
  Eigen::MatrixXd s(3, 2);
  s << 1, 0.5, 0, 2, 1, 1;
  GaussianShape g = GaussianShape::ellipsoidal(s);
  Eigen::VectorXd x = vec({0.7, -0.4});
  double q = x.dot((s.transpose() * s).inverse() * x);
  EXPECT_NEAR(rho(g, x), std::exp(-std::numbers::pi * q), 1e-15);
}

TEST(Rho, ErrorsOnBadShapes) {
  GaussianShape e = GaussianShape::diagonal({1.0, 2.0});
  EXPECT_THROW(rho(e, vec({1, 2, 3})), DimensionMismatch);
  Eigen::MatrixXd sing(2, 2);
  sing << 1, 2, 2, 4;
  EXPECT_THROW(GaussianShape::ellipsoidal(sing), SingularMatrix);
  EXPECT_THROW(GaussianShape::spherical(0.0), InvalidArgument);
}

TEST(CosetMass, IntegersAtUnitParameter) {
  CosetMass cm = coset_mass(LatticeCoset::integer(1), GaussianShape::spherical(1.0), 10.0);
  EXPECT_NEAR(cm.mass, theta1(1.0, 0.0, 10), 1e-15);
  EXPECT_NEAR(cm.mass, 1.086435, 5e-7);
  EXPECT_EQ(cm.points, 21u);
  EXPECT_LT(cm.tail_bound, 1e-100);
  EXPECT_FALSE(cm.empty);
}

TEST(CosetMass, ShiftedRatioInsideBand) {
  const double s = 1.3;
  double a = coset_mass(LatticeCoset::integer(1), GaussianShape::spherical(s)).mass;
  double b = coset_mass(LatticeCoset::integer(vec({0.5})), GaussianShape::spherical(s)).mass;
  EXPECT_NEAR(b, theta1(s, 0.5, 40), 1e-14);
  EXPECT_LE(b / a, 1.0);
  EXPECT_GE(b / a, 0.99 / 1.01);
}

TEST(CosetMass, MonotoneInSAtFixedEuclideanRadius) {
  double prev = 0.0;
  for (double s : {0.5, 1.0, 2.0, 3.0}) {
    double m = coset_mass(LatticeCoset::integer(2), GaussianShape::spherical(s), 4.0 / s).mass;
    EXPECT_GT(m, prev);
    prev = m;
  }
}

TEST(CosetMass, TinyRadiusIsFlagged) {
  CosetMass cm = coset_mass(LatticeCoset::integer(vec({0.5})), GaussianShape::spherical(1.0), 0.1);
  EXPECT_TRUE(cm.empty);
  EXPECT_EQ(cm.mass, 0.0);
  EXPECT_EQ(cm.tail_bound, 1.0);
}

TEST(ExactPmf, IntegersAtUnitParameter) {
  DiscretePMF p = exact_pmf(LatticeCoset::integer(1), GaussianShape::spherical(1.0));
  EXPECT_NEAR(p.mass_at({0}), 1.0 / theta1(1.0, 0.0, 40), 1e-15);
  EXPECT_NEAR(p.mass_at({0}), 1.0 / 1.086435, 1e-6);
  EXPECT_NEAR(p.total(), 1.0, 1e-15);
}

TEST(ExactPmf, SymmetricAboutZero) {
  for (double s : {0.7, 2.5, 6.0}) {
    DiscretePMF p = exact_pmf(LatticeCoset::integer(1), GaussianShape::spherical(s));
    for (int k = 1; k < 10; ++k) EXPECT_DOUBLE_EQ(p.mass_at({k}), p.mass_at({-k}));
  }
}

TEST(ExactPmf, ScaledLatticeMatchesChangeOfVariable) {
  LatticeCoset two{IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2}}), vec({0})};
  DiscretePMF a = exact_pmf(two, GaussianShape::spherical(2.0));
  DiscretePMF b = exact_pmf(LatticeCoset::integer(1), GaussianShape::spherical(1.0));
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < b.size(); ++i)
    EXPECT_NEAR(a.mass_at({2 * b.points[i][0]}), b.masses[i], 1e-15);
}

TEST(ExactPmf, TailBoundShrinksWithRadiusAndCoversMass) {
  double prev = 2.0;
  for (double r : {1.0, 1.5, 2.0, 3.0, 4.0}) {
    CosetMass cm = coset_mass(LatticeCoset::integer(2), GaussianShape::spherical(1.5), r);
    EXPECT_LT(cm.tail_bound, prev);
    prev = cm.tail_bound;
    double full = std::pow(theta1(1.5, 0.0, 60), 2);
    EXPECT_LE(cm.mass, full * (1.0 + 1e-13));
    EXPECT_GE(cm.mass * (1.0 + cm.tail_bound), full);
  }
}

TEST(ExactPmf, SphericalPlaneIsProductOfLines) {
  const double s = 1.7;
  DiscretePMF p2 = exact_pmf(LatticeCoset::integer(2), GaussianShape::spherical(s), 6.0);
  DiscretePMF p1 = exact_pmf(LatticeCoset::integer(1), GaussianShape::spherical(s), 6.0);
  double err = 0.0;
  for (std::size_t i = 0; i < p2.size(); ++i)
    err = std::max(err, std::abs(p2.masses[i] - p1.mass_at({p2.points[i][0]}) * p1.mass_at({p2.points[i][1]})));
  EXPECT_LT(err, 1e-12);
}

TEST(ExactPmf, PushforwardMatchesEllipsoidalLatticePmf) {
  Eigen::MatrixXd s(2, 2);
  s << 1.2, 0.3, 0.0, 0.9;
  IntMatrix b = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2, 1}, {0, 3}});
  DiscretePMF base = exact_pmf(LatticeCoset::integer(2), GaussianShape::ellipsoidal(s));
  Eigen::MatrixXd sb = s * b.to_double().transpose();
  DiscretePMF lat = exact_pmf(LatticeCoset{b, vec({0, 0})}, GaussianShape::ellipsoidal(sb));
  ASSERT_EQ(base.size(), lat.size());
  auto lat_map = lat.as_map();
  for (std::size_t i = 0; i < base.size(); ++i) {
    IntPoint y = to_int64_vec(push_to_lattice(b, to_int_vec(base.points[i])));
    ASSERT_TRUE(lat_map.count(y));
    EXPECT_NEAR(lat_map[y], base.masses[i], 1e-14);
  }
}

TEST(PushToLattice, SmallCases) {
  IntMatrix id = IntMatrix::identity(2);
  EXPECT_EQ(push_to_lattice(id, to_int_vec({3, -4})), to_int_vec({3, -4}));
  IntMatrix d = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2, 0}, {0, 3}});
  EXPECT_EQ(push_to_lattice(d, to_int_vec({1, 1})), to_int_vec({2, 3}));
  EXPECT_THROW(push_to_lattice(d, to_int_vec({1, 1, 1})), DimensionMismatch);
}

}  // namespace
}  // namespace dgsum
