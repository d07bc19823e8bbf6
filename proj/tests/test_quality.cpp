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
#include <random>

#include <gtest/gtest.h>

#include "dgsum/hnf.hpp"
#include "dgsum/lattice.hpp"
#include "dgsum/quality.hpp"
#include "test_util.hpp"

namespace dgsum {
namespace {

IntMatrix rows(std::vector<std::vector<std::int64_t>> r) { return IntMatrix::from_rows(r); }

const IntMatrix kSmall = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{1, 0, 1}, {0, 1, 1}});

IntMatrix gaussian_matrix(std::size_t n, std::size_t m, double s, std::uint64_t seed) {
  SampleStream st{seed, 0, 0};
  IntMatrix x(n, m);
  for (std::size_t j = 0; j < m; ++j)
    for (std::size_t i = 0; i < n; ++i) x(i, j) = sample_dg_int(s, st);
  return x;
}

TEST(ColumnBound, Examples) {
  IntMatrix padded = rows({{1, 0, 0}, {0, 1, 0}});
  EXPECT_DOUBLE_EQ(column_bound(padded).value, 1.0);
  ColumnBound cb = column_bound(kSmall);
  EXPECT_EQ(cb.max_norm_sq, 2);
  EXPECT_DOUBLE_EQ(cb.value, std::sqrt(2.0));
}

TEST(ColumnBound, MatchesBruteForceResummation) {
  std::mt19937_64 rng(3);
  for (int t = 0; t < 50; ++t) {
    IntMatrix x = testing::random_matrix(rng, 3, 9, -20, 20);
    long long best = 0;
    for (std::size_t j = 0; j < x.cols(); ++j) {
      long long s = 0;
      for (std::size_t i = 0; i < x.rows(); ++i) {
        long long v = static_cast<long long>(x(i, j));
        s += v * v;
      }
      best = std::max(best, s);
    }
    EXPECT_EQ(column_bound(x).max_norm_sq, best);
  }
}

TEST(Pigeonhole, VisibleRelations) {
  auto a = pigeonhole_collision({{1}, {1}}, 1);
  EXPECT_TRUE((a == std::vector<int>{1, -1}) || (a == std::vector<int>{-1, 1}));
  auto b = pigeonhole_collision({{1, 0}, {0, 1}, {1, 1}}, 1);
  EXPECT_TRUE((b == std::vector<int>{1, 1, -1}) || (b == std::vector<int>{-1, -1, 1}));
}

TEST(Pigeonhole, LengthFormula) {
  EXPECT_EQ(pigeonhole_length(3, 4), 21u);  // floor(6 log2 12)
  EXPECT_EQ(pigeonhole_length(2, 2), 8u);
  EXPECT_EQ(pigeonhole_length(2, 4), 12u);
}

TEST(Pigeonhole, RandomInstancesAlwaysVerify) {
  std::mt19937_64 rng(17);
  for (int t = 0; t < 200; ++t) {
    std::size_t n = 3;
    std::int64_t bound = 4;
    std::size_t l = pigeonhole_length(n, bound);
    std::uniform_int_distribution<int> d(-4, 4);
    std::vector<IntPoint> xs(l, IntPoint(n));
    for (auto& x : xs)
      for (auto& v : x) v = d(rng);
    auto alpha = pigeonhole_collision(xs, bound);
    ASSERT_EQ(alpha.size(), l);
    bool nonzero = false;
    IntPoint sum(n, 0);
    for (std::size_t j = 0; j < l; ++j) {
      ASSERT_TRUE(alpha[j] >= -1 && alpha[j] <= 1);
      nonzero |= alpha[j] != 0;
      for (std::size_t i = 0; i < n; ++i) sum[i] += alpha[j] * xs[j][i];
    }
    EXPECT_TRUE(nonzero);
    EXPECT_EQ(sum, IntPoint(n, 0));
  }
}

TEST(Pigeonhole, PreconditionsAreChecked) {
  EXPECT_THROW(pigeonhole_collision({{5}}, 4), InvalidArgument);
  EXPECT_THROW(pigeonhole_collision({{1}, {2}}, 4), CollisionNotFound);
  EXPECT_THROW(pigeonhole_collision({{1, 2}, {3}}, 4), DimensionMismatch);
}

void expect_dual_system(const IntMatrix& x, const std::vector<IntVec>& u) {
  ASSERT_EQ(u.size(), x.rows());
  auto xr = x.row_list();
  for (std::size_t i = 0; i < u.size(); ++i) {
    for (std::size_t j = 0; j < u.size(); ++j) {
      EXPECT_EQ(dot(u[i], xr[j]), i == j ? 1 : 0);
      if (i != j) {
        EXPECT_EQ(dot(u[i], u[j]), 0);
      }
    }
  }
}

TEST(FindDualVectors, SmallExample) {
  SampleStream st{1, 0, 0};
  CollisionSearchParams p;
  p.prefix_budget = 3;
  p.memory_budget = 1000;
  DualVectors dv = find_dual_vectors(kSmall, p, st);
  expect_dual_system(kSmall, dv.u);
  EXPECT_TRUE(certify_quality(kSmall, dv.u).verified);
}

TEST(FindDualVectors, IdentitySubmatrixAndCoefficientRange) {
  IntMatrix x = rows({{3, 1, 0, 2, 5}, {1, 0, 1, -2, 7}});
  SampleStream st{2, 0, 0};
  CollisionSearchParams p;
  p.prefix_budget = 5;
  p.memory_budget = 5000;
  DualVectors dv = find_dual_vectors(x, p, st);
  expect_dual_system(x, dv.u);
  for (const auto& u : dv.u)
    for (const auto& e : u) EXPECT_LE(abs(e), 2);
}

TEST(FindDualVectors, ReplaysWithTheSameSeed) {
  IntMatrix x = gaussian_matrix(2, 40, 3.0, 9);
  auto p = CollisionSearchParams::schedule(2, 3.0, 40);
  SampleStream a{77, 0, 0}, b{77, 0, 0};
  EXPECT_EQ(find_dual_vectors(x, p, a).u, find_dual_vectors(x, p, b).u);
}

TEST(FindDualVectors, GaussianInstancesMostlySucceed) {
  int ok = 0;
  for (std::uint64_t t = 0; t < 20; ++t) {
    IntMatrix x = gaussian_matrix(2, 64, 3.0, 1000 + t);
    SampleStream st{t, 1, 0};
    try {
      DualVectors dv = find_dual_vectors(x, CollisionSearchParams::schedule(2, 3.0, 64), st);
      QualityCertificate c = certify_quality(x, dv.u);
      ASSERT_TRUE(c.verified) << c.reason;
      ++ok;
    } catch (const CollisionNotFound&) {
    }
  }
  EXPECT_GE(ok, 18);
}

TEST(FindDualVectors, RejectsRankDeficientAndBadBudgets) {
  SampleStream st{1, 0, 0};
  CollisionSearchParams p;
  p.prefix_budget = 3;
  EXPECT_THROW(find_dual_vectors(rows({{1, 2, 3}, {2, 4, 6}}), p, st), RankDeficient);
  p.prefix_budget = 4;
  EXPECT_THROW(find_dual_vectors(kSmall, p, st), InvalidArgument);
}

TEST(ExactDualFallback, Examples) {
  EXPECT_THROW(exact_dual_fallback(rows({{2}})), NotSurjective);
  auto u = exact_dual_fallback(kSmall);
  expect_dual_system(kSmall, u);
  QualityCertificate c = certify_quality(kSmall, u);
  EXPECT_TRUE(c.verified);
  EXPECT_LE(c.q2, std::sqrt(2.0) + 1e-12);
  // Square unimodular X: the columns of X^{-1}, which need not be orthogonal.
  auto sq = exact_dual_fallback(rows({{2, 1}, {1, 1}}));
  EXPECT_EQ(sq[0], to_int_vec({1, -1}));
  EXPECT_EQ(sq[1], to_int_vec({-1, 2}));
  EXPECT_EQ(certify_quality(rows({{2, 1}, {1, 1}}), sq).reason, "orthogonality(1,2)");
}

TEST(ExactDualFallback, SharesTheVerifierWithTheSearch) {
  for (std::uint64_t t = 0; t < 10; ++t) {
    IntMatrix x = gaussian_matrix(2, 12, 3.0, 500 + t);
    if (!is_surjective(column_hnf(x))) {
      EXPECT_THROW(exact_dual_fallback(x), Error);
      continue;
    }
    auto u = exact_dual_fallback(x);
    QualityCertificate c = certify_quality(x, u);
    EXPECT_TRUE(c.verified) << c.reason;
  }
}

TEST(CertifyQuality, HandCheckedAndViolations) {
  std::vector<IntVec> u{to_int_vec({1, 0, 0}), to_int_vec({0, 1, 0})};
  QualityCertificate c = certify_quality(kSmall, u);
  EXPECT_TRUE(c.verified);
  EXPECT_DOUBLE_EQ(c.q1, std::sqrt(2.0));
  EXPECT_DOUBLE_EQ(c.q2, 1.0);
  // u1 . x2 = 1
  QualityCertificate bad = certify_quality(kSmall, {to_int_vec({1, 1, 0}), to_int_vec({0, 1, 0})});
  EXPECT_FALSE(bad.verified);
  EXPECT_EQ(bad.reason, "duality(1,2)");
  IntMatrix x = rows({{1, 0, 0}, {0, 1, 0}});
  QualityCertificate nonorth = certify_quality(x, {to_int_vec({1, 0, 1}), to_int_vec({0, 1, 1})});
  EXPECT_FALSE(nonorth.verified);
  EXPECT_EQ(nonorth.reason.rfind("orthogonality", 0), 0u);
  EXPECT_EQ(certify_quality(kSmall, u, std::nullopt, 0.5).reason, "u_norm(1)");
  EXPECT_EQ(certify_quality(kSmall, u, 1.0).reason, "column_norm(3)");
  EXPECT_EQ(certify_quality(kSmall, {u[0]}).reason.rfind("dimension", 0), 0u);
}

TEST(CertifyQuality, VerifiedImpliesSurjective) {
  std::mt19937_64 rng(4);
  int verified = 0;
  for (int t = 0; t < 200; ++t) {
    IntMatrix x = testing::random_matrix(rng, 2, 5, -2, 2);
    if (rank(x) != 2 || !is_surjective(column_hnf(x))) continue;
    auto u = exact_dual_fallback(x);
    QualityCertificate c = certify_quality(x, u);
    ASSERT_TRUE(c.verified);
    ColumnHnf h = column_hnf(x);
    EXPECT_EQ(h.rank, 2u);
    EXPECT_TRUE(is_surjective(h));
    ++verified;
  }
  EXPECT_GT(verified, 50);
}

TEST(KlpVectors, SmallExample) {
  QualityCertificate c = certify_quality(kSmall, {to_int_vec({1, 0, 0}), to_int_vec({0, 1, 0})});
  KLPBasis k = klp_vectors(kSmall, c);
  ASSERT_EQ(k.v.size(), 3u);
  EXPECT_EQ(k.v[2], to_int_vec({-1, -1, 1}));
  EXPECT_DOUBLE_EQ(norm(k.v[2]), std::sqrt(3.0));
  EXPECT_LE(norm(k.v[2]), 1.0 + std::sqrt(2.0));
  EXPECT_EQ(k.independent_subset, (std::vector<std::size_t>{2}));
  // Columns that are unit vectors e_i give v_k = e_k - u_i.
  EXPECT_TRUE(is_zero(k.v[0]));
  EXPECT_TRUE(is_zero(k.v[1]));
}

TEST(KlpVectors, RequiresVerifiedCertificate) {
  QualityCertificate c;
  EXPECT_THROW(klp_vectors(kSmall, c), InvalidArgument);
}

TEST(KlpVectors, ChainOnRandomCertifiedInstances) {
  for (std::uint64_t t = 0; t < 30; ++t) {
    std::size_t n = 1 + t % 3;
    std::size_t m = n + 4 + t % 20;
    IntMatrix x = gaussian_matrix(n, m, 2.0, 3000 + t);
    if (rank(x) != n || !is_surjective(column_hnf(x))) continue;
    QualityCertificate c = certify_quality(x, exact_dual_fallback(x));
    ASSERT_TRUE(c.verified);
    KLPBasis k = klp_vectors(x, c);
    BigInt bound = 0;
    for (const auto& v : k.v) {
      EXPECT_TRUE(is_zero(x * v));
      // ||v||^2 <= ceil((1 + q1 q2)^2), compared exactly.
      EXPECT_TRUE(within_one_plus_sqrt(norm_sq(v), c.q1_sq * c.q2_sq));
      EXPECT_LE(static_cast<double>(norm_sq(v)), std::ceil(std::pow(1.0 + c.q1 * c.q2, 2)));
    }
    EXPECT_EQ(k.independent_subset.size(), m - n);
    // The KLP set is never shorter than the LLL-reduced kernel.
    auto klp = successive_minima_upper(LatticeBasis::from_columns(IntMatrix::from_cols([&] {
      std::vector<IntVec> sel;
      for (auto i : k.independent_subset) sel.push_back(k.v[i]);
      return sel;
    }())));
    auto lll = successive_minima_upper(lll_reduce(integer_kernel(x)));
    EXPECT_GE(klp.back() + 1e-12, lll.back());
    EXPECT_LE(lll.back(), 1.0 + c.q1 * c.q2);
  }
}

TEST(WithinOnePlusSqrt, ExactBoundary) {
  // (1 + sqrt 2)^2 = 3 + 2 sqrt 2 = 5.83
  EXPECT_TRUE(within_one_plus_sqrt(5, 2));
  EXPECT_FALSE(within_one_plus_sqrt(6, 2));
  EXPECT_TRUE(within_one_plus_sqrt(9, 4));
  EXPECT_FALSE(within_one_plus_sqrt(10, 4));
  EXPECT_TRUE(within_one_plus_sqrt(0, 0));
}

TEST(InstanceThreshold, ValuesAndMonotonicity) {
  double v = theorem32_threshold(1, 1, 3, 1, 0.001);
  EXPECT_NEAR(v, 2.0 * std::sqrt(std::log(4004.0) / std::numbers::pi), 1e-14);
  EXPECT_NEAR(v, 3.2499, 5e-5);
  EXPECT_NEAR(theorem32_threshold(3, 1, 3, 1, 0.001), 2.0 * v, 1e-12);
  EXPECT_GT(theorem32_threshold(1, 1, 3, 1, 0.0001), v);
  EXPECT_THROW(theorem32_threshold(1, 1, 2, 2, 0.01), InvalidArgument);
  EXPECT_THROW(theorem32_threshold(1, 1, 3, 1, 0.34), InvalidArgument);
}

TEST(InstanceThreshold, EqualsScaledSmoothingBound) {
  for (std::size_t m : {3u, 8u, 30u})
    for (double eps : {0.2, 0.01, 1e-5}) {
      double q1 = 2.5, q2 = 1.7;
      EXPECT_NEAR(theorem32_threshold(q1, q2, m, 2, eps),
                  (1 + q1 * q2) * smoothing_bound(m - 2, eps, 1.0).value, 1e-12);
    }
}

TEST(ImpliedEps, InvertsTheThreshold) {
  for (double eps : {0.2, 0.01, 1e-4}) {
    double r = theorem32_threshold(2, 1.5, 10, 2, eps);
    auto back = implied_eps(r, 2, 1.5, 10, 2);
    ASSERT_TRUE(back.has_value());
    EXPECT_NEAR(*back / eps, 1.0, 1e-9);
  }
  EXPECT_FALSE(implied_eps(0.5, 2, 1.5, 10, 2).has_value());
}

TEST(NominalParameterCheck, SThresholdAndGate) {
  GaussianShape s = GaussianShape::spherical(20.0);
  GaussianShape r = GaussianShape::spherical(1e12);
  NominalParameterReport rep = theorem51_check(100, 1000000, 1e-4, s, r);
  EXPECT_NEAR(rep.s_condition.rhs, 9.0 * std::sqrt(std::log(200.0 * 10001.0) / std::numbers::pi), 1e-12);
  EXPECT_NEAR(rep.s_condition.rhs, 19.34, 0.005);
  EXPECT_TRUE(rep.applicable);
  EXPECT_TRUE(rep.all_pass);
  NominalParameterReport small = theorem51_check(2, 16, 0.01, GaussianShape::spherical(3.0), GaussianShape::spherical(30.0));
  EXPECT_FALSE(small.applicable);
  EXPECT_NEAR(small.m_condition.rhs, 60.0 * std::log2(6.0), 1e-12);
  EXPECT_FALSE(small.m_condition.pass);
}

TEST(NominalQuality, FormulaValues) {
  auto [q1, q2] = nominal_quality(2, 64, 3.0);
  EXPECT_NEAR(q1, 3.0 * std::sqrt(12.0), 1e-12);
  EXPECT_NEAR(q2, 2.0 * std::sqrt(60.0 * std::log2(6.0)), 1e-12);
}

}  // namespace
}  // namespace dgsum
