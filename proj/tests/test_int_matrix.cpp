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

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "dgsum/errors.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"
#include "dgsum/lattice.hpp"
#include "test_util.hpp"

namespace dgsum {
namespace {

TEST(IntMatrixText, RoundTripsThroughTheTextFormat) {
  IntMatrix x = parse_int_matrix("# comment\n1 -2 3\n\n40 5 -600000000000000000000\n");
  ASSERT_EQ(x.rows(), 2u);
  ASSERT_EQ(x.cols(), 3u);
  EXPECT_EQ(x(1, 2), BigInt("-600000000000000000000"));
  EXPECT_EQ(format_int_matrix(x), "1 -2 3\n40 5 -600000000000000000000\n");
  EXPECT_EQ(parse_int_matrix(format_int_matrix(x)), x);
}

TEST(IntMatrixText, RejectsBadTokensAndRaggedRows) {
  EXPECT_THROW(parse_int_matrix("1 x\n"), ParseError);
  EXPECT_THROW(parse_int_matrix("1 2\n3\n"), ParseError);
  EXPECT_THROW(parse_int_matrix("1.5 2\n"), ParseError);
}

TEST(IntMatrixText, RationalsAlwaysWrittenAsFractions) {
  RatMatrix r(1, 2);
  r(0, 0) = Rational(1, 2);
  r(0, 1) = Rational(3);
  EXPECT_EQ(format_rat_matrix(r), "1/2 3/1\n");
}

TEST(IntMatrixArith, ProductsAndTranspose) {
  IntMatrix a = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{1, 2}, {3, 4}});
  IntMatrix b = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{0, 1}, {1, 0}});
  IntMatrix ab = a * b;
  EXPECT_EQ(ab(0, 0), 2);
  EXPECT_EQ(ab(1, 1), 3);
  EXPECT_EQ(a.transpose()(0, 1), 3);
  IntVec v = a * IntVec{BigInt(1), BigInt(-1)};
  EXPECT_EQ(v[0], -1);
  EXPECT_EQ(v[1], -1);
}

TEST(IntMatrixArith, DivisionHelpersRoundCorrectly) {
  EXPECT_EQ(floor_div(BigInt(-7), BigInt(2)), -4);
  EXPECT_EQ(floor_div(BigInt(7), BigInt(2)), 3);
  EXPECT_EQ(round_div(BigInt(7), BigInt(2)), 4);
  EXPECT_EQ(round_div(BigInt(-5), BigInt(4)), -1);
}

TEST(ColumnHnf, TransformIsUnimodularAndEchelonMatches) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t n = 1 + trial % 3;
    std::size_t m = n + trial % 5;
    IntMatrix x = testing::random_matrix(rng, n, m, -5, 5);
    ColumnHnf h = column_hnf(x);
    EXPECT_EQ(x * h.transform, h.echelon);
    EXPECT_EQ(abs(gram_determinant(h.transform)), 1);
    for (std::size_t j = h.rank; j < m; ++j)
      for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(h.echelon(i, j), 0);
    for (std::size_t k = 0; k < h.rank; ++k) EXPECT_GT(h.echelon(h.pivot_rows[k], k), 0);
  }
}

TEST(ColumnHnf, SolveAndSurjectivity) {
  IntMatrix two = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2}});
  EXPECT_FALSE(solve_integer(two, IntVec{BigInt(1)}).has_value());
  EXPECT_FALSE(is_surjective(column_hnf(two)));
  IntMatrix x = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{2, 3}});
  auto sol = solve_integer(x, IntVec{BigInt(1)});
  ASSERT_TRUE(sol.has_value());
  EXPECT_EQ((x * *sol)[0], 1);
  EXPECT_TRUE(is_surjective(column_hnf(x)));
  IntMatrix dup = IntMatrix::from_rows(std::vector<std::vector<std::int64_t>>{{1, 2, 3}, {1, 2, 3}});
  EXPECT_EQ(rank(dup), 1u);
  EXPECT_FALSE(is_surjective(column_hnf(dup)));
}

TEST(ColumnHnf, SolveAgreesWithBruteForceMembership) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    IntMatrix x = testing::random_matrix(rng, 2, 3, -3, 3);
    for (int a = -3; a <= 3; ++a)
      for (int b = -3; b <= 3; ++b) {
        IntVec rhs{BigInt(a), BigInt(b)};
        auto sol = solve_integer(x, rhs);
        if (sol) {
          EXPECT_EQ(x * *sol, rhs);
        } else {
          // No preimage with small entries either.
          bool found = false;
          testing::for_each_box_point(3, 6, [&](const std::vector<std::int64_t>& v) {
            if (x * to_int_vec(v) == rhs) found = true;
          });
          EXPECT_FALSE(found);
        }
      }
  }
}

TEST(IndependentSubset, GreedyByIndex) {
  std::vector<IntVec> vs{to_int_vec({1, 0, 0}), to_int_vec({2, 0, 0}), to_int_vec({0, 1, 0}),
                         to_int_vec({1, 1, 0}), to_int_vec({0, 0, 3})};
  EXPECT_EQ(independent_subset(vs), (std::vector<std::size_t>{0, 2, 4}));
}

}  // namespace
}  // namespace dgsum
