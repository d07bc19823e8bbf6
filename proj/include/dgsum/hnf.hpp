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

#ifndef DGSUM_HNF_HPP_
#define DGSUM_HNF_HPP_

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "dgsum/int_matrix.hpp"

namespace dgsum {

struct ExtendedGcd {
  BigInt g;  // gcd(a, b) >= 0
  BigInt s;
  BigInt t;  // s*a + t*b == g
};

inline ExtendedGcd extended_gcd(const BigInt& a, const BigInt& b) {
  BigInt old_r = a, r = b, old_s = 1, s = 0, old_t = 0, t = 1;
  while (r != 0) {
    BigInt q = old_r / r;
    BigInt tmp = old_r - q * r;
    old_r = r;
    r = tmp;
    tmp = old_s - q * s;
    old_s = s;
    s = tmp;
    tmp = old_t - q * t;
    old_t = t;
    t = tmp;
  }
  if (old_r < 0) return {-old_r, -old_s, -old_t};
  return {old_r, old_s, old_t};
}

// Column-style Hermite normal form: X * transform == echelon, with transform
// unimodular. The first `rank` columns of `echelon` are lower-echelon with
// positive pivots at (pivot_rows[k], k); the remaining columns are zero, so
// the trailing columns of `transform` form a basis of the integer kernel.
struct ColumnHnf {
  IntMatrix echelon;
  IntMatrix transform;
  std::vector<std::size_t> pivot_rows;
  std::size_t rank = 0;
};

namespace detail {

// col_a <- s*col_a + t*col_b, col_b <- u*col_a + v*col_b (old values).
inline void combine_columns(IntMatrix& m, std::size_t a, std::size_t b,
                            const BigInt& s, const BigInt& t, const BigInt& u,
                            const BigInt& v) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    BigInt xa = m(i, a);
    BigInt xb = m(i, b);
    m(i, a) = s * xa + t * xb;
    m(i, b) = u * xa + v * xb;
  }
}

inline void axpy_column(IntMatrix& m, std::size_t dst, std::size_t src,
                        const BigInt& q) {
  if (q == 0) return;
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, dst) -= q * m(i, src);
}

inline void negate_column(IntMatrix& m, std::size_t c) {
  for (std::size_t i = 0; i < m.rows(); ++i) m(i, c) = -m(i, c);
}

}  // namespace detail

inline ColumnHnf column_hnf(const IntMatrix& x) {
  ColumnHnf out;
  out.echelon = x;
  out.transform = IntMatrix::identity(x.cols());
  IntMatrix& w = out.echelon;
  IntMatrix& u = out.transform;
  const std::size_t m = x.cols();
  std::size_t p = 0;
  for (std::size_t i = 0; i < x.rows() && p < m; ++i) {
    for (std::size_t j = p + 1; j < m; ++j) {
      if (w(i, j) == 0) continue;
      BigInt a = w(i, p);
      BigInt b = w(i, j);
      ExtendedGcd e = extended_gcd(a, b);
      BigInt bg = b / e.g;
      BigInt ag = a / e.g;
      // [s -b/g; t a/g] has determinant 1.
      detail::combine_columns(w, p, j, e.s, e.t, -bg, ag);
      detail::combine_columns(u, p, j, e.s, e.t, -bg, ag);
    }
    if (w(i, p) == 0) continue;
    if (w(i, p) < 0) {
      detail::negate_column(w, p);
      detail::negate_column(u, p);
    }
    // Reduce the entries left of the pivot into [0, pivot).
    for (std::size_t q = 0; q < p; ++q) {
      BigInt f = floor_div(w(i, q), w(i, p));
      detail::axpy_column(w, q, p, f);
      detail::axpy_column(u, q, p, f);
    }
    out.pivot_rows.push_back(i);
    ++p;
  }
  out.rank = p;
  return out;
}

// Solves x * u == b over the integers. Returns nullopt when b is not in the
// integer column span of x.
inline std::optional<IntVec> solve_integer(const ColumnHnf& h, const IntVec& b) {
  const IntMatrix& w = h.echelon;
  if (b.size() != w.rows()) throw DimensionMismatch("solve_integer: rhs size");
  IntVec y(h.rank, BigInt(0));
  for (std::size_t k = 0; k < h.rank; ++k) {
    std::size_t i = h.pivot_rows[k];
    BigInt r = b[i];
    for (std::size_t l = 0; l < k; ++l) r -= w(i, l) * y[l];
    if (r % w(i, k) != 0) return std::nullopt;
    y[k] = r / w(i, k);
  }
  for (std::size_t i = 0; i < w.rows(); ++i) {
    BigInt s = 0;
    for (std::size_t l = 0; l < h.rank; ++l) s += w(i, l) * y[l];
    if (s != b[i]) return std::nullopt;
  }
  IntVec sol(w.cols(), BigInt(0));
  for (std::size_t r = 0; r < sol.size(); ++r)
    for (std::size_t l = 0; l < h.rank; ++l) sol[r] += h.transform(r, l) * y[l];
  return sol;
}

inline std::optional<IntVec> solve_integer(const IntMatrix& x, const IntVec& b) {
  return solve_integer(column_hnf(x), b);
}

// True when x * Z^m == Z^n: full row rank and every pivot equal to one.
inline bool is_surjective(const ColumnHnf& h) {
  if (h.rank != h.echelon.rows()) return false;
  for (std::size_t k = 0; k < h.rank; ++k)
    if (h.echelon(h.pivot_rows[k], k) != 1) return false;
  return true;
}

inline std::size_t rank(const IntMatrix& x) { return column_hnf(x).rank; }

// Greedy rank tracker over exact integer vectors (fraction-free elimination).
class IncrementalRank {
 public:
  explicit IncrementalRank(std::size_t dim) : dim_(dim) {}

  // Adds v if it is independent of the vectors kept so far.
  bool try_add(const IntVec& v) {
    if (v.size() != dim_) throw DimensionMismatch("IncrementalRank: length");
    IntVec r = v;
    for (const auto& [p, b] : reduced_) {
      if (r[p] == 0) continue;
      BigInt f = r[p];
      BigInt bp = b[p];
      for (std::size_t i = 0; i < dim_; ++i) r[i] = bp * r[i] - f * b[i];
      normalize(r);
    }
    for (std::size_t i = 0; i < dim_; ++i) {
      if (r[i] != 0) {
        reduced_.emplace_back(i, std::move(r));
        return true;
      }
    }
    return false;
  }

  std::size_t rank() const { return reduced_.size(); }

 private:
  static void normalize(IntVec& r) {
    BigInt g = 0;
    for (const auto& x : r) g = boost::multiprecision::gcd(g, x);
    if (g > 1)
      for (auto& x : r) x /= g;
  }

  std::size_t dim_;
  std::vector<std::pair<std::size_t, IntVec>> reduced_;
};

// Indices of a maximal independent subset, chosen greedily in index order.
inline std::vector<std::size_t> independent_subset(
    const std::vector<IntVec>& vectors) {
  std::vector<std::size_t> chosen;
  if (vectors.empty()) return chosen;
  IncrementalRank tracker(vectors.front().size());
  for (std::size_t k = 0; k < vectors.size(); ++k)
    if (tracker.try_add(vectors[k])) chosen.push_back(k);
  return chosen;
}

}  // namespace dgsum

#endif  // DGSUM_HNF_HPP_
