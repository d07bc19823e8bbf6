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

#ifndef DGSUM_QUALITY_HPP_
#define DGSUM_QUALITY_HPP_

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numbers>
#include <optional>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "dgsum/errors.hpp"
#include "dgsum/gaussian.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"
#include "dgsum/lattice.hpp"
#include "dgsum/sampler.hpp"

namespace dgsum {

struct IntPointHash {
  std::size_t operator()(const IntPoint& p) const noexcept {
    std::uint64_t h = 0x84222325cbf29ce4ULL;
    for (std::int64_t x : p) h = splitmix64(h ^ static_cast<std::uint64_t>(x));
    return static_cast<std::size_t>(h);
  }
};

struct ColumnBound {
  BigInt max_norm_sq = 0;
  double value = 0.0;
  std::size_t column = 0;
};

// Largest column l2 norm of X; the squared value is exact.
inline ColumnBound column_bound(const IntMatrix& x) {
  ColumnBound out;
  for (std::size_t j = 0; j < x.cols(); ++j) {
    BigInt s = norm_sq(x.col(j));
    if (s > out.max_norm_sq) {
      out.max_norm_sq = s;
      out.column = j;
    }
  }
  out.value = std::sqrt(static_cast<double>(out.max_norm_sq));
  return out;
}

// floor(2 n log2(B n)), the number of vectors the pigeonhole count needs.
inline std::size_t pigeonhole_length(std::size_t n, std::int64_t bound) {
  return static_cast<std::size_t>(
      std::floor(2.0 * static_cast<double>(n) *
                 std::log2(static_cast<double>(bound) * static_cast<double>(n))));
}

// Finds alpha in {-1,0,1}^l, alpha != 0, with sum_j alpha_j x_j = 0, as the
// difference of two 0/1 combinations with equal sums. Subsets are walked in
// Gray-code order and their sums hashed until two coincide. At most
// `memory_budget` sums are stored.
inline std::vector<int> pigeonhole_collision(const std::vector<IntPoint>& xs,
                                             std::int64_t bound,
                                             std::size_t memory_budget = 1u << 24) {
  const std::size_t l = xs.size();
  if (l == 0) throw InvalidArgument("pigeonhole_collision: no vectors");
  if (l > 62) throw InvalidArgument("pigeonhole_collision: at most 62 vectors");
  const std::size_t n = xs.front().size();
  for (const auto& x : xs) {
    if (x.size() != n) throw DimensionMismatch("pigeonhole_collision: ragged vectors");
    for (std::int64_t v : x)
      if (v > bound || v < -bound)
        throw InvalidArgument("pigeonhole_collision: entry exceeds the infinity bound");
  }
  std::unordered_map<IntPoint, std::uint64_t, IntPointHash> seen;
  IntPoint sum(n, 0);
  std::uint64_t gray = 0;
  seen.emplace(sum, gray);
  const std::uint64_t total = std::uint64_t{1} << l;
  for (std::uint64_t i = 1; i < total; ++i) {
    std::uint64_t next = i ^ (i >> 1);
    std::uint64_t flipped = next ^ gray;
    std::size_t j = static_cast<std::size_t>(std::countr_zero(flipped));
    bool added = (next & flipped) != 0;
    for (std::size_t r = 0; r < n; ++r) sum[r] += added ? xs[j][r] : -xs[j][r];
    gray = next;
    auto [it, inserted] = seen.emplace(sum, gray);
    if (!inserted) {
      std::vector<int> alpha(l, 0);
      for (std::size_t b = 0; b < l; ++b)
        alpha[b] = static_cast<int>((gray >> b) & 1U) - static_cast<int>((it->second >> b) & 1U);
      for (std::size_t r = 0; r < n; ++r) {
        BigInt s = 0;
        for (std::size_t b = 0; b < l; ++b) s += BigInt(alpha[b]) * xs[b][r];
        if (s != 0) throw InvariantViolation("pigeonhole_collision: relation failed to verify");
      }
      return alpha;
    }
    if (seen.size() > memory_budget)
      throw CollisionNotFound("pigeonhole_collision: memory budget exhausted");
  }
  throw CollisionNotFound("pigeonhole_collision: all subset sums distinct");
}

struct CollisionSearchParams {
  double t = 0.0;                  // 3 n log2(sigma_1 n) on the default schedule
  std::size_t prefix_budget = 0;   // columns used, floor(10 t) capped at m
  std::size_t memory_budget = 1u << 20;
  std::size_t candidates = 16;     // witnesses collected per u_i; shortest kept

  static CollisionSearchParams schedule(std::size_t n, double sigma1, std::size_t m,
                                        std::size_t memory_budget = 1u << 20) {
    CollisionSearchParams p;
    p.t = 3.0 * static_cast<double>(n) * std::log2(std::max(2.0, sigma1 * static_cast<double>(n)));
    p.prefix_budget = std::min<std::size_t>(static_cast<std::size_t>(std::floor(10.0 * p.t)), m);
    p.memory_budget = memory_budget;
    return p;
  }

  void validate(std::size_t m) const {
    if (prefix_budget == 0 || prefix_budget > m)
      throw InvalidArgument("CollisionSearchParams: prefix_budget must lie in [1, m]");
    if (memory_budget == 0 || candidates == 0)
      throw InvalidArgument("CollisionSearchParams: budgets must be positive");
  }
};

struct SearchStats {
  std::vector<std::size_t> draws;        // combinations drawn per u_i
  std::vector<std::size_t> witnesses;    // collisions found per u_i
};

struct DualVectors {
  std::vector<IntVec> u;
  SearchStats stats;
};

namespace detail {

inline std::vector<std::vector<std::int64_t>> to_int64_rows(const IntMatrix& x) {
  std::vector<std::vector<std::int64_t>> rows;
  for (std::size_t i = 0; i < x.rows(); ++i) rows.push_back(to_int64_vec(x.row(i)));
  return rows;
}

inline void check_dual_system(const IntMatrix& x, const std::vector<IntVec>& prev,
                              const IntVec& u, std::size_t i) {
  IntVec xu = x * u;
  for (std::size_t r = 0; r < xu.size(); ++r)
    if (xu[r] != (r == i ? 1 : 0))
      throw InvariantViolation("dual vector fails X u = e_i");
  for (const auto& p : prev)
    if (dot(p, u) != 0) throw InvariantViolation("dual vector not orthogonal");
}

}  // namespace detail

// Sequential randomized collision search for pairwise-orthogonal u_1..u_n
// with X u_i = e_i. For u_i the rows of X are augmented by u_1..u_{i-1} with
// target (e_i, 0, ..., 0). Random {-1,0,1} combinations alpha of the first
// prefix_budget columns are hashed by their image; an image differing by the
// target from a stored one gives u_i = alpha - beta in {-2,...,2}^prefix.
inline DualVectors find_dual_vectors(const IntMatrix& x, const CollisionSearchParams& params,
                                     SampleStream& stream) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  params.validate(m);
  if (rank(x) != n) throw RankDeficient("find_dual_vectors: X lacks full row rank");
  const std::size_t p = params.prefix_budget;
  DualVectors out;
  for (std::size_t i = 0; i < n; ++i) {
    IntMatrix aug = x.with_rows(out.u);
    auto rows = detail::to_int64_rows(aug);
    const std::size_t d = rows.size();
    IntPoint target(d, 0);
    target[i] = 1;
    std::unordered_map<IntPoint, std::size_t, IntPointHash> seen;
    std::vector<std::vector<std::int8_t>> stored;
    std::optional<IntVec> best;
    BigInt best_norm = 0;
    std::size_t found = 0, draws = 0;
    auto consider = [&](const std::vector<std::int8_t>& plus,
                        const std::vector<std::int8_t>& minus) {
      IntVec u(m, BigInt(0));
      for (std::size_t j = 0; j < p; ++j) u[j] = plus[j] - minus[j];
      BigInt ns = norm_sq(u);
      ++found;
      if (!best || ns < best_norm) {
        best = std::move(u);
        best_norm = ns;
      }
    };
    std::vector<std::int8_t> alpha(p);
    IntPoint img(d);
    while (draws < params.memory_budget && found < params.candidates) {
      ++draws;
      for (std::size_t j = 0; j < p; ++j)
        alpha[j] = static_cast<std::int8_t>(stream.next_u64() % 3) - 1;
      for (std::size_t r = 0; r < d; ++r) {
        std::int64_t s = 0;
        for (std::size_t j = 0; j < p; ++j) s += rows[r][j] * alpha[j];
        img[r] = s;
      }
      IntPoint probe = img;
      for (std::size_t r = 0; r < d; ++r) probe[r] -= target[r];
      if (auto it = seen.find(probe); it != seen.end()) consider(alpha, stored[it->second]);
      for (std::size_t r = 0; r < d; ++r) probe[r] = img[r] + target[r];
      if (auto it = seen.find(probe); it != seen.end()) consider(stored[it->second], alpha);
      if (seen.emplace(img, stored.size()).second) stored.push_back(alpha);
    }
    out.stats.draws.push_back(draws);
    out.stats.witnesses.push_back(found);
    if (!best)
      throw CollisionNotFound("find_dual_vectors: no witness for u_" + std::to_string(i + 1) +
                              " within " + std::to_string(draws) + " draws");
    detail::check_dual_system(aug, {}, *best, i);
    out.u.push_back(std::move(*best));
  }
  return out;
}

namespace detail {

// Reduces v modulo the lattice spanned by an LLL-reduced basis (Babai's
// nearest plane); only integer multiples of basis vectors are subtracted.
inline void nearest_plane(IntVec& v, const std::vector<IntVec>& basis) {
  const std::size_t k = basis.size();
  if (k == 0) return;
  const std::size_t m = v.size();
  std::vector<std::vector<long double>> gs(k, std::vector<long double>(m));
  std::vector<long double> gs_norm(k);
  for (std::size_t j = 0; j < k; ++j) {
    for (std::size_t r = 0; r < m; ++r) gs[j][r] = static_cast<long double>(basis[j][r]);
    for (std::size_t l = 0; l < j; ++l) {
      long double mu = 0;
      for (std::size_t r = 0; r < m; ++r) mu += static_cast<long double>(basis[j][r]) * gs[l][r];
      mu /= gs_norm[l];
      for (std::size_t r = 0; r < m; ++r) gs[j][r] -= mu * gs[l][r];
    }
    gs_norm[j] = 0;
    for (std::size_t r = 0; r < m; ++r) gs_norm[j] += gs[j][r] * gs[j][r];
  }
  for (std::size_t j = k; j-- > 0;) {
    long double c = 0;
    for (std::size_t r = 0; r < m; ++r) c += static_cast<long double>(v[r]) * gs[j][r];
    auto q = static_cast<long long>(std::llround(c / gs_norm[j]));
    if (q == 0) continue;
    for (std::size_t r = 0; r < m; ++r) v[r] -= BigInt(q) * basis[j][r];
  }
}

}  // namespace detail

namespace detail {

// Integer solutions of the augmented system ordered by length: the shortened
// solution, then it plus/minus one or two reduced kernel vectors.
inline std::vector<IntVec> solution_candidates(const IntVec& sol, const std::vector<IntVec>& kernel,
                                               std::size_t limit) {
  std::vector<IntVec> out{sol};
  auto add = [&](const IntVec& base, const IntVec& b, int sign) {
    IntVec v = base;
    for (std::size_t r = 0; r < v.size(); ++r) v[r] += sign * b[r];
    out.push_back(std::move(v));
  };
  for (std::size_t j = 0; j < kernel.size() && out.size() < limit; ++j)
    for (int sj : {1, -1}) add(sol, kernel[j], sj);
  for (std::size_t j = 0; j < kernel.size() && out.size() < limit; ++j)
    for (std::size_t l = j + 1; l < kernel.size() && out.size() < limit; ++l)
      for (int sj : {1, -1})
        for (int sl : {1, -1}) {
          IntVec v = sol;
          for (std::size_t r = 0; r < v.size(); ++r) v[r] += sj * kernel[j][r] + sl * kernel[l][r];
          out.push_back(std::move(v));
        }
  std::stable_sort(out.begin(), out.end(),
                   [](const IntVec& a, const IntVec& b) { return norm_sq(a) < norm_sq(b); });
  return out;
}

}  // namespace detail

// Deterministic completion: solve X u = e_i exactly (rows augmented by the
// earlier u's for orthogonality) and shorten u modulo the LLL-reduced kernel
// of the augmented system. Among short solutions, u_i is chosen so that the
// next augmented system still reaches every target (surjectivity checked by
// HNF), which keeps later steps solvable. For m = n the u_i are the columns
// of X^{-1}, without an orthogonality guarantee.
inline std::vector<IntVec> exact_dual_fallback(const IntMatrix& x, std::size_t candidate_limit = 256) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  ColumnHnf h0 = column_hnf(x);
  if (h0.rank != n) throw RankDeficient("exact_dual_fallback: X lacks full row rank");
  if (!is_surjective(h0))
    throw NotSurjective("exact_dual_fallback: X Z^m != Z^n, some e_i is unreachable");
  std::vector<IntVec> us;
  if (m == n) {
    for (std::size_t i = 0; i < n; ++i) {
      IntVec e(n, BigInt(0));
      e[i] = 1;
      us.push_back(*solve_integer(h0, e));
    }
    return us;
  }
  for (std::size_t i = 0; i < n; ++i) {
    IntMatrix aug = x.with_rows(us);
    ColumnHnf h = i == 0 ? h0 : column_hnf(aug);
    IntVec rhs(aug.rows(), BigInt(0));
    rhs[i] = 1;
    auto sol = solve_integer(h, rhs);
    if (!sol)
      throw NotSurjective("exact_dual_fallback: no integral u_" + std::to_string(i + 1) +
                          " orthogonal to the previous ones");
    std::vector<IntVec> kernel;
    if (h.rank < m) {
      IntMatrix k(m, m - h.rank);
      for (std::size_t j = h.rank; j < m; ++j)
        for (std::size_t r = 0; r < m; ++r) k(r, j - h.rank) = h.transform(r, j);
      kernel = lll_reduce(LatticeBasis::from_columns(k)).columns();
      detail::nearest_plane(*sol, kernel);
    }
    std::optional<IntVec> chosen;
    if (i + 1 == n) {
      chosen = std::move(sol);
    } else {
      for (auto& cand : detail::solution_candidates(*sol, kernel, candidate_limit)) {
        std::vector<IntVec> trial = us;
        trial.push_back(cand);
        ColumnHnf next = column_hnf(x.with_rows(trial));
        bool ok;
        if (n + i + 1 <= m) {
          ok = is_surjective(next);
        } else {
          IntVec t(n + i + 1, BigInt(0));
          t[i + 1] = 1;
          ok = solve_integer(next, t).has_value();
        }
        if (ok) {
          chosen = std::move(cand);
          break;
        }
      }
      if (!chosen)
        throw NotSurjective("exact_dual_fallback: every short u_" + std::to_string(i + 1) +
                            " blocks an orthogonal u_" + std::to_string(i + 2));
    }
    detail::check_dual_system(aug, {}, *chosen, i);
    us.push_back(std::move(*chosen));
  }
  return us;
}

struct QualityCertificate {
  double q1 = 0.0;
  double q2 = 0.0;
  BigInt q1_sq = 0;  // exact squared values
  BigInt q2_sq = 0;
  std::vector<IntVec> u;
  bool verified = false;
  std::string reason;  // first violated constraint when not verified
};

// Verifies the quality predicate: u_i . x_j = delta_ij for the rows x_j,
// pairwise orthogonal u_i, and (when nominal bounds are given) the achieved
// column and u norms against them. q1, q2 are set to the achieved values.
inline QualityCertificate certify_quality(const IntMatrix& x, const std::vector<IntVec>& u,
                                          std::optional<double> q1_bound = std::nullopt,
                                          std::optional<double> q2_bound = std::nullopt) {
  QualityCertificate c;
  c.u = u;
  ColumnBound cb = column_bound(x);
  c.q1_sq = cb.max_norm_sq;
  c.q1 = cb.value;
  for (const auto& ui : u) c.q2_sq = std::max(c.q2_sq, norm_sq(ui));
  c.q2 = std::sqrt(static_cast<double>(c.q2_sq));
  const std::size_t n = x.rows();
  if (u.size() != n) {
    c.reason = "dimension(u count " + std::to_string(u.size()) + " != n " +
               std::to_string(n) + ")";
    return c;
  }
  for (std::size_t i = 0; i < n; ++i)
    if (u[i].size() != x.cols()) {
      c.reason = "dimension(u_" + std::to_string(i + 1) + ")";
      return c;
    }
  auto rows = x.row_list();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (dot(u[i], rows[j]) != (i == j ? 1 : 0)) {
        c.reason = "duality(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        return c;
      }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (dot(u[i], u[j]) != 0) {
        c.reason = "orthogonality(" + std::to_string(i + 1) + "," + std::to_string(j + 1) + ")";
        return c;
      }
  if (q2_bound)
    for (std::size_t i = 0; i < n; ++i)
      if (std::sqrt(static_cast<double>(norm_sq(u[i]))) > *q2_bound) {
        c.reason = "u_norm(" + std::to_string(i + 1) + ")";
        return c;
      }
  if (q1_bound && cb.value > *q1_bound) {
    c.reason = "column_norm(" + std::to_string(cb.column + 1) + ")";
    return c;
  }
  c.verified = true;
  return c;
}

// Exact test of N <= (1 + sqrt(P))^2 for nonnegative integers N, P.
inline bool within_one_plus_sqrt(const BigInt& n, const BigInt& p) {
  BigInt d = n - 1 - p;
  if (d <= 0) return true;
  return d * d <= 4 * p;
}

struct KLPBasis {
  std::vector<IntVec> v;
  std::vector<std::size_t> independent_subset;
  double norm_bound = 0.0;  // 1 + q1 q2
  double max_norm = 0.0;
};

// v_k = e_k - sum_i x_ik u_i for k = 1..m. Every v_k lies in A(X); the chain
// ||v_k|| <= 1 + sqrt(sum_i x_ik^2 ||u_i||^2) <= 1 + q2 ||col_k|| <= 1 + q1 q2
// is checked with exact integer arithmetic.
inline KLPBasis klp_vectors(const IntMatrix& x, const QualityCertificate& cert) {
  if (!cert.verified) throw InvalidArgument("klp_vectors: certificate not verified");
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  std::vector<BigInt> u_norm(n);
  for (std::size_t i = 0; i < n; ++i) u_norm[i] = norm_sq(cert.u[i]);
  KLPBasis out;
  out.norm_bound = 1.0 + cert.q1 * cert.q2;
  for (std::size_t k = 0; k < m; ++k) {
    IntVec v(m, BigInt(0));
    v[k] = 1;
    BigInt weighted = 0, col_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const BigInt& xik = x(i, k);
      if (xik == 0) continue;
      for (std::size_t r = 0; r < m; ++r) v[r] -= xik * cert.u[i][r];
      weighted += xik * xik * u_norm[i];
      col_sq += xik * xik;
    }
    if (!is_zero(x * v)) throw InvariantViolation("klp_vectors: X v_k != 0");
    BigInt vn = norm_sq(v);
    if (!within_one_plus_sqrt(vn, weighted) || weighted > cert.q2_sq * col_sq ||
        col_sq > cert.q1_sq || !within_one_plus_sqrt(vn, cert.q1_sq * cert.q2_sq))
      throw InvariantViolation("klp_vectors: norm chain violated at k = " + std::to_string(k + 1));
    out.max_norm = std::max(out.max_norm, std::sqrt(static_cast<double>(vn)));
    out.v.push_back(std::move(v));
  }
  out.independent_subset = independent_subset(out.v);
  if (out.independent_subset.size() != m - n)
    throw InvariantViolation("klp_vectors: expected " + std::to_string(m - n) +
                             " independent vectors, found " +
                             std::to_string(out.independent_subset.size()));
  return out;
}

// (1 + q1 q2) sqrt(ln(2(m - n)(1 + 1/eps)) / pi).
inline double theorem32_threshold(double q1, double q2, std::size_t m, std::size_t n,
                                  double eps) {
  if (!(m > n && n >= 1)) throw InvalidArgument("theorem32_threshold: need m > n >= 1");
  if (!(eps > 0.0 && eps < 1.0 / 3.0))
    throw InvalidArgument("theorem32_threshold: eps must lie in (0, 1/3)");
  if (q1 < 0.0 || q2 < 0.0) throw InvalidArgument("theorem32_threshold: negative quality");
  return (1.0 + q1 * q2) *
         std::sqrt(std::log(2.0 * static_cast<double>(m - n) * (1.0 + 1.0 / eps)) /
                   std::numbers::pi);
}

// Largest eps for which sigma_m(R) meets theorem32_threshold, if any eps in
// (0, 1/3) qualifies.
inline std::optional<double> implied_eps(double sigma_m, double q1, double q2, std::size_t m,
                                         std::size_t n) {
  if (!(m > n)) return std::nullopt;
  double a = sigma_m / (1.0 + q1 * q2);
  double v = std::exp(std::numbers::pi * a * a) / (2.0 * static_cast<double>(m - n)) - 1.0;
  if (!(v > 0.0)) return std::nullopt;
  double eps = 1.0 / v;
  if (!(eps < 1.0 / 3.0)) return std::nullopt;
  return eps;
}

struct Inequality {
  double lhs = 0.0;
  double rhs = 0.0;
  bool pass = false;
};

struct NominalParameterReport {
  Inequality m_condition;      // m >= 30 n log2(sigma_1(S) n)
  Inequality r_condition;      // sigma_m(R) >= 10 n sigma_1(S) log2 m sqrt(log2(1/eps) log2(n sigma_1(S)))
  Inequality s_condition;      // sigma_n(S) >= 9 sqrt(ln(2n(1 + 1/eps)) / pi)
  bool applicable = false;     // n >= 100 and eps < 1/1000
  bool all_pass = false;
};

inline NominalParameterReport theorem51_check(std::size_t n, std::size_t m, double eps,
                                       const GaussianShape& s, const GaussianShape& r) {
  NominalParameterReport rep;
  const double nd = static_cast<double>(n);
  const double md = static_cast<double>(m);
  const double s1 = s.sigma_max();
  rep.m_condition = {md, 30.0 * nd * std::log2(s1 * nd), false};
  rep.m_condition.pass = rep.m_condition.lhs >= rep.m_condition.rhs;
  rep.r_condition = {r.sigma_min(),
                     10.0 * nd * s1 * std::log2(md) *
                         std::sqrt(std::log2(1.0 / eps) * std::log2(nd * s1)),
                     false};
  rep.r_condition.pass = rep.r_condition.lhs >= rep.r_condition.rhs;
  rep.s_condition = {s.sigma_min(),
                     9.0 * std::sqrt(std::log(2.0 * nd * (1.0 + 1.0 / eps)) / std::numbers::pi),
                     false};
  rep.s_condition.pass = rep.s_condition.lhs >= rep.s_condition.rhs;
  rep.applicable = n >= 100 && eps > 0.0 && eps < 1e-3;
  rep.all_pass = rep.m_condition.pass && rep.r_condition.pass && rep.s_condition.pass;
  return rep;
}

// Nominal quality for X <- (D_{Z^n,S})^m:
// (sigma_1 sqrt(n log2 m), 2 sqrt(30 n log2(sigma_1 n))).
inline std::pair<double, double> nominal_quality(std::size_t n, std::size_t m, double sigma1) {
  const double nd = static_cast<double>(n);
  return {sigma1 * std::sqrt(nd * std::log2(static_cast<double>(m))),
          2.0 * std::sqrt(30.0 * nd * std::log2(sigma1 * nd))};
}

}  // namespace dgsum

#endif  // DGSUM_QUALITY_HPP_
