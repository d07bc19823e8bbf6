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

#ifndef DGSUM_LATTICE_HPP_
#define DGSUM_LATTICE_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numbers>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SVD>

#include "dgsum/enumerate.hpp"
#include "dgsum/errors.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"

namespace dgsum {

enum class Provenance { kRaw, kReduced };

// Lattice basis stored as the columns of an integer matrix (dimension x rank).
// `transform` maps the basis it was derived from onto this one:
// vectors == parent * transform.
struct LatticeBasis {
  IntMatrix vectors;
  Provenance provenance = Provenance::kRaw;
  IntMatrix transform;

  std::size_t rank() const { return vectors.cols(); }
  std::size_t dimension() const { return vectors.rows(); }
  std::vector<IntVec> columns() const { return vectors.col_list(); }

  static LatticeBasis from_columns(const IntMatrix& cols) {
    return {cols, Provenance::kRaw, IntMatrix::identity(cols.cols())};
  }
};

inline IntMatrix gram_matrix(const IntMatrix& basis) {
  return basis.transpose() * basis;
}

// det(B^T B), the squared covolume.
inline BigInt gram_determinant(const IntMatrix& basis) {
  IntMatrix g = gram_matrix(basis);
  // Bareiss fraction-free elimination.
  const std::size_t n = g.rows();
  if (n == 0) return 1;
  BigInt prev = 1;
  int sign = 1;
  for (std::size_t k = 0; k + 1 < n; ++k) {
    if (g(k, k) == 0) {
      std::size_t p = k + 1;
      while (p < n && g(p, k) == 0) ++p;
      if (p == n) return 0;
      for (std::size_t j = 0; j < n; ++j) std::swap(g(k, j), g(p, j));
      sign = -sign;
    }
    for (std::size_t i = k + 1; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j)
        g(i, j) = (g(i, j) * g(k, k) - g(i, k) * g(k, j)) / prev;
    prev = g(k, k);
  }
  return sign * g(n - 1, n - 1);
}

// Basis of A(X) = { v in Z^m : X v = 0 }, read off the unimodular transform
// of a column Hermite normal form. Throws RankDeficient when X does not have
// full row rank (the kernel would then have rank > m - n).
inline LatticeBasis integer_kernel(const IntMatrix& x) {
  ColumnHnf h = column_hnf(x);
  if (h.rank != x.rows())
    throw RankDeficient("integer_kernel: X has rank " + std::to_string(h.rank) +
                        ", expected full row rank " + std::to_string(x.rows()));
  const std::size_t m = x.cols();
  IntMatrix k(m, m - h.rank);
  for (std::size_t j = h.rank; j < m; ++j)
    for (std::size_t i = 0; i < m; ++i) k(i, j - h.rank) = h.transform(i, j);
  return LatticeBasis::from_columns(k);
}

// Integral LLL (Cohen, Alg. 2.6.7): exact arithmetic on the Gram-Schmidt
// data d_i and lambda_ij = d_j mu_ij. delta must lie in (1/4, 1); it is
// applied as the rational approximation round(delta * 10^6) / 10^6.
inline LatticeBasis lll_reduce(const LatticeBasis& basis, double delta = 0.99) {
  if (!(delta > 0.25 && delta < 1.0))
    throw InvalidArgument("lll_reduce: delta must lie in (0.25, 1)");
  const std::size_t n = basis.rank();
  std::vector<IntVec> b = basis.columns();
  IntMatrix t = IntMatrix::identity(n);
  LatticeBasis out;
  out.provenance = Provenance::kReduced;
  if (n <= 1) {
    out.vectors = basis.vectors;
    out.transform = t;
    return out;
  }
  const BigInt dp = static_cast<long long>(std::llround(delta * 1e6));
  const BigInt dq = 1000000;

  // 1-indexed as in the reference formulation.
  std::vector<BigInt> d(n + 1, BigInt(0));
  std::vector<std::vector<BigInt>> lam(n + 1, std::vector<BigInt>(n + 1, BigInt(0)));
  auto bvec = [&](std::size_t i) -> IntVec& { return b[i - 1]; };
  auto sub_col = [&](std::size_t k, std::size_t l, const BigInt& q) {
    IntVec& bk = bvec(k);
    const IntVec& bl = bvec(l);
    for (std::size_t r = 0; r < bk.size(); ++r) bk[r] -= q * bl[r];
    for (std::size_t r = 0; r < n; ++r) t(r, k - 1) -= q * t(r, l - 1);
  };
  auto redi = [&](std::size_t k, std::size_t l) {
    if (2 * abs(lam[k][l]) <= d[l]) return;
    BigInt q = round_div(lam[k][l], d[l]);
    sub_col(k, l, q);
    lam[k][l] -= q * d[l];
    for (std::size_t i = 1; i < l; ++i) lam[k][i] -= q * lam[l][i];
  };
  auto swapi = [&](std::size_t k, std::size_t kmax) {
    std::swap(b[k - 1], b[k - 2]);
    for (std::size_t r = 0; r < n; ++r) std::swap(t(r, k - 1), t(r, k - 2));
    for (std::size_t j = 1; j + 2 <= k; ++j) std::swap(lam[k][j], lam[k - 1][j]);
    BigInt l = lam[k][k - 1];
    BigInt bb = (d[k - 2] * d[k] + l * l) / d[k - 1];
    for (std::size_t i = k + 1; i <= kmax; ++i) {
      BigInt tt = lam[i][k];
      lam[i][k] = (d[k] * lam[i][k - 1] - l * tt) / d[k - 1];
      lam[i][k - 1] = (bb * tt + l * lam[i][k]) / d[k];
    }
    d[k - 1] = bb;
  };

  d[0] = 1;
  d[1] = norm_sq(bvec(1));
  if (d[1] == 0) throw InvalidArgument("lll_reduce: zero basis vector");
  std::size_t k = 2, kmax = 1;
  while (k <= n) {
    if (k > kmax) {
      kmax = k;
      for (std::size_t j = 1; j <= k; ++j) {
        BigInt u = dot(bvec(k), bvec(j));
        for (std::size_t i = 1; i < j; ++i)
          u = (d[i] * u - lam[k][i] * lam[j][i]) / d[i - 1];
        if (j < k)
          lam[k][j] = u;
        else {
          if (u == 0) throw InvalidArgument("lll_reduce: dependent basis vectors");
          d[k] = u;
        }
      }
    }
    while (true) {
      redi(k, k - 1);
      BigInt l = lam[k][k - 1];
      if (dq * (d[k] * d[k - 2] + l * l) < dp * d[k - 1] * d[k - 1]) {
        swapi(k, kmax);
        k = std::max<std::size_t>(2, k - 1);
        continue;
      }
      for (std::size_t ll = k - 1; ll-- > 1;) redi(k, ll);
      ++k;
      break;
    }
  }
  out.vectors = IntMatrix::from_cols(b);
  out.transform = basis.transform.rows() == n ? basis.transform * t : t;
  return out;
}

// Sorted lengths of the reduced basis vectors; each entry upper-bounds the
// corresponding successive minimum.
inline std::vector<double> successive_minima_upper(const LatticeBasis& basis) {
  LatticeBasis red =
      basis.provenance == Provenance::kReduced ? basis : lll_reduce(basis);
  std::vector<double> lengths;
  for (const auto& v : red.columns()) lengths.push_back(norm(v));
  std::sort(lengths.begin(), lengths.end());
  return lengths;
}

namespace detail {

inline std::vector<std::vector<Rational>> rational_inverse(
    std::vector<std::vector<Rational>> a) {
  const std::size_t n = a.size();
  std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, Rational(0)));
  for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t p = c;
    while (p < n && a[p][c] == 0) ++p;
    if (p == n) throw SingularMatrix("rational_inverse: singular matrix");
    std::swap(a[p], a[c]);
    std::swap(inv[p], inv[c]);
    Rational piv = a[c][c];
    for (std::size_t j = 0; j < n; ++j) {
      a[c][j] /= piv;
      inv[c][j] /= piv;
    }
    for (std::size_t r = 0; r < n; ++r) {
      if (r == c || a[r][c] == 0) continue;
      Rational f = a[r][c];
      for (std::size_t j = 0; j < n; ++j) {
        a[r][j] -= f * a[c][j];
        inv[r][j] -= f * inv[c][j];
      }
    }
  }
  return inv;
}

}  // namespace detail

// Dual basis inside span(B): D = B (B^T B)^{-1}, so that B^T D = I exactly.
inline RatMatrix dual_basis(const LatticeBasis& basis) {
  const std::size_t m = basis.dimension();
  const std::size_t k = basis.rank();
  IntMatrix g = gram_matrix(basis.vectors);
  std::vector<std::vector<Rational>> gr(k, std::vector<Rational>(k));
  for (std::size_t i = 0; i < k; ++i)
    for (std::size_t j = 0; j < k; ++j) gr[i][j] = Rational(g(i, j));
  auto ginv = detail::rational_inverse(gr);
  RatMatrix d(m, k);
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < k; ++j) {
      Rational s = 0;
      for (std::size_t l = 0; l < k; ++l) s += Rational(basis.vectors(i, l)) * ginv[l][j];
      d(i, j) = s;
    }
  return d;
}

struct SmoothingBound {
  std::size_t n = 0;
  double eps = 0.0;
  double lambda_n = 0.0;
  double value = 0.0;
};

// eta_eps(L) <= lambda_n(L) * sqrt(ln(2n(1 + 1/eps)) / pi).
inline SmoothingBound smoothing_bound(std::size_t n, double eps, double lambda_n) {
  if (!(eps > 0.0 && eps < 1.0))
    throw InvalidArgument("smoothing_bound: eps must lie in (0, 1)");
  if (n == 0) throw InvalidArgument("smoothing_bound: rank must be positive");
  if (!(lambda_n > 0.0)) throw InvalidArgument("smoothing_bound: lambda_n must be > 0");
  double v = lambda_n * std::sqrt(std::log(2.0 * static_cast<double>(n) *
                                           (1.0 + 1.0 / eps)) /
                                  std::numbers::pi);
  return {n, eps, lambda_n, v};
}

struct SmoothingCheck {
  bool holds = false;
  double lhs = 0.0;   // truncated rho_{1/s}(L* \ {0})
  double tail = 0.0;  // certified bound on the omitted dual mass
  double radius = 0.0;
  std::size_t points = 0;
};

// Checks rho_{1/s}(L* \ {0}) <= eps by enumerating dual points of Euclidean
// length <= radius. radius <= 0 picks one whose certified tail is at most
// 1e-6 * eps. Requires a full-rank lattice.
inline SmoothingCheck smoothing_check(const LatticeBasis& basis, double s,
                                      double eps, double radius = 0.0,
                                      std::size_t budget = 10'000'000) {
  if (basis.rank() != basis.dimension())
    throw InvalidArgument("smoothing_check: lattice must be full rank");
  if (!(s > 0.0)) throw InvalidArgument("smoothing_check: s must be > 0");
  const std::size_t k = basis.rank();
  Eigen::MatrixXd b = basis.vectors.to_double();
  Eigen::MatrixXd dual_gram = (b.transpose() * b).inverse();
  double r_norm = radius > 0.0 ? radius * s : radius_for_tail(k, 1e-6 * eps);
  SmoothingCheck out;
  out.radius = r_norm / s;
  Enumerator en(s * s * dual_gram);
  double lhs = 0.0;
  out.points = en.run(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k)), r_norm,
                      budget, [&](const std::vector<std::int64_t>& y, double d2) {
                        bool zero = std::all_of(y.begin(), y.end(),
                                                [](std::int64_t v) { return v == 0; });
                        if (!zero) lhs += std::exp(-std::numbers::pi * d2);
                      });
  double f = gaussian_tail_factor(k, r_norm);
  out.lhs = lhs;
  out.tail = f < 1.0 ? 2.0 * f * (1.0 + lhs) / (1.0 - f) : std::numeric_limits<double>::infinity();
  out.holds = out.lhs + out.tail <= eps;
  return out;
}

// Singular values in descending order.
inline std::vector<double> singular_values(const Eigen::MatrixXd& s) {
  if (s.size() == 0) return {};
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(s);
  const auto& sv = svd.singularValues();
  return std::vector<double>(sv.data(), sv.data() + sv.size());
}

}  // namespace dgsum

#endif  // DGSUM_LATTICE_HPP_
