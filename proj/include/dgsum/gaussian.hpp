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

#ifndef DGSUM_GAUSSIAN_HPP_
#define DGSUM_GAUSSIAN_HPP_

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numbers>
#include <optional>
#include <ostream>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/enumerate.hpp"
#include "dgsum/errors.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"
#include "dgsum/lattice.hpp"

namespace dgsum {

// Truncation radius used when callers pass radius <= 0: twelve standard
// deviations of the unit-parameter Gaussian, in shape-normalized units.
inline constexpr double kDefaultRadius = 12.0 / 2.5066282746310002;  // 12/sqrt(2 pi)

// Shape parameter of rho_S(x) = exp(-pi x^T (S^T S)^{-1} x). A spherical
// shape s*I works in any dimension; an ellipsoidal one acts on R^{cols(S)}.
class GaussianShape {
 public:
  static GaussianShape spherical(double s) {
    if (!(s > 0.0) || !std::isfinite(s))
      throw InvalidArgument("GaussianShape: s must be positive and finite");
    GaussianShape g;
    g.spherical_ = true;
    g.s_ = s;
    return g;
  }

  static GaussianShape ellipsoidal(const Eigen::MatrixXd& s) {
    if (s.cols() == 0 || s.rows() < s.cols())
      throw InvalidArgument("GaussianShape: S must have at least as many rows as columns");
    GaussianShape g;
    g.spherical_ = false;
    g.matrix_ = s;
    g.gram_ = s.transpose() * s;
    auto sv = singular_values(s);
    if (!(sv.back() > 1e-12 * sv.front()))
      throw SingularMatrix("GaussianShape: S does not have full column rank");
    g.sigma_max_ = sv.front();
    g.sigma_min_ = sv.back();
    Eigen::LLT<Eigen::MatrixXd> llt(g.gram_);
    if (llt.info() != Eigen::Success)
      throw SingularMatrix("GaussianShape: Gram matrix not positive definite");
    Eigen::MatrixXd l = llt.matrixL();
    g.whitening_ = l.triangularView<Eigen::Lower>().solve(
        Eigen::MatrixXd::Identity(l.rows(), l.cols()));
    return g;
  }

  static GaussianShape diagonal(const std::vector<double>& d) {
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(d.size()),
                                              static_cast<Eigen::Index>(d.size()));
    for (std::size_t i = 0; i < d.size(); ++i)
      s(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) = d[i];
    return ellipsoidal(s);
  }

  bool is_spherical() const { return spherical_; }

  bool is_diagonal() const {
    if (spherical_) return true;
    if (matrix_.rows() != matrix_.cols()) return false;
    for (Eigen::Index i = 0; i < matrix_.rows(); ++i)
      for (Eigen::Index j = 0; j < matrix_.cols(); ++j)
        if (i != j && matrix_(i, j) != 0.0) return false;
    return true;
  }

  // 0 for spherical shapes (any dimension).
  std::size_t dimension() const {
    return spherical_ ? 0 : static_cast<std::size_t>(matrix_.cols());
  }

  double s() const { return s_; }
  const Eigen::MatrixXd& matrix() const { return matrix_; }

  double sigma_max() const { return spherical_ ? s_ : sigma_max_; }
  double sigma_min() const { return spherical_ ? s_ : sigma_min_; }

  // Per-coordinate parameters of a diagonal (or spherical) shape.
  std::vector<double> diagonal_entries(std::size_t dim) const {
    check_dim(dim);
    std::vector<double> out(dim, s_);
    if (!spherical_)
      for (std::size_t i = 0; i < dim; ++i)
        out[i] = std::abs(matrix_(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)));
    return out;
  }

  Eigen::MatrixXd gram(std::size_t dim) const {
    check_dim(dim);
    if (spherical_)
      return s_ * s_ * Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                                 static_cast<Eigen::Index>(dim));
    return gram_;
  }

  // W with ||W x||^2 = x^T (S^T S)^{-1} x.
  Eigen::MatrixXd whitening(std::size_t dim) const {
    check_dim(dim);
    if (spherical_)
      return Eigen::MatrixXd::Identity(static_cast<Eigen::Index>(dim),
                                       static_cast<Eigen::Index>(dim)) / s_;
    return whitening_;
  }

  double norm_sq(const Eigen::VectorXd& x) const {
    check_dim(static_cast<std::size_t>(x.size()));
    if (spherical_) return x.squaredNorm() / (s_ * s_);
    return (whitening_ * x).squaredNorm();
  }

  // |det S| for square S, s^dim for spherical shapes.
  double abs_det(std::size_t dim) const {
    check_dim(dim);
    if (spherical_) return std::pow(s_, static_cast<double>(dim));
    if (matrix_.rows() != matrix_.cols())
      throw InvalidArgument("GaussianShape::abs_det: S is not square");
    return std::abs(matrix_.determinant());
  }

  void check_dim(std::size_t dim) const {
    if (!spherical_ && dim != static_cast<std::size_t>(matrix_.cols()))
      throw DimensionMismatch("GaussianShape: expected dimension " +
                              std::to_string(matrix_.cols()) + ", got " +
                              std::to_string(dim));
  }

 private:
  GaussianShape() = default;

  bool spherical_ = true;
  double s_ = 1.0;
  Eigen::MatrixXd matrix_;
  Eigen::MatrixXd gram_;
  Eigen::MatrixXd whitening_;
  double sigma_max_ = 0.0;
  double sigma_min_ = 0.0;
};

inline double rho(const GaussianShape& shape, const Eigen::VectorXd& x) {
  return std::exp(-std::numbers::pi * shape.norm_sq(x));
}

// L(basis) + shift, basis given as integer columns.
struct LatticeCoset {
  IntMatrix basis;
  Eigen::VectorXd shift;

  static LatticeCoset integer(std::size_t m) {
    return {IntMatrix::identity(m), Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m))};
  }
  static LatticeCoset integer(const Eigen::VectorXd& shift) {
    return {IntMatrix::identity(static_cast<std::size_t>(shift.size())), shift};
  }

  std::size_t dimension() const { return basis.rows(); }
  std::size_t rank() const { return basis.cols(); }

  void validate() const {
    if (static_cast<std::size_t>(shift.size()) != basis.rows())
      throw DimensionMismatch("LatticeCoset: shift length differs from dimension");
    if (dgsum::rank(basis) != basis.cols())
      throw InvalidArgument("LatticeCoset: basis columns are linearly dependent");
  }

  bool is_standard_integer() const {
    return basis.rows() == basis.cols() && basis == IntMatrix::identity(basis.rows());
  }
};

using IntPoint = std::vector<std::int64_t>;

// Finite probability table over points shift + p, p an integer vector of the
// ambient space. tail_bound certifies the mass left out of the table relative
// to the tabulated mass; the total-variation error from normalizing over the
// table is at most tail_bound.
struct DiscretePMF {
  Eigen::VectorXd shift;
  std::vector<IntPoint> points;
  std::vector<double> masses;
  double tail_bound = 0.0;

  std::size_t size() const { return points.size(); }

  double total() const {
    double s = 0.0;
    for (double m : masses) s += m;
    return s;
  }

  Eigen::VectorXd point(std::size_t i) const {
    Eigen::VectorXd p = shift;
    for (std::size_t j = 0; j < points[i].size(); ++j)
      p(static_cast<Eigen::Index>(j)) += static_cast<double>(points[i][j]);
    return p;
  }

  std::map<IntPoint, double> as_map() const {
    std::map<IntPoint, double> out;
    for (std::size_t i = 0; i < points.size(); ++i) out[points[i]] += masses[i];
    return out;
  }

  double mass_at(const IntPoint& p) const {
    for (std::size_t i = 0; i < points.size(); ++i)
      if (points[i] == p) return masses[i];
    return 0.0;
  }

  void normalize() {
    double t = total();
    if (t <= 0.0) return;
    for (double& m : masses) m /= t;
  }
};

inline void write_pmf_csv(std::ostream& out, const DiscretePMF& pmf) {
  const std::size_t d = static_cast<std::size_t>(pmf.shift.size());
  for (std::size_t j = 0; j < d; ++j) out << 'x' << j << ',';
  out << "mass\n";
  out.precision(12);
  for (std::size_t i = 0; i < pmf.size(); ++i) {
    Eigen::VectorXd p = pmf.point(i);
    for (std::size_t j = 0; j < d; ++j) out << p(static_cast<Eigen::Index>(j)) << ',';
    out << pmf.masses[i] << '\n';
  }
}

struct CosetMass {
  double mass = 0.0;
  double tail_bound = 1.0;  // relative to mass; 1 when uncertified
  double radius = 0.0;
  std::size_t points = 0;
  bool empty = true;  // no coset point inside the radius
};

namespace detail {

struct WhitenedCoset {
  Eigen::MatrixXd basis;  // W * B
  Eigen::VectorXd shift;  // W * c
  std::vector<std::vector<std::int64_t>> int_basis;
};

inline WhitenedCoset whiten(const LatticeCoset& coset, const GaussianShape& shape) {
  coset.validate();
  const std::size_t m = coset.dimension();
  shape.check_dim(m);
  Eigen::MatrixXd w = shape.whitening(m);
  WhitenedCoset out{w * coset.basis.to_double(), w * coset.shift, {}};
  out.int_basis.assign(m, std::vector<std::int64_t>(coset.rank()));
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < coset.rank(); ++j)
      out.int_basis[i][j] = static_cast<std::int64_t>(coset.basis(i, j));
  return out;
}

inline IntPoint apply_basis(const std::vector<std::vector<std::int64_t>>& b,
                            const std::vector<std::int64_t>& y) {
  IntPoint p(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i)
    for (std::size_t j = 0; j < y.size(); ++j) p[i] += b[i][j] * y[j];
  return p;
}

// Truncated rho over the centred lattice W*L (used to bound the tail).
inline double centred_mass(const Eigen::MatrixXd& basis, double radius,
                           std::size_t budget) {
  double s = 0.0;
  enumerate_coset(basis, Eigen::VectorXd::Zero(basis.rows()), radius, budget,
                  [&](const std::vector<std::int64_t>&, double d2) {
                    s += std::exp(-std::numbers::pi * d2);
                  });
  return s;
}

}  // namespace detail

inline constexpr std::size_t kDefaultEnumerationBudget = 50'000'000;

// Truncated rho_S(L + c) over points within `radius` (shape-normalized,
// measured in span(L)), with a certified relative bound on the omitted mass.
inline CosetMass coset_mass(const LatticeCoset& coset, const GaussianShape& shape,
                            double radius = 0.0,
                            std::size_t budget = kDefaultEnumerationBudget) {
  if (radius < 0.0) throw InvalidArgument("coset_mass: radius must be >= 0");
  if (radius == 0.0) radius = kDefaultRadius;
  auto wc = detail::whiten(coset, shape);
  CosetMass out;
  out.radius = radius;
  out.points = enumerate_coset(wc.basis, wc.shift, radius, budget,
                               [&](const std::vector<std::int64_t>&, double d2) {
                                 out.mass += std::exp(-std::numbers::pi * d2);
                               });
  out.empty = out.points == 0;
  if (out.mass <= 0.0) {
    out.mass = 0.0;
    out.tail_bound = 1.0;
    return out;
  }
  double f = gaussian_tail_factor(coset.rank(), radius);
  if (!(f < 1.0)) {
    out.tail_bound = 1.0;
    return out;
  }
  double centred = wc.shift.isZero(0.0) ? out.mass
                                         : detail::centred_mass(wc.basis, radius, budget);
  double lattice_hi = centred / (1.0 - f);
  out.tail_bound = std::min(1.0, 2.0 * f * lattice_hi / out.mass);
  return out;
}

// D_{L+c,S} tabulated over the points of coset_mass, normalized by the
// truncated mass.
inline DiscretePMF exact_pmf(const LatticeCoset& coset, const GaussianShape& shape,
                             double radius = 0.0,
                             std::size_t budget = kDefaultEnumerationBudget) {
  if (radius < 0.0) throw InvalidArgument("exact_pmf: radius must be >= 0");
  if (radius == 0.0) radius = kDefaultRadius;
  auto wc = detail::whiten(coset, shape);
  DiscretePMF pmf;
  pmf.shift = coset.shift;
  enumerate_coset(wc.basis, wc.shift, radius, budget,
                  [&](const std::vector<std::int64_t>& y, double d2) {
                    pmf.points.push_back(detail::apply_basis(wc.int_basis, y));
                    pmf.masses.push_back(std::exp(-std::numbers::pi * d2));
                  });
  CosetMass cm = coset_mass(coset, shape, radius, budget);
  pmf.tail_bound = cm.tail_bound;
  pmf.normalize();
  return pmf;
}

}  // namespace dgsum

#endif  // DGSUM_GAUSSIAN_HPP_
