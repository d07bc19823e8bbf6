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

#ifndef DGSUM_TVD_HPP_
#define DGSUM_TVD_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/enumerate.hpp"
#include "dgsum/errors.hpp"
#include "dgsum/gaussian.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"
#include "dgsum/lattice.hpp"
#include "dgsum/quality.hpp"
#include "dgsum/sampler.hpp"

namespace dgsum {

// Primal: enumerate fiber points directly. Dual: Poisson summation over the
// dual of the kernel lattice, which needs few terms once the kernel is
// smoothed. Auto picks the route with the smaller expected point count.
enum class FiberRoute { kAuto, kPrimal, kDual };

inline const char* route_name(FiberRoute r) {
  switch (r) {
    case FiberRoute::kPrimal: return "primal";
    case FiberRoute::kDual: return "dual";
    default: return "auto";
  }
}

struct FiberOptions {
  double radius = 0.0;         // shape-normalized radius; <= 0 derives it from tail_budget
  double tail_budget = 1e-12;  // relative tail targeted when deriving radii
  FiberRoute route = FiberRoute::kAuto;
  std::size_t budget = kDefaultEnumerationBudget;
};

// Points v = offset + c of A_z = {v in Z^m + c : X v = z}, z = offset_z + Xc.
struct FiberEnumeration {
  IntPoint z;                    // offset of z from Xc
  std::vector<IntPoint> points;  // offsets in Z^m (primal route, when requested)
  double mass = 0.0;             // truncated rho_R(A_z)
  double tail_bound = 0.0;       // absolute bound on |rho_R(A_z) - mass|
  double perp_norm_sq = 0.0;     // ||u_z||^2, the squared distance of the fiber's affine span to 0
  std::size_t count = 0;         // terms summed
  FiberRoute route = FiberRoute::kPrimal;
  bool in_support = true;
};

// Precomputed state for the pushforward v -> X v, v ~ D_{Z^m + c, R}.
class FiberModel {
 public:
  FiberModel(IntMatrix x, GaussianShape r, Eigen::VectorXd c, FiberOptions opts = {})
      : x_(std::move(x)), r_(std::move(r)), c_(std::move(c)), opts_(opts) {
    n_ = x_.rows();
    m_ = x_.cols();
    if (n_ == 0 || m_ < n_) throw DimensionMismatch("FiberModel: X must be n x m with m >= n >= 1");
    if (static_cast<std::size_t>(c_.size()) != m_)
      throw DimensionMismatch("FiberModel: c must have length m");
    r_.check_dim(m_);
    hnf_ = column_hnf(x_);
    if (hnf_.rank != n_) throw RankDeficient("FiberModel: X lacks full row rank");
    k_ = m_ - n_;
    surjective_ = is_surjective(hnf_);
    w_ = r_.whitening(m_);
    xc_ = x_.to_double() * c_;
    build_kernel();
    build_particular();
    build_target_shape();
    if (k_ > 0) build_lattice_sum();
  }

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  std::size_t kernel_rank() const { return k_; }
  const IntMatrix& x() const { return x_; }
  const GaussianShape& shape() const { return r_; }
  const Eigen::VectorXd& c() const { return c_; }
  const Eigen::VectorXd& xc() const { return xc_; }
  const IntMatrix& kernel() const { return kernel_; }
  bool surjective() const { return surjective_; }
  FiberRoute route() const { return route_; }
  double radius() const { return radius_; }
  const FiberOptions& options() const { return opts_; }

  // Shape R X^T of the target D_{Z^n + Xc, R X^T}.
  const GaussianShape& target_shape() const { return *target_; }

  // rho_R(A) lies in [lattice_mass_lo, lattice_mass_hi].
  double lattice_mass_lo() const { return k_ == 0 ? 1.0 : lattice_lo_; }
  double lattice_mass_hi() const { return k_ == 0 ? 1.0 : lattice_hi_; }

  // Squared target norm of z = offset + Xc.
  double target_norm_sq(const IntPoint& z) const {
    Eigen::VectorXd p = xc_;
    for (std::size_t i = 0; i < n_; ++i) p(static_cast<Eigen::Index>(i)) += static_cast<double>(z[i]);
    return target_->norm_sq(p);
  }

  // Integer w with X w = z, or nullopt when z is outside X Z^m.
  std::optional<IntPoint> particular(const IntPoint& z) const {
    if (z.size() != n_) throw DimensionMismatch("FiberModel: z must have length n");
    if (surjective_) {
      IntPoint w(m_, 0);
      for (std::size_t i = 0; i < n_; ++i)
        if (z[i] != 0)
          for (std::size_t j = 0; j < m_; ++j) w[j] += z[i] * unit_solutions_[i][j];
      return w;
    }
    auto sol = solve_integer(hnf_, to_int_vec(z));
    if (!sol) return std::nullopt;
    return to_int64_vec(*sol);
  }

  FiberEnumeration fiber(const IntPoint& z, bool keep_points = false) const {
    FiberEnumeration out;
    out.z = z;
    out.route = route_;
    auto w = particular(z);
    if (!w) {
      out.in_support = false;
      return out;
    }
    Eigen::VectorXd v = c_;
    for (std::size_t j = 0; j < m_; ++j) v(static_cast<Eigen::Index>(j)) += static_cast<double>((*w)[j]);
    Eigen::VectorXd t = w_ * v;
    if (k_ == 0) {
      out.perp_norm_sq = t.squaredNorm();
      out.mass = std::exp(-std::numbers::pi * out.perp_norm_sq);
      out.count = 1;
      if (keep_points) out.points.push_back(*w);
      return out;
    }
    Eigen::VectorXd coeff = gram_ldlt_.solve(wk_.transpose() * t);  // t_par = WK coeff
    out.perp_norm_sq = std::max(0.0, (t - wk_ * coeff).squaredNorm());
    const double perp = std::exp(-std::numbers::pi * out.perp_norm_sq);
    if (route_ == FiberRoute::kPrimal) {
      double s = 0.0;
      out.count = primal_->run(-coeff, radius_, opts_.budget,
                               [&](const std::vector<std::int64_t>& y, double d2) {
                                 s += std::exp(-std::numbers::pi * d2);
                                 if (keep_points) {
                                   IntPoint p = *w;
                                   for (std::size_t j = 0; j < m_; ++j)
                                     for (std::size_t l = 0; l < k_; ++l) p[j] += kernel64_[j][l] * y[l];
                                   out.points.push_back(std::move(p));
                                 }
                               });
      out.mass = perp * s;
      out.tail_bound = perp * tail_factor_ * lattice_hi_;
    } else {
      double s = 0.0;
      for (std::size_t i = 0; i < dual_weights_.size(); ++i) {
        double phase = 0.0;
        for (std::size_t l = 0; l < k_; ++l)
          phase += static_cast<double>(dual_points_[i][l]) * (coeff(static_cast<Eigen::Index>(l)) -
                                                             std::round(coeff(static_cast<Eigen::Index>(l))));
        s += dual_weights_[i] * std::cos(2.0 * std::numbers::pi * phase);
      }
      out.count = dual_weights_.size();
      out.mass = perp * s / sqrt_det_;
      out.tail_bound = perp * dual_tail_ / sqrt_det_;
    }
    return out;
  }

 private:
  void build_kernel() {
    if (k_ == 0) {
      kernel_ = IntMatrix(m_, 0);
      return;
    }
    IntMatrix k(m_, k_);
    for (std::size_t j = 0; j < k_; ++j)
      for (std::size_t i = 0; i < m_; ++i) k(i, j) = hnf_.transform(i, n_ + j);
    kernel_ = lll_reduce(LatticeBasis::from_columns(k)).vectors;
    kernel64_.assign(m_, std::vector<std::int64_t>(k_));
    for (std::size_t i = 0; i < m_; ++i)
      for (std::size_t j = 0; j < k_; ++j) kernel64_[i][j] = static_cast<std::int64_t>(kernel_(i, j));
    wk_ = w_ * kernel_.to_double();
    gram_ = wk_.transpose() * wk_;
    gram_ldlt_.compute(gram_);
    sqrt_det_ = std::sqrt(gram_.determinant());
  }

  void build_particular() {
    if (!surjective_) return;
    auto cols = kernel_.col_list();
    for (std::size_t i = 0; i < n_; ++i) {
      IntVec e(n_, BigInt(0));
      e[i] = 1;
      auto sol = solve_integer(hnf_, e);
      if (!sol) throw InvariantViolation("FiberModel: surjective X without unit preimage");
      detail::nearest_plane(*sol, cols);
      unit_solutions_.push_back(to_int64_vec(*sol));
    }
  }

  void build_target_shape() {
    Eigen::MatrixXd xt = x_.to_double().transpose();  // m x n
    Eigen::MatrixXd s = r_.is_spherical() ? Eigen::MatrixXd(r_.s() * xt)
                                          : Eigen::MatrixXd(r_.matrix() * xt);
    target_ = GaussianShape::ellipsoidal(s);
  }

  void build_lattice_sum() {
    radius_ = opts_.radius > 0.0 ? opts_.radius : radius_for_tail(k_, opts_.tail_budget);
    tail_factor_ = gaussian_tail_factor(k_, radius_);
    if (!(tail_factor_ < 1.0))
      throw InvalidArgument("FiberModel: radius too small for a certified tail");
    route_ = opts_.route;
    if (route_ == FiberRoute::kAuto) route_ = sqrt_det_ >= 1.0 ? FiberRoute::kPrimal : FiberRoute::kDual;
    const Eigen::VectorXd zero = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(k_));
    if (route_ == FiberRoute::kPrimal) {
      primal_.emplace(gram_);
      double s = 0.0;
      primal_->run(zero, radius_, opts_.budget,
                   [&](const std::vector<std::int64_t>&, double d2) {
                     s += std::exp(-std::numbers::pi * d2);
                   });
      lattice_lo_ = s;
      lattice_hi_ = s / (1.0 - tail_factor_);
    } else {
      Eigen::MatrixXd dual_gram = gram_ldlt_.solve(Eigen::MatrixXd::Identity(
          static_cast<Eigen::Index>(k_), static_cast<Eigen::Index>(k_)));
      dual_gram = 0.5 * (dual_gram + dual_gram.transpose());
      Enumerator dual(dual_gram);
      double s = 0.0;
      dual.run(zero, radius_, opts_.budget, [&](const std::vector<std::int64_t>& j, double d2) {
        double wgt = std::exp(-std::numbers::pi * d2);
        dual_points_.push_back(j);
        dual_weights_.push_back(wgt);
        s += wgt;
      });
      dual_tail_ = tail_factor_ * s / (1.0 - tail_factor_);
      lattice_lo_ = (s - dual_tail_) / sqrt_det_;
      lattice_hi_ = (s + dual_tail_) / sqrt_det_;
    }
  }

  IntMatrix x_;
  GaussianShape r_;
  Eigen::VectorXd c_;
  FiberOptions opts_;
  std::size_t n_ = 0, m_ = 0, k_ = 0;
  ColumnHnf hnf_;
  bool surjective_ = false;
  Eigen::MatrixXd w_;
  Eigen::VectorXd xc_;
  IntMatrix kernel_;
  std::vector<std::vector<std::int64_t>> kernel64_;
  std::vector<IntPoint> unit_solutions_;
  Eigen::MatrixXd wk_, gram_;
  Eigen::LDLT<Eigen::MatrixXd> gram_ldlt_;
  double sqrt_det_ = 1.0;
  std::optional<GaussianShape> target_;
  FiberRoute route_ = FiberRoute::kPrimal;
  double radius_ = 0.0;
  double tail_factor_ = 0.0;
  std::optional<Enumerator> primal_;
  std::vector<std::vector<std::int64_t>> dual_points_;
  std::vector<double> dual_weights_;
  double dual_tail_ = 0.0;
  double lattice_lo_ = 1.0, lattice_hi_ = 1.0;
};

// Single fiber A_z of X for v ~ D_{Z^m + c, R}; z is the offset from Xc.
inline FiberEnumeration fiber_mass(const IntMatrix& x, const GaussianShape& r,
                                   const Eigen::VectorXd& c, const IntPoint& z,
                                   double radius = 0.0, bool keep_points = true) {
  FiberOptions opts;
  opts.radius = radius;
  opts.route = FiberRoute::kPrimal;
  FiberModel model(x, r, c, opts);
  FiberEnumeration f = model.fiber(z, keep_points);
  if (!f.in_support) throw NotInSupport("fiber_mass: z is not in X Z^m + Xc");
  return f;
}

// Output points z in Z^n + Xc with target-normalized norm at most radius.
struct Region {
  Eigen::VectorXd shift;  // Xc
  std::vector<IntPoint> points;
  double radius = 0.0;
  double target_sum = 0.0;     // sum of rho_target over the region
  double target_tail = 1.0;    // coset_mass relative tail of the target over the region
  double target_lattice_hi = 0.0;  // upper bound on rho_target(Z^n)
};

inline Region make_region(const FiberModel& model, double radius = 0.0,
                          double tail_budget = 1e-12) {
  const std::size_t n = model.n();
  Region reg;
  reg.shift = model.xc();
  reg.radius = radius > 0.0 ? radius : radius_for_tail(n, tail_budget);
  LatticeCoset coset{IntMatrix::identity(n), model.xc()};
  const GaussianShape& t = model.target_shape();
  auto wc = detail::whiten(coset, t);
  enumerate_coset(wc.basis, wc.shift, reg.radius, model.options().budget,
                  [&](const std::vector<std::int64_t>& y, double d2) {
                    reg.points.push_back(y);
                    reg.target_sum += std::exp(-std::numbers::pi * d2);
                  });
  std::sort(reg.points.begin(), reg.points.end());
  double f = gaussian_tail_factor(n, reg.radius);
  if (!(f < 1.0)) throw InvalidArgument("make_region: radius too small for a certified tail");
  double centred = wc.shift.isZero(0.0) ? reg.target_sum
                                         : detail::centred_mass(wc.basis, reg.radius, model.options().budget);
  reg.target_lattice_hi = centred / (1.0 - f);
  reg.target_tail = reg.target_sum > 0.0 ? std::min(1.0, 2.0 * f * reg.target_lattice_hi / reg.target_sum) : 1.0;
  return reg;
}

// Upper bound on the output mass outside the region: each fiber has
// rho_R(A_z) <= rho_target(z) * rho_R(A), and the target tail beyond the
// region radius is bounded as in coset_mass.
inline double outside_region_mass(const FiberModel& model, const Region& region) {
  double f = gaussian_tail_factor(model.n(), region.radius);
  return 2.0 * f * region.target_lattice_hi * model.lattice_mass_hi();
}

inline constexpr double kDefaultMaxTail = 1e-3;

// E_{X,R,c} tabulated on the region. tail_bound covers truncation inside
// fibers plus mass outside the region, relative to the tabulated mass.
inline DiscretePMF exact_output_pmf(const FiberModel& model, const Region& region,
                                    double max_tail = kDefaultMaxTail) {
  DiscretePMF pmf;
  pmf.shift = region.shift;
  double err = 0.0;
  for (const auto& z : region.points) {
    FiberEnumeration f = model.fiber(z);
    pmf.points.push_back(z);
    pmf.masses.push_back(f.in_support ? f.mass : 0.0);
    err += f.tail_bound;
  }
  double total = pmf.total();
  if (!(total > 0.0)) throw InvalidArgument("exact_output_pmf: region carries no output mass");
  pmf.tail_bound = (err + outside_region_mass(model, region)) / total;
  if (pmf.tail_bound > max_tail)
    throw BudgetExceeded("exact_output_pmf: region tail bound " + std::to_string(pmf.tail_bound) +
                         " exceeds " + std::to_string(max_tail));
  pmf.normalize();
  return pmf;
}

inline DiscretePMF exact_output_pmf(const IntMatrix& x, const GaussianShape& r,
                                    const Eigen::VectorXd& c, double region_radius = 0.0,
                                    FiberOptions opts = {}) {
  FiberModel model(x, r, c, opts);
  return exact_output_pmf(model, make_region(model, region_radius, opts.tail_budget));
}

// D_{Z^n + Xc, R X^T} tabulated on the region.
inline DiscretePMF target_pmf(const FiberModel& model, const Region& region) {
  DiscretePMF pmf;
  pmf.shift = region.shift;
  for (const auto& z : region.points) {
    pmf.points.push_back(z);
    pmf.masses.push_back(std::exp(-std::numbers::pi * model.target_norm_sq(z)));
  }
  pmf.tail_bound = region.target_tail;
  pmf.normalize();
  return pmf;
}

inline DiscretePMF target_pmf(const IntMatrix& x, const GaussianShape& r,
                              const Eigen::VectorXd& c, double region_radius = 0.0,
                              FiberOptions opts = {}) {
  FiberModel model(x, r, c, opts);
  return target_pmf(model, make_region(model, region_radius, opts.tail_budget));
}

// Maps a pmf on Z^n + shift through z -> B z (B square or tall, full column rank).
inline DiscretePMF push_pmf(const DiscretePMF& pmf, const IntMatrix& b) {
  if (b.cols() != static_cast<std::size_t>(pmf.shift.size()))
    throw DimensionMismatch("push_pmf: B columns differ from pmf dimension");
  if (rank(b) != b.cols()) throw RankDeficient("push_pmf: B lacks full column rank");
  std::vector<std::vector<std::int64_t>> b64(b.rows(), std::vector<std::int64_t>(b.cols()));
  for (std::size_t i = 0; i < b.rows(); ++i)
    for (std::size_t j = 0; j < b.cols(); ++j) b64[i][j] = static_cast<std::int64_t>(b(i, j));
  DiscretePMF out;
  out.shift = b.to_double() * pmf.shift;
  out.masses = pmf.masses;
  out.tail_bound = pmf.tail_bound;
  for (const auto& p : pmf.points) out.points.push_back(push_to_lattice(b64, p));
  return out;
}

struct ExactTVDReport {
  double tvd = 0.0;
  double truncation_error = 0.0;
  std::size_t support_size = 0;
  double radius = 0.0;
};

namespace detail {

// Floating-point allowance for summing `terms` normalized masses.
inline double rounding_slack(std::size_t terms) {
  return 4.0 * static_cast<double>(terms + 16) * std::numeric_limits<double>::epsilon();
}

}  // namespace detail

// Half the l1 distance over the union of both tables. Each table is within
// its tail_bound of the distribution it truncates, so the true distance lies
// within tail_p + tail_q (+ rounding) of tvd.
inline ExactTVDReport exact_tvd(const DiscretePMF& p, const DiscretePMF& q, double radius = 0.0) {
  if (p.shift.size() != q.shift.size() ||
      (p.shift - q.shift).norm() > 1e-9 * (1.0 + p.shift.norm()))
    throw InvalidArgument("exact_tvd: region mismatch (different cosets)");
  std::map<IntPoint, std::pair<double, double>> u;
  for (std::size_t i = 0; i < p.size(); ++i) u[p.points[i]].first += p.masses[i];
  for (std::size_t i = 0; i < q.size(); ++i) u[q.points[i]].second += q.masses[i];
  ExactTVDReport rep;
  double s = 0.0;
  for (const auto& [pt, pq] : u) s += std::abs(pq.first - pq.second);
  rep.tvd = 0.5 * s;
  rep.support_size = u.size();
  rep.truncation_error = p.tail_bound + q.tail_bound + detail::rounding_slack(u.size());
  rep.radius = radius;
  return rep;
}

struct PushforwardTVD {
  ExactTVDReport report;
  double output_tail = 0.0;
  double target_tail = 0.0;
  std::size_t fiber_terms = 0;
  // Worst per-point ratio rho_R(A_z) / (rho_target(z) rho_R(A)) and the
  // truncation allowance on it.
  double min_ratio = std::numeric_limits<double>::infinity();
  double max_ratio = 0.0;
  double ratio_slack = 0.0;
};

// Exact distance between E_{X,R,c} and D_{Z^n + Xc, R X^T} over the region,
// without materializing point tables.
inline PushforwardTVD pushforward_tvd(const FiberModel& model, const Region& region) {
  const std::size_t k = region.points.size();
  std::vector<double> out(k), tgt(k);
  double err = 0.0, so = 0.0, st = 0.0;
  PushforwardTVD res;
  const double lat = model.kernel_rank() == 0 ? 1.0 : 0.5 * (model.lattice_mass_lo() + model.lattice_mass_hi());
  const double lat_rel = model.kernel_rank() == 0
                             ? 0.0
                             : (model.lattice_mass_hi() - model.lattice_mass_lo()) / model.lattice_mass_lo();
  for (std::size_t i = 0; i < k; ++i) {
    FiberEnumeration f = model.fiber(region.points[i]);
    double t = std::exp(-std::numbers::pi * model.target_norm_sq(region.points[i]));
    out[i] = f.in_support ? f.mass : 0.0;
    tgt[i] = t;
    err += f.tail_bound;
    so += out[i];
    st += t;
    res.fiber_terms += f.count;
    if (f.in_support && t > 0.0 && out[i] > 0.0) {
      double ratio = out[i] / (t * lat);
      res.min_ratio = std::min(res.min_ratio, ratio);
      res.max_ratio = std::max(res.max_ratio, ratio);
      res.ratio_slack = std::max(res.ratio_slack, f.tail_bound / out[i] + lat_rel);
    }
  }
  if (!(so > 0.0)) throw InvalidArgument("pushforward_tvd: region carries no output mass");
  res.output_tail = (err + outside_region_mass(model, region)) / so;
  res.target_tail = region.target_tail;
  double d = 0.0;
  for (std::size_t i = 0; i < k; ++i) d += std::abs(out[i] / so - tgt[i] / st);
  res.report.tvd = 0.5 * d;
  res.report.support_size = k;
  res.report.radius = region.radius;
  res.report.truncation_error = res.output_tail + res.target_tail + detail::rounding_slack(k);
  res.ratio_slack += 1e-10;
  return res;
}

struct MCTVDReport {
  double estimate = 0.0;
  double lo = 0.0;
  double hi = 0.0;
  double level = 0.99;
  std::size_t n = 0;
  double bias_bound = 0.0;  // sqrt(support / N)
  std::size_t support = 0;  // target points plus observed points outside the table
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
};

using PointSampler = std::function<IntPoint(SampleStream&)>;

// Plug-in distance between the empirical pmf of N draws and the target. The
// estimate concentrates within sqrt(ln(2/(1-level)) / (2N)) of its mean (each
// draw moves it by at most 1/N), and its upward bias is at most
// sqrt(support / N).
inline MCTVDReport mc_tvd(const PointSampler& sampler, const DiscretePMF& target, std::size_t n,
                          SampleStream stream, double level = 0.99) {
  if (n == 0) throw InvalidArgument("mc_tvd: N must be positive");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("mc_tvd: level must lie in (0, 1)");
  MCTVDReport rep;
  rep.n = n;
  rep.level = level;
  rep.seed = stream.seed;
  rep.stream_id = stream.stream_id;
  std::map<IntPoint, std::size_t> counts;
  for (std::size_t i = 0; i < n; ++i) ++counts[sampler(stream)];
  auto tmap = target.as_map();
  double s = 0.0;
  std::size_t outside = 0;
  for (const auto& [pt, q] : tmap) {
    auto it = counts.find(pt);
    double emp = it == counts.end() ? 0.0 : static_cast<double>(it->second) / static_cast<double>(n);
    s += std::abs(emp - q);
  }
  for (const auto& [pt, cnt] : counts)
    if (!tmap.count(pt)) {
      s += static_cast<double>(cnt) / static_cast<double>(n);
      ++outside;
    }
  const double nd = static_cast<double>(n);
  rep.estimate = 0.5 * s;
  rep.support = tmap.size() + outside;
  rep.bias_bound = std::sqrt(static_cast<double>(rep.support) / nd);
  double w = std::sqrt(std::log(2.0 / (1.0 - level)) / (2.0 * nd));
  rep.lo = std::max(0.0, rep.estimate - w - rep.bias_bound - target.tail_bound);
  rep.hi = std::min(1.0, rep.estimate + w + target.tail_bound);
  return rep;
}

// Draws X v with v ~ D_{Z^m + c, R}; returns the offset of X v from Xc.
inline PointSampler make_output_sampler(const IntMatrix& x, const GaussianShape& r,
                                        const Eigen::VectorXd& c) {
  auto sampler = std::make_shared<CosetSampler>(LatticeCoset::integer(c), r);
  std::vector<std::vector<std::int64_t>> x64(x.rows(), std::vector<std::int64_t>(x.cols()));
  for (std::size_t i = 0; i < x.rows(); ++i)
    for (std::size_t j = 0; j < x.cols(); ++j) x64[i][j] = static_cast<std::int64_t>(x(i, j));
  return [sampler, x64](SampleStream& s) { return push_to_lattice(x64, sampler->sample(s)); };
}

}  // namespace dgsum

#endif  // DGSUM_TVD_HPP_
