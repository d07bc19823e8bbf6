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

#ifndef DGSUM_SAMPLER_HPP_
#define DGSUM_SAMPLER_HPP_

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/errors.hpp"
#include "dgsum/gaussian.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"

namespace dgsum {

inline constexpr const char* kRngName = "splitmix64-ctr-v1";

// Samples farther than this many multiples of s from the centre are
// rejected and redrawn.
inline constexpr double kTailCut = 12.0;

inline constexpr std::uint64_t splitmix64(std::uint64_t z) {
  z += 0x9e3779b97f4a7c15ULL;
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Counter-based generator: word i of stream (seed, id) is
//   splitmix64(key + splitmix64(i)),  key = splitmix64(seed ^ splitmix64(id)).
// The whole state is the explicit (seed, stream_id, counter) triple.
struct SampleStream {
  std::uint64_t seed = 0;
  std::uint64_t stream_id = 0;
  std::uint64_t counter = 0;

  std::uint64_t next_u64() {
    std::uint64_t key = splitmix64(seed ^ splitmix64(stream_id));
    return splitmix64(key + splitmix64(counter++));
  }

  // Uniform in [0, 1).
  double uniform() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  // Uniform in (0, 1].
  double uniform_pos() {
    return static_cast<double>((next_u64() >> 11) + 1) * 0x1.0p-53;
  }

  bool bit() { return (next_u64() >> 63) != 0; }

  // Fresh stream with the same seed and a different id.
  SampleStream child(std::uint64_t id) const { return {seed, id, 0}; }

  bool operator==(const SampleStream&) const = default;
};

// D_{Z,s} re-centred at `center`: k with probability proportional to
// exp(-pi (k - center)^2 / s^2). Rejection from a discrete Laplace proposal
// with scale t = floor(s / sqrt(2 pi)) + 1 around round(center); the
// acceptance exponent is bounded analytically, so no table is needed.
inline std::int64_t sample_dg_center(double s, double center, SampleStream& stream) {
  if (!(s > 0.0) || !std::isfinite(s))
    throw InvalidArgument("sample_dg: s must be positive and finite");
  const double pi = std::numbers::pi;
  const double sigma = s / std::sqrt(2.0 * pi);
  const double t = std::floor(sigma) + 1.0;
  const double mu0 = std::round(center);
  const double delta = center - mu0;
  const double log_bound = sigma * sigma / (2.0 * t * t) + std::abs(delta) / t;
  const double cut = kTailCut * s;
  while (true) {
    bool negative = stream.bit();
    double g = std::floor(-t * std::log(stream.uniform_pos()));
    if (negative && g == 0.0) continue;
    if (g > cut + 2.0) continue;
    double d = negative ? -g : g;
    double y = mu0 + d;
    double off = y - center;
    if (std::abs(off) > cut) continue;
    double log_accept = -pi * off * off / (s * s) + g / t - log_bound;
    if (stream.uniform() < std::exp(log_accept)) return static_cast<std::int64_t>(y);
  }
}

inline std::int64_t sample_dg_int(double s, SampleStream& stream) {
  return sample_dg_center(s, 0.0, stream);
}

// Inverse-CDF sampler over a tabulated pmf.
class TableSampler {
 public:
  explicit TableSampler(DiscretePMF pmf) : pmf_(std::move(pmf)) {
    if (pmf_.size() == 0) throw InvalidArgument("TableSampler: empty table");
    cdf_.reserve(pmf_.size());
    double acc = 0.0;
    for (double m : pmf_.masses) cdf_.push_back(acc += m);
    for (double& c : cdf_) c /= acc;
    cdf_.back() = 1.0;
  }

  const IntPoint& sample(SampleStream& stream) const {
    double u = stream.uniform();
    auto it = std::upper_bound(cdf_.begin(), cdf_.end(), u);
    if (it == cdf_.end()) --it;
    return pmf_.points[static_cast<std::size_t>(it - cdf_.begin())];
  }

  const DiscretePMF& pmf() const { return pmf_; }

 private:
  DiscretePMF pmf_;
  std::vector<double> cdf_;
};

// Sampler for D_{L+c,S}. Axis-aligned integer cosets with spherical or
// diagonal shapes use independent per-coordinate rejection sampling; every
// other case tabulates exact_pmf and inverts its CDF. Samples are returned as
// integer offsets p, the drawn point being shift + p.
class CosetSampler {
 public:
  CosetSampler(const LatticeCoset& coset, const GaussianShape& shape,
               std::size_t table_budget = 10'000'000)
      : shift_(coset.shift) {
    coset.validate();
    shape.check_dim(coset.dimension());
    if (coset.is_standard_integer() && shape.is_diagonal()) {
      params_ = shape.diagonal_entries(coset.dimension());
    } else {
      try {
        table_.emplace_back(exact_pmf(coset, shape, 0.0, table_budget));
      } catch (const BudgetExceeded& e) {
        throw BudgetExceeded(std::string("CosetSampler: support table too large: ") +
                             e.what());
      }
    }
  }

  bool fast_path() const { return table_.empty(); }

  IntPoint sample(SampleStream& stream) const {
    if (!table_.empty()) return table_.front().sample(stream);
    IntPoint p(params_.size());
    for (std::size_t i = 0; i < params_.size(); ++i)
      p[i] = sample_dg_center(params_[i], -shift_(static_cast<Eigen::Index>(i)), stream);
    return p;
  }

 private:
  Eigen::VectorXd shift_;
  std::vector<double> params_;
  std::vector<TableSampler> table_;  // zero or one entry
};

inline IntPoint sample_dg_coset(const LatticeCoset& coset, const GaussianShape& shape,
                                SampleStream& stream) {
  return CosetSampler(coset, shape).sample(stream);
}

// B x for an integer coefficient vector x.
inline IntVec push_to_lattice(const IntMatrix& b, const IntVec& x) {
  if (x.size() != b.cols()) throw DimensionMismatch("push_to_lattice: dim(x) != cols(B)");
  if (rank(b) != b.cols()) throw InvalidArgument("push_to_lattice: B lacks full column rank");
  return b * x;
}

inline IntPoint push_to_lattice(const std::vector<std::vector<std::int64_t>>& b,
                                const IntPoint& x) {
  IntPoint out(b.size(), 0);
  for (std::size_t i = 0; i < b.size(); ++i) {
    if (b[i].size() != x.size()) throw DimensionMismatch("push_to_lattice: dim(x) != cols(B)");
    for (std::size_t j = 0; j < x.size(); ++j) out[i] += b[i][j] * x[j];
  }
  return out;
}

}  // namespace dgsum

#endif  // DGSUM_SAMPLER_HPP_
