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

#ifndef DGSUM_EXPERIMENTS_HPP_
#define DGSUM_EXPERIMENTS_HPP_

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/errors.hpp"
#include "dgsum/experiment_config.hpp"
#include "dgsum/gaussian.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"
#include "dgsum/lattice.hpp"
#include "dgsum/quality.hpp"
#include "dgsum/sampler.hpp"
#include "dgsum/tvd.hpp"
#include "json.hpp"

namespace dgsum {

inline constexpr const char* kToolName = "dgsum";
inline constexpr const char* kToolVersion = "0.1.0";

enum ExitCode : int {
  kExitOk = 0,
  kExitError = 1,      // bad config or input
  kExitGateUnmet = 2,  // a precondition or pass-rate gate did not hold
  kExitInvariant = 3,  // an internal check failed
};

using Json = nlohmann::ordered_json;

namespace report {

// Reals are rounded to 12 significant digits; non-finite values become null.
inline Json num(double x) {
  if (!std::isfinite(x)) return nullptr;
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

inline Json num(const std::optional<double>& x) { return x ? num(*x) : Json(nullptr); }

inline Json big(const BigInt& v) {
  if (v >= std::numeric_limits<std::int64_t>::min() && v <= std::numeric_limits<std::int64_t>::max())
    return static_cast<std::int64_t>(v);
  return v.str();
}

inline Json vec(const IntVec& v) {
  Json a = Json::array();
  for (const auto& x : v) a.push_back(big(x));
  return a;
}

inline Json matrix(const IntMatrix& m) {
  Json a = Json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) a.push_back(vec(m.row(i)));
  return a;
}

inline Json reals(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

inline Json reals(const Eigen::VectorXd& v) {
  return reals(std::vector<double>(v.data(), v.data() + v.size()));
}

inline Json inequality(const Inequality& q) {
  return {{"lhs", num(q.lhs)}, {"rhs", num(q.rhs)}, {"pass", q.pass}};
}

}  // namespace report

// Output directory, report files and per-stage status of one command run.
class RunContext {
 public:
  RunContext(std::string command, const ExperimentConfig& cfg, std::ostream& log)
      : command_(std::move(command)), cfg_(cfg), log_(log) {}

  const std::string& command() const { return command_; }
  const ExperimentConfig& config() const { return cfg_; }
  std::ostream& log() { return log_; }

  void stage(std::string name, std::string status, std::string detail = {}) {
    stages_.push_back({std::move(name), std::move(status), std::move(detail)});
  }

  void write_text(const std::string& name, const std::string& text) {
    std::filesystem::create_directories(cfg_.out_dir);
    std::ofstream out(std::filesystem::path(cfg_.out_dir) / name, std::ios::binary);
    if (!out) throw Error("cannot write " + name + " in " + cfg_.out_dir);
    out << text;
    outputs_.push_back(name);
  }

  void write_json(const std::string& name, const Json& j) { write_text(name, j.dump(2) + "\n"); }

  const std::vector<std::string>& outputs() const { return outputs_; }

  Json manifest(int exit_code, double seconds) const {
    Json cfg = Json::object();
    for (const auto& [k, v] : cfg_.to_pairs()) cfg[k] = v;
    Json stages = Json::array();
    for (const auto& s : stages_)
      stages.push_back({{"stage", s.name}, {"status", s.status}, {"detail", s.detail}});
    return {{"tool", kToolName},
            {"version", kToolVersion},
            {"command", command_},
            {"config", cfg},
            {"rng", {{"name", kRngName}, {"seed", cfg_.seed}, {"tail_cut", kTailCut}}},
            {"wall_clock_seconds", report::num(seconds)},
            {"stages", stages},
            {"outputs", outputs_},
            {"exit_code", exit_code}};
  }

 private:
  struct Stage {
    std::string name, status, detail;
  };
  std::string command_;
  const ExperimentConfig& cfg_;
  std::ostream& log_;
  std::vector<Stage> stages_;
  std::vector<std::string> outputs_;
};

// Stream ids: run-level streams use small ids; trial t uses ((t + 1) << 8) | purpose.
enum StreamPurpose : std::uint64_t { kStreamInstance = 1, kStreamSearch = 2, kStreamSample = 3, kStreamMC = 4 };

inline SampleStream run_stream(const ExperimentConfig& cfg, StreamPurpose p) { return {cfg.seed, p, 0}; }

inline SampleStream trial_stream(const ExperimentConfig& cfg, std::size_t trial, StreamPurpose p) {
  return {cfg.seed, ((static_cast<std::uint64_t>(trial) + 1) << 8) | p, 0};
}

inline GaussianShape instance_shape(const ExperimentConfig& cfg) {
  if (cfg.s) return GaussianShape::spherical(*cfg.s);
  if (cfg.s_matrix) return GaussianShape::ellipsoidal(*cfg.s_matrix);
  throw InvalidArgument("instance_shape: no s or s_file");
}

// X <- (D_{Z^n,S})^m, column by column.
inline IntMatrix draw_instance(std::size_t n, std::size_t m, const GaussianShape& s,
                               SampleStream stream) {
  CosetSampler sampler(LatticeCoset::integer(n), s);
  IntMatrix x(n, m);
  for (std::size_t j = 0; j < m; ++j) {
    IntPoint col = sampler.sample(stream);
    for (std::size_t i = 0; i < n; ++i) x(i, j) = col[i];
  }
  return x;
}

inline IntMatrix instance_matrix(const ExperimentConfig& cfg, SampleStream stream) {
  if (cfg.x) return *cfg.x;
  return draw_instance(cfg.n, cfg.m, instance_shape(cfg), stream);
}

// sigma_1 used by the search schedule: from S when given, else a column-norm proxy.
inline double search_sigma(const ExperimentConfig& cfg, const IntMatrix& x) {
  if (cfg.s) return *cfg.s;
  if (cfg.s_matrix) return instance_shape(cfg).sigma_max();
  return std::max(1.0, column_bound(x).value / std::sqrt(static_cast<double>(x.rows())));
}

struct QualityRun {
  QualityCertificate cert;
  std::string method = "none";  // collision | fallback | none
  SearchStats stats;
  std::string search_note;
  std::string fallback_note;
};

// Collision search first; the exact fallback runs only when the search fails
// or its output does not verify.
inline QualityRun run_quality(const IntMatrix& x, double sigma1, std::size_t memory,
                              SampleStream stream) {
  const std::size_t n = x.rows();
  const std::size_t m = x.cols();
  const std::size_t rk = rank(x);
  if (rk != n)
    throw RankDeficient("X lacks full row rank (rank " + std::to_string(rk) + " < n = " +
                        std::to_string(n) + ")");
  QualityRun q;
  try {
    auto params = CollisionSearchParams::schedule(n, sigma1, m, memory);
    DualVectors dv = find_dual_vectors(x, params, stream);
    q.stats = dv.stats;
    q.cert = certify_quality(x, dv.u);
    if (q.cert.verified) {
      q.method = "collision";
      return q;
    }
    q.search_note = "search output rejected: " + q.cert.reason;
  } catch (const CollisionNotFound& e) {
    q.search_note = e.what();
  } catch (const BudgetExceeded& e) {
    q.search_note = e.what();
  }
  try {
    q.cert = certify_quality(x, exact_dual_fallback(x));
    if (q.cert.verified) q.method = "fallback";
    else q.fallback_note = "fallback output rejected: " + q.cert.reason;
  } catch (const NotSurjective& e) {
    q.cert = QualityCertificate{};
    q.cert.reason = e.what();
    q.fallback_note = e.what();
  }
  return q;
}

inline Json quality_json(const QualityRun& q) {
  Json u = Json::array();
  for (const auto& ui : q.cert.u) u.push_back(report::vec(ui));
  Json draws = q.stats.draws, witnesses = q.stats.witnesses;
  return {{"verified", q.cert.verified},
          {"method", q.method},
          {"q1", report::num(q.cert.q1)},
          {"q2", report::num(q.cert.q2)},
          {"q1_sq", report::big(q.cert.q1_sq)},
          {"q2_sq", report::big(q.cert.q2_sq)},
          {"u", u},
          {"reason", q.cert.reason},
          {"search_stats", {{"draws", draws}, {"witnesses", witnesses}}},
          {"search_note", q.search_note},
          {"fallback_note", q.fallback_note}};
}

// Noise shape R together with sigma_m(R) and the instance threshold.
struct NoiseChoice {
  GaussianShape shape = GaussianShape::spherical(1.0);
  Eigen::MatrixXd matrix;
  double sigma_m = 0.0;
  std::optional<double> threshold;
  std::string source;  // r | r_file | threshold
};

inline NoiseChoice choose_noise(const ExperimentConfig& cfg, std::size_t n, std::size_t m,
                                const QualityRun* q) {
  NoiseChoice out;
  if (m > n && q && q->cert.verified)
    out.threshold = theorem32_threshold(q->cert.q1, q->cert.q2, m, n, cfg.eps);
  const auto md = static_cast<Eigen::Index>(m);
  if (cfg.r) {
    out.shape = GaussianShape::spherical(*cfg.r);
    out.matrix = *cfg.r * Eigen::MatrixXd::Identity(md, md);
    out.source = "r";
  } else if (cfg.r_matrix) {
    out.shape = GaussianShape::ellipsoidal(*cfg.r_matrix);
    out.matrix = *cfg.r_matrix;
    out.source = "r_file";
  } else {
    if (!out.threshold)
      throw PreconditionUnmet(
          "no r given and no threshold available (needs m > n and a verified certificate)");
    double r = cfg.r_scale * *out.threshold;
    out.shape = GaussianShape::spherical(r);
    out.matrix = r * Eigen::MatrixXd::Identity(md, md);
    out.source = "threshold";
  }
  out.sigma_m = out.shape.sigma_min();
  return out;
}

inline std::string precondition_status(const NoiseChoice& noise) {
  if (!noise.threshold) return "not applicable";
  return noise.sigma_m >= *noise.threshold ? "met" : "unmet";
}

inline Json exact_json(const FiberModel& model, const Region& region, const PushforwardTVD& r) {
  return {{"tvd", report::num(r.report.tvd)},
          {"truncation_error", report::num(r.report.truncation_error)},
          {"support_size", r.report.support_size},
          {"radius", report::num(region.radius)},
          {"route", route_name(model.route())},
          {"fiber_terms", r.fiber_terms},
          {"output_tail", report::num(r.output_tail)},
          {"target_tail", report::num(r.target_tail)},
          {"min_ratio", report::num(r.min_ratio)},
          {"max_ratio", report::num(r.max_ratio)},
          {"ratio_slack", report::num(r.ratio_slack)}};
}

inline Json mc_json(const MCTVDReport& r) {
  return {{"estimate", report::num(r.estimate)},
          {"lo", report::num(r.lo)},
          {"hi", report::num(r.hi)},
          {"level", report::num(r.level)},
          {"n", r.n},
          {"bias_bound", report::num(r.bias_bound)},
          {"support", r.support},
          {"seed", r.seed},
          {"stream_id", r.stream_id}};
}

// D_{Z^n + Xc, R X^T} tabulated directly from its shape.
inline DiscretePMF direct_target_pmf(const IntMatrix& x, const NoiseChoice& noise,
                                     const Eigen::VectorXd& c) {
  Eigen::MatrixXd xd = x.to_double();
  return exact_pmf(LatticeCoset::integer(xd * c),
                   GaussianShape::ellipsoidal(noise.matrix * xd.transpose()));
}

inline MCTVDReport run_mc(const IntMatrix& x, const NoiseChoice& noise, const Eigen::VectorXd& c,
                          std::size_t samples, double level, SampleStream stream) {
  DiscretePMF target = direct_target_pmf(x, noise, c);
  return mc_tvd(make_output_sampler(x, noise.shape, c), target, samples, stream, level);
}

template <class F>
void parallel_for(std::size_t count, std::size_t threads, F&& f) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) f(i);
    });
  for (auto& th : pool) th.join();
}

inline std::string fmt_real(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", x);
  return buf;
}

// ---- commands ----

inline int cmd_sample(RunContext& ctx) {
  const auto& cfg = ctx.config();
  IntMatrix x = instance_matrix(cfg, run_stream(cfg, kStreamInstance));
  ctx.stage("instance", "ok", cfg.x ? "x_file" : "drawn");
  ctx.write_text("X.txt", format_int_matrix(x));
  std::optional<QualityRun> q;
  if (!cfg.r && !cfg.r_matrix) {
    q = run_quality(x, search_sigma(cfg, x), cfg.search_memory, run_stream(cfg, kStreamSearch));
    ctx.stage("quality", q->cert.verified ? "ok" : "failed", q->method);
  }
  NoiseChoice noise = choose_noise(cfg, x.rows(), x.cols(), q ? &*q : nullptr);
  Eigen::VectorXd c = cfg.c_vector();
  Eigen::VectorXd xc = x.to_double() * c;
  const bool integral = c.isZero(0.0);
  PointSampler sampler = make_output_sampler(x, noise.shape, c);
  SampleStream stream = run_stream(cfg, kStreamSample);
  std::string csv;
  for (std::size_t i = 0; i < x.rows(); ++i) csv += (i ? ",x" : "x") + std::to_string(i + 1);
  csv += '\n';
  char buf[32];
  for (std::size_t k = 0; k < cfg.samples; ++k) {
    IntPoint p = sampler(stream);
    for (std::size_t i = 0; i < p.size(); ++i) {
      if (i) csv += ',';
      if (integral) {
        csv += std::to_string(p[i]);
      } else {
        std::snprintf(buf, sizeof buf, "%.12g",
                      xc(static_cast<Eigen::Index>(i)) + static_cast<double>(p[i]));
        csv += buf;
      }
    }
    csv += '\n';
  }
  ctx.write_text("samples.csv", csv);
  ctx.stage("sample", "ok", std::to_string(cfg.samples) + " draws");
  ctx.write_json("sample.json", {{"command", "sample"},
                                 {"n", x.rows()},
                                 {"m", x.cols()},
                                 {"x", report::matrix(x)},
                                 {"c", report::reals(c)},
                                 {"sigma_m_R", report::num(noise.sigma_m)},
                                 {"noise_source", noise.source},
                                 {"threshold", report::num(noise.threshold)},
                                 {"samples", cfg.samples},
                                 {"rng", {{"name", kRngName}, {"seed", cfg.seed}, {"stream_id", stream.stream_id}}}});
  ctx.log() << "sample: wrote " << cfg.samples << " draws of X v (sigma_m(R) = "
            << fmt_real(noise.sigma_m) << ")\n";
  return kExitOk;
}

inline int cmd_quality(RunContext& ctx) {
  const auto& cfg = ctx.config();
  IntMatrix x = instance_matrix(cfg, run_stream(cfg, kStreamInstance));
  ctx.stage("instance", "ok", cfg.x ? "x_file" : "drawn");
  ctx.write_text("X.txt", format_int_matrix(x));
  Json rep = {{"command", "quality"}, {"n", x.rows()}, {"m", x.cols()}, {"x", report::matrix(x)}};
  const double sigma1 = search_sigma(cfg, x);
  if (cfg.s || cfg.s_matrix) {
    auto [q1, q2] = nominal_quality(x.rows(), x.cols(), sigma1);
    rep["nominal"] = {{"q1", report::num(q1)}, {"q2", report::num(q2)}};
  } else {
    rep["nominal"] = nullptr;
  }
  QualityRun q;
  try {
    q = run_quality(x, sigma1, cfg.search_memory, run_stream(cfg, kStreamSearch));
  } catch (const RankDeficient& e) {
    ctx.stage("rank", "failed", e.what());
    rep["certificate"] = {{"verified", false}, {"reason", e.what()}};
    ctx.write_json("quality.json", rep);
    ctx.log() << "quality: " << e.what() << "\n";
    return kExitGateUnmet;
  }
  ctx.stage("search", q.method == "collision" ? "ok" : "failed", q.search_note);
  if (q.method != "collision")
    ctx.stage("fallback", q.cert.verified ? "ok" : "failed", q.fallback_note);
  rep["certificate"] = quality_json(q);
  ctx.write_json("quality.json", rep);
  if (!q.cert.verified) {
    ctx.log() << "quality: no certificate (" << q.search_note << "; " << q.fallback_note << ")\n";
    return kExitGateUnmet;
  }
  ctx.log() << "quality: verified via " << q.method << ", q1 = " << fmt_real(q.cert.q1)
            << ", q2 = " << fmt_real(q.cert.q2) << "\n";
  return kExitOk;
}

inline int cmd_kernel(RunContext& ctx) {
  const auto& cfg = ctx.config();
  IntMatrix x = instance_matrix(cfg, run_stream(cfg, kStreamInstance));
  ctx.stage("instance", "ok", cfg.x ? "x_file" : "drawn");
  ctx.write_text("X.txt", format_int_matrix(x));
  const std::size_t n = x.rows(), m = x.cols();
  Json rep = {{"command", "kernel"}, {"n", n}, {"m", m}, {"x", report::matrix(x)}};
  const std::size_t rk = rank(x);
  if (rk != n) {
    std::string msg = "X lacks full row rank (rank " + std::to_string(rk) + " < n)";
    ctx.stage("rank", "failed", msg);
    rep["error"] = msg;
    ctx.write_json("kernel.json", rep);
    ctx.log() << "kernel: " << msg << "\n";
    return kExitGateUnmet;
  }
  std::vector<double> lll;
  std::string basis_text;
  if (m > n) {
    LatticeBasis red = lll_reduce(integer_kernel(x));
    basis_text = format_int_matrix(red.vectors.transpose());
    lll = successive_minima_upper(red);
  }
  ctx.write_text("kernel.txt", basis_text);
  ctx.stage("kernel", "ok", "rank " + std::to_string(m - n));
  rep["kernel_rank"] = m - n;
  rep["lambda_hat_lll"] = report::reals(lll);
  if (m == n) {
    rep["quality"] = nullptr;
    rep["lambda_hat"] = Json::array();
    rep["bound"] = nullptr;
    rep["holds"] = true;
    ctx.write_json("kernel.json", rep);
    ctx.log() << "kernel: trivial (m = n)\n";
    return kExitOk;
  }
  QualityRun q = run_quality(x, search_sigma(cfg, x), cfg.search_memory, run_stream(cfg, kStreamSearch));
  ctx.stage("quality", q.cert.verified ? "ok" : "failed", q.method);
  rep["quality"] = quality_json(q);
  if (!q.cert.verified) {
    rep["lambda_hat"] = report::reals(lll);
    rep["bound"] = nullptr;
    rep["holds"] = nullptr;
    ctx.write_json("kernel.json", rep);
    ctx.log() << "kernel: no quality certificate, bound not evaluated\n";
    return kExitGateUnmet;
  }
  // Both the LLL basis and the independent KLP vectors are independent sets
  // of kernel vectors, so the i-th smallest length of either bounds lambda_i.
  KLPBasis klp = klp_vectors(x, q.cert);
  std::vector<double> klp_len;
  for (std::size_t idx : klp.independent_subset) klp_len.push_back(norm(klp.v[idx]));
  std::sort(klp_len.begin(), klp_len.end());
  if (klp_len.size() != m - n) throw InvariantViolation("kernel: KLP vectors do not span the kernel");
  std::vector<double> lam(m - n);
  for (std::size_t i = 0; i < m - n; ++i) lam[i] = std::min(lll[i], klp_len[i]);
  const double bound = 1.0 + q.cert.q1 * q.cert.q2;
  const bool holds = lam.back() <= bound;
  rep["lambda_hat_klp"] = report::reals(klp_len);
  rep["lambda_hat"] = report::reals(lam);
  rep["bound"] = report::num(bound);
  rep["holds"] = holds;
  ctx.write_json("kernel.json", rep);
  ctx.stage("bound", holds ? "ok" : "failed");
  ctx.log() << "kernel: lambda_hat_" << (m - n) << " = " << fmt_real(lam.back())
            << (holds ? " <= " : " > ") << "1 + q1 q2 = " << fmt_real(bound) << "\n";
  if (!holds) throw InvariantViolation("kernel: lambda_hat exceeds 1 + q1 q2 for a verified certificate");
  return kExitOk;
}

inline int cmd_tvd(RunContext& ctx) {
  const auto& cfg = ctx.config();
  IntMatrix x = instance_matrix(cfg, run_stream(cfg, kStreamInstance));
  ctx.stage("instance", "ok", cfg.x ? "x_file" : "drawn");
  ctx.write_text("X.txt", format_int_matrix(x));
  const std::size_t n = x.rows(), m = x.cols();
  Json rep = {{"command", "tvd"}, {"n", n}, {"m", m}, {"eps", report::num(cfg.eps)},
              {"x", report::matrix(x)}, {"c", report::reals(cfg.c_vector())}};
  std::optional<QualityRun> q;
  if (m > n) {
    q = run_quality(x, search_sigma(cfg, x), cfg.search_memory, run_stream(cfg, kStreamSearch));
    ctx.stage("quality", q->cert.verified ? "ok" : "failed", q->method);
    rep["quality"] = quality_json(*q);
  } else {
    rep["quality"] = nullptr;
  }
  NoiseChoice noise = choose_noise(cfg, n, m, q ? &*q : nullptr);
  const std::string pre = precondition_status(noise);
  rep["sigma_m_R"] = report::num(noise.sigma_m);
  rep["noise_source"] = noise.source;
  rep["threshold"] = report::num(noise.threshold);
  rep["precondition"] = pre;
  std::optional<double> ieps;
  if (q && q->cert.verified) ieps = implied_eps(noise.sigma_m, q->cert.q1, q->cert.q2, m, n);
  rep["implied_eps"] = report::num(ieps);
  rep["bound"] = report::num(2.0 * cfg.eps);
  Eigen::VectorXd c = cfg.c_vector();

  bool want_mc = cfg.mode != TvdMode::kExact;
  std::optional<PushforwardTVD> exact;
  rep["exact"] = nullptr;
  if (cfg.mode != TvdMode::kMC) {
    try {
      FiberOptions opts;
      opts.tail_budget = cfg.tail_budget;
      FiberModel model(x, noise.shape, c, opts);
      Region region = make_region(model, cfg.radius, cfg.tail_budget);
      exact = pushforward_tvd(model, region);
      rep["exact"] = exact_json(model, region, *exact);
      ctx.stage("exact", "ok", route_name(model.route()));
    } catch (const BudgetExceeded& e) {
      ctx.stage("exact", "warning", std::string("infeasible, MC only: ") + e.what());
      ctx.log() << "tvd: warning: exact enumeration infeasible, falling back to Monte Carlo\n";
      want_mc = true;
    }
  }
  std::optional<MCTVDReport> mc;
  rep["mc"] = nullptr;
  if (want_mc) {
    mc = run_mc(x, noise, c, cfg.samples, cfg.level, run_stream(cfg, kStreamMC));
    rep["mc"] = mc_json(*mc);
    ctx.stage("mc", "ok", std::to_string(cfg.samples) + " draws");
  }

  std::string verdict;
  int code = kExitOk;
  bool pass = true;
  if (exact) pass = pass && exact->report.tvd <= 2.0 * cfg.eps + exact->report.truncation_error;
  if (mc) pass = pass && mc->lo <= 2.0 * cfg.eps;
  if (pre == "met") {
    verdict = pass ? "pass" : "fail";
    if (!pass) code = kExitInvariant;
  } else if (pre == "unmet") {
    verdict = "precondition unmet";
    code = kExitGateUnmet;
  } else {
    verdict = "no guarantee (precondition not applicable)";
    if (m > n) code = kExitGateUnmet;
  }
  rep["verdict"] = verdict;
  ctx.write_json("tvd.json", rep);
  ctx.log() << "tvd:";
  if (exact)
    ctx.log() << " exact " << fmt_real(exact->report.tvd) << " (+/- "
              << fmt_real(exact->report.truncation_error) << ")";
  if (mc) ctx.log() << " mc " << fmt_real(mc->estimate) << " [" << fmt_real(mc->lo) << ", " << fmt_real(mc->hi) << "]";
  ctx.log() << " vs 2 eps = " << fmt_real(2.0 * cfg.eps) << "; verdict: " << verdict << "\n";
  return code;
}

struct TrialOutcome {
  Json json;
  bool certified = false;
  bool passed = false;
  bool violation = false;
  double sigma_m = std::numeric_limits<double>::quiet_NaN();
  double tvd = std::numeric_limits<double>::quiet_NaN();
  double lattice_diff = std::numeric_limits<double>::quiet_NaN();
};

// Baseline over Z^n against the same output pushed through B and compared
// with D_{L(B) + B Xc, R X^T B^T} tabulated on its own.
inline std::pair<double, double> lattice_variant(const FiberModel& model, const Region& region,
                                                 const NoiseChoice& noise, const IntMatrix& b) {
  DiscretePMF p = exact_output_pmf(model, region);
  ExactTVDReport base = exact_tvd(p, target_pmf(model, region));
  Eigen::MatrixXd bd = b.to_double();
  Eigen::MatrixXd shape = noise.matrix * model.x().to_double().transpose() * bd.transpose();
  DiscretePMF q = exact_pmf(LatticeCoset{b, bd * model.xc()}, GaussianShape::ellipsoidal(shape));
  ExactTVDReport lat = exact_tvd(push_pmf(p, b), q);
  return {base.tvd, lat.tvd};
}

inline TrialOutcome run_trial(const ExperimentConfig& cfg, std::size_t t) {
  TrialOutcome out;
  Json& j = out.json;
  j["trial"] = t;
  const std::size_t n = cfg.n, m = cfg.m;
  try {
    IntMatrix x = cfg.x ? *cfg.x : draw_instance(n, m, instance_shape(cfg), trial_stream(cfg, t, kStreamInstance));
    j["x"] = report::matrix(x);
    QualityRun q = run_quality(x, search_sigma(cfg, x), cfg.search_memory, trial_stream(cfg, t, kStreamSearch));
    j["quality"] = {{"verified", q.cert.verified}, {"method", q.method}, {"q1", report::num(q.cert.q1)},
                    {"q2", report::num(q.cert.q2)}, {"reason", q.cert.reason}};
    if (!q.cert.verified) {
      j["status"] = "uncertified";
      return out;
    }
    out.certified = true;
    NoiseChoice noise = choose_noise(cfg, n, m, &q);
    if (*noise.threshold != theorem32_threshold(q.cert.q1, q.cert.q2, m, n, cfg.eps))
      throw InvariantViolation("trial threshold differs from the certificate's threshold");
    out.sigma_m = noise.sigma_m;
    const std::string pre = precondition_status(noise);
    j["threshold"] = report::num(noise.threshold);
    j["sigma_m_R"] = report::num(noise.sigma_m);
    j["precondition"] = pre;
    Eigen::VectorXd c = cfg.c_vector();
    bool pass = true;
    FiberOptions opts;
    const double budget = cfg.b ? std::min(cfg.tail_budget, 1e-13) : cfg.tail_budget;
    opts.tail_budget = budget;
    std::optional<FiberModel> model;
    std::optional<Region> region;
    if (cfg.mode != TvdMode::kMC) {
      model.emplace(x, noise.shape, c, opts);
      region = make_region(*model, cfg.radius, budget);
      PushforwardTVD r = pushforward_tvd(*model, *region);
      j["exact"] = exact_json(*model, *region, r);
      out.tvd = r.report.tvd;
      pass = pass && r.report.tvd <= 2.0 * cfg.eps + r.report.truncation_error;
    }
    if (cfg.mode != TvdMode::kExact) {
      MCTVDReport mc = run_mc(x, noise, c, cfg.samples, cfg.level, trial_stream(cfg, t, kStreamMC));
      j["mc"] = mc_json(mc);
      if (std::isnan(out.tvd)) out.tvd = mc.estimate;
      pass = pass && mc.lo <= 2.0 * cfg.eps;
    }
    if (cfg.b) {
      if (!model) {
        model.emplace(x, noise.shape, c, opts);
        region = make_region(*model, cfg.radius, budget);
      }
      auto [base, lat] = lattice_variant(*model, *region, noise, *cfg.b);
      out.lattice_diff = std::abs(base - lat);
      j["lattice"] = {{"baseline_tvd", report::num(base)}, {"lattice_tvd", report::num(lat)},
                      {"difference", report::num(out.lattice_diff)}};
    }
    if (pre == "met" && !pass) {
      out.violation = true;
      j["status"] = "tvd above bound";
    } else {
      out.passed = pre == "met" && pass;
      j["status"] = out.passed ? "pass" : "precondition unmet";
    }
  } catch (const InvariantViolation& e) {
    out.violation = true;
    out.passed = false;
    j["status"] = std::string("invariant violation: ") + e.what();
  } catch (const std::exception& e) {
    out.passed = false;
    j["status"] = std::string("error: ") + e.what();
  }
  return out;
}

inline int cmd_main_experiment(RunContext& ctx) {
  const auto& cfg = ctx.config();
  const std::size_t n = cfg.n, m = cfg.m;
  if (m <= n) throw InvalidArgument("main: need m > n");
  if (!cfg.x && !cfg.s && !cfg.s_matrix) throw InvalidArgument("main: need s or s_file");
  std::vector<TrialOutcome> trials(cfg.trials);
  parallel_for(cfg.trials, cfg.threads, [&](std::size_t t) { trials[t] = run_trial(cfg, t); });
  ctx.stage("trials", "ok", std::to_string(cfg.trials) + " trials");

  std::size_t certified = 0, passed = 0, violations = 0;
  double max_tvd = 0.0, max_diff = 0.0, min_sigma = std::numeric_limits<double>::infinity();
  bool have_diff = false;
  Json list = Json::array();
  for (const auto& tr : trials) {
    certified += tr.certified;
    passed += tr.passed;
    violations += tr.violation;
    if (!std::isnan(tr.tvd)) max_tvd = std::max(max_tvd, tr.tvd);
    if (!std::isnan(tr.lattice_diff)) {
      have_diff = true;
      max_diff = std::max(max_diff, tr.lattice_diff);
    }
    if (!std::isnan(tr.sigma_m)) min_sigma = std::min(min_sigma, tr.sigma_m);
    list.push_back(tr.json);
  }
  const double rate = static_cast<double>(passed) / static_cast<double>(cfg.trials);

  Json nominal = Json::object();
  if (cfg.s || cfg.s_matrix) {
    GaussianShape s = instance_shape(cfg);
    auto [q1, q2] = nominal_quality(n, m, s.sigma_max());
    nominal["quality"] = {{"q1", report::num(q1)}, {"q2", report::num(q2)}};
    if (std::isfinite(min_sigma)) {
      NominalParameterReport t = theorem51_check(n, m, cfg.eps, s, GaussianShape::spherical(min_sigma));
      nominal["sigma_m_R"] = report::num(min_sigma);
      nominal["m_condition"] = report::inequality(t.m_condition);
      nominal["r_condition"] = report::inequality(t.r_condition);
      nominal["s_condition"] = report::inequality(t.s_condition);
      nominal["applicable"] = t.applicable;
      nominal["all_pass"] = t.all_pass;
    }
  }
  Json measured = {{"trials", cfg.trials},
                   {"certified", certified},
                   {"passed", passed},
                   {"violations", violations},
                   {"pass_rate", report::num(rate)},
                   {"min_pass_rate", report::num(cfg.min_pass_rate)},
                   {"max_tvd", report::num(max_tvd)},
                   {"bound", report::num(2.0 * cfg.eps)},
                   {"max_lattice_difference", have_diff ? report::num(max_diff) : Json(nullptr)},
                   {"per_trial", list}};
  ctx.write_json("main.json", {{"command", "main"},
                               {"n", n},
                               {"m", m},
                               {"eps", report::num(cfg.eps)},
                               {"mode", mode_name(cfg.mode)},
                               {"nominal_formula_checks", nominal},
                               {"measured", measured}});
  ctx.log() << "main: " << passed << "/" << cfg.trials << " trials passed (" << certified
            << " certified, " << violations << " violations), max tvd " << fmt_real(max_tvd)
            << " vs 2 eps = " << fmt_real(2.0 * cfg.eps);
  if (have_diff) ctx.log() << ", max lattice difference " << fmt_real(max_diff);
  ctx.log() << "\n";
  if (violations > 0) {
    ctx.stage("gate", "failed", "tvd above bound with precondition met");
    return kExitInvariant;
  }
  const bool ok = rate >= cfg.min_pass_rate;
  ctx.stage("gate", ok ? "ok" : "failed", "pass rate " + fmt_real(rate));
  return ok ? kExitOk : kExitGateUnmet;
}

// Runs a command, maps failures to exit codes and writes manifest.json.
inline int run_command(const std::string& command, const ExperimentConfig& cfg, std::ostream& log) {
  auto t0 = std::chrono::steady_clock::now();
  RunContext ctx(command, cfg, log);
  int code = kExitOk;
  try {
    std::filesystem::create_directories(cfg.out_dir);
    if (command == "sample") code = cmd_sample(ctx);
    else if (command == "quality") code = cmd_quality(ctx);
    else if (command == "kernel") code = cmd_kernel(ctx);
    else if (command == "tvd") code = cmd_tvd(ctx);
    else if (command == "main") code = cmd_main_experiment(ctx);
    else throw InvalidArgument("unknown command '" + command + "'");
  } catch (const InvariantViolation& e) {
    ctx.stage("error", "failed", e.what());
    log << command << ": invariant violation: " << e.what() << "\n";
    code = kExitInvariant;
  } catch (const RankDeficient& e) {
    ctx.stage("error", "failed", e.what());
    log << command << ": " << e.what() << "\n";
    code = kExitGateUnmet;
  } catch (const NotSurjective& e) {
    ctx.stage("error", "failed", e.what());
    log << command << ": " << e.what() << "\n";
    code = kExitGateUnmet;
  } catch (const PreconditionUnmet& e) {
    ctx.stage("error", "failed", e.what());
    log << command << ": " << e.what() << "\n";
    code = kExitGateUnmet;
  } catch (const std::exception& e) {
    ctx.stage("error", "failed", e.what());
    log << command << ": error: " << e.what() << "\n";
    code = kExitError;
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  try {
    std::ofstream out(std::filesystem::path(cfg.out_dir) / "manifest.json", std::ios::binary);
    out << ctx.manifest(code, secs).dump(2) << "\n";
  } catch (const std::exception& e) {
    log << command << ": cannot write manifest: " << e.what() << "\n";
    if (code == kExitOk) code = kExitError;
  }
  return code;
}

// Command and config echo recorded in a manifest.
inline std::pair<std::string, ConfigPairs> load_manifest(const std::filesystem::path& path) {
  Json j;
  try {
    j = Json::parse(read_text_file(path));
  } catch (const Json::exception& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
  if (!j.contains("command") || !j.contains("config") || !j["config"].is_object())
    throw ParseError(path.string() + ": not a run manifest");
  ConfigPairs pairs;
  for (auto it = j["config"].begin(); it != j["config"].end(); ++it)
    pairs[it.key()] = it.value().get<std::string>();
  return {j["command"].get<std::string>(), pairs};
}

}  // namespace dgsum

#endif  // DGSUM_EXPERIMENTS_HPP_
