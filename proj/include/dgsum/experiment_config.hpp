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

#ifndef DGSUM_EXPERIMENT_CONFIG_HPP_
#define DGSUM_EXPERIMENT_CONFIG_HPP_

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "dgsum/errors.hpp"
#include "dgsum/hnf.hpp"
#include "dgsum/int_matrix.hpp"

namespace dgsum {

// Key-value text format: one "key = value" per line, '#' starts a comment.
using ConfigPairs = std::map<std::string, std::string>;

inline std::string trim(const std::string& s) {
  auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return "";
  auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

inline ConfigPairs parse_config_text(const std::string& text) {
  ConfigPairs out;
  std::istringstream in(text);
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError("config line " + std::to_string(lineno) + ": expected key = value");
    std::string key = trim(line.substr(0, eq));
    std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ParseError("config line " + std::to_string(lineno) + ": empty key");
    if (out.count(key)) throw ParseError("config: duplicate key '" + key + "'");
    out[key] = value;
  }
  return out;
}

inline std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline bool is_path_key(const std::string& key) {
  return key == "x_file" || key == "s_file" || key == "r_file" || key == "b_file";
}

// Reads a config file; input file paths inside it are taken relative to its
// directory, out_dir relative to the working directory.
inline ConfigPairs load_config_file(const std::filesystem::path& path) {
  ConfigPairs pairs = parse_config_text(read_text_file(path));
  auto base = std::filesystem::absolute(path).parent_path();
  for (auto& [k, v] : pairs)
    if (is_path_key(k) && !v.empty() && std::filesystem::path(v).is_relative())
      v = (base / v).lexically_normal().string();
  return pairs;
}

// Reals with 17 significant digits, so that parsing the echo restores the value.
inline std::string exact_decimal(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace detail {

inline double parse_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out))
    throw ParseError("config: '" + key + "' expects a real, got '" + v + "'");
  return out;
}

inline std::uint64_t parse_u64(const std::string& key, const std::string& v) {
  std::uint64_t out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size())
    throw ParseError("config: '" + key + "' expects a non-negative integer, got '" + v + "'");
  return out;
}

inline std::vector<double> parse_reals(const std::string& key, std::string v) {
  for (char& ch : v)
    if (ch == ',') ch = ' ';
  std::istringstream in(v);
  std::vector<double> out;
  std::string tok;
  while (in >> tok) out.push_back(parse_double(key, tok));
  return out;
}

inline Eigen::MatrixXd read_real_matrix(const std::string& path) {
  std::istringstream in(read_text_file(path));
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    rows.push_back(parse_reals(path, line));
    if (rows.back().size() != rows.front().size()) throw ParseError(path + ": ragged rows");
  }
  if (rows.empty()) throw ParseError(path + ": empty matrix");
  Eigen::MatrixXd m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (std::size_t j = 0; j < rows[i].size(); ++j)
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  return m;
}

inline IntMatrix read_int_matrix_file(const std::string& path) {
  std::istringstream in(read_text_file(path));
  try {
    return read_int_matrix(in);
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

}  // namespace detail

enum class TvdMode { kExact, kMC, kBoth };

inline const char* mode_name(TvdMode m) {
  switch (m) {
    case TvdMode::kMC: return "mc";
    case TvdMode::kBoth: return "both";
    default: return "exact";
  }
}

struct ExperimentConfig {
  std::size_t n = 0;
  std::size_t m = 0;
  std::optional<double> s;
  std::string s_file;
  std::optional<double> r;   // absent: r_scale times the instance threshold
  std::string r_file;
  double r_scale = 1.0;
  std::vector<double> c;     // empty means 0
  double eps = 0.01;
  std::uint64_t seed = 1;
  std::size_t samples = 100000;
  double radius = 0.0;       // output-region radius in target units; 0 derives it from tail_budget
  double tail_budget = 1e-9;
  std::size_t search_memory = std::size_t{1} << 20;
  std::size_t trials = 1;
  std::string x_file;
  std::string b_file;
  std::string out_dir = "out";
  TvdMode mode = TvdMode::kExact;
  double level = 0.99;
  double min_pass_rate = 0.95;
  std::size_t threads = 0;   // 0: hardware concurrency

  // Loaded during validation.
  std::optional<IntMatrix> x;
  std::optional<IntMatrix> b;
  std::optional<Eigen::MatrixXd> s_matrix;
  std::optional<Eigen::MatrixXd> r_matrix;

  static ExperimentConfig from_pairs(const ConfigPairs& pairs) {
    ExperimentConfig cfg;
    for (const auto& [k, v] : pairs) cfg.set(k, v);
    cfg.validate();
    return cfg;
  }

  void set(const std::string& k, const std::string& v) {
    using detail::parse_double;
    using detail::parse_u64;
    if (k == "n") n = parse_u64(k, v);
    else if (k == "m") m = parse_u64(k, v);
    else if (k == "s") s = v.empty() ? std::nullopt : std::optional<double>(parse_double(k, v));
    else if (k == "s_file") s_file = v;
    else if (k == "r") r = v.empty() ? std::nullopt : std::optional<double>(parse_double(k, v));
    else if (k == "r_file") r_file = v;
    else if (k == "r_scale") r_scale = parse_double(k, v);
    else if (k == "c") c = detail::parse_reals(k, v);
    else if (k == "eps") eps = parse_double(k, v);
    else if (k == "seed") seed = parse_u64(k, v);
    else if (k == "samples") samples = parse_u64(k, v);
    else if (k == "radius") radius = parse_double(k, v);
    else if (k == "tail_budget") tail_budget = parse_double(k, v);
    else if (k == "search_memory") search_memory = parse_u64(k, v);
    else if (k == "trials") trials = parse_u64(k, v);
    else if (k == "x_file") x_file = v;
    else if (k == "b_file") b_file = v;
    else if (k == "out_dir") out_dir = v;
    else if (k == "mode") {
      if (v == "exact") mode = TvdMode::kExact;
      else if (v == "mc") mode = TvdMode::kMC;
      else if (v == "both") mode = TvdMode::kBoth;
      else throw ParseError("config: mode must be exact, mc or both");
    } else if (k == "level") level = parse_double(k, v);
    else if (k == "min_pass_rate") min_pass_rate = parse_double(k, v);
    else if (k == "threads") threads = parse_u64(k, v);
    else throw ParseError("config: unknown key '" + k + "'");
  }

  // Checks ranges and loads referenced files; runs before any computation.
  void validate() {
    auto need_file = [](const std::string& key, const std::string& path) {
      if (!path.empty() && !std::filesystem::is_regular_file(path))
        throw ParseError("config: " + key + " '" + path + "' does not exist");
    };
    need_file("x_file", x_file);
    need_file("s_file", s_file);
    need_file("r_file", r_file);
    need_file("b_file", b_file);
    if (!x_file.empty()) {
      x = detail::read_int_matrix_file(x_file);
      if (n != 0 && n != x->rows()) throw ParseError("config: n differs from rows of x_file");
      if (m != 0 && m != x->cols()) throw ParseError("config: m differs from columns of x_file");
      n = x->rows();
      m = x->cols();
    }
    if (n == 0) throw ParseError("config: n must be >= 1 (or give x_file)");
    if (m < n) throw ParseError("config: need m >= n");
    if (s && !(*s > 0.0)) throw ParseError("config: s must be > 0");
    if (s && !s_file.empty()) throw ParseError("config: give s or s_file, not both");
    if (!s_file.empty()) {
      s_matrix = detail::read_real_matrix(s_file);
      if (s_matrix->cols() != static_cast<Eigen::Index>(n) || s_matrix->rows() < s_matrix->cols())
        throw ParseError("config: s_file must have n columns and at least n rows");
    }
    if (!x && !s && !s_matrix) throw ParseError("config: need x_file, s or s_file to obtain X");
    if (r && !(*r > 0.0)) throw ParseError("config: r must be > 0");
    if (r && !r_file.empty()) throw ParseError("config: give r or r_file, not both");
    if (!r_file.empty()) {
      r_matrix = detail::read_real_matrix(r_file);
      if (r_matrix->cols() != static_cast<Eigen::Index>(m) || r_matrix->rows() < r_matrix->cols())
        throw ParseError("config: r_file must have m columns and at least m rows");
    }
    if (!(r_scale > 0.0)) throw ParseError("config: r_scale must be > 0");
    if (!c.empty() && c.size() != m) throw ParseError("config: c must have m entries");
    if (!(eps > 0.0 && eps < 1.0 / 3.0)) throw ParseError("config: eps must lie in (0, 1/3)");
    if (samples == 0) throw ParseError("config: samples must be >= 1");
    if (radius < 0.0) throw ParseError("config: radius must be >= 0");
    if (!(tail_budget > 0.0 && tail_budget < 0.5)) throw ParseError("config: tail_budget must lie in (0, 0.5)");
    if (search_memory == 0) throw ParseError("config: search_memory must be >= 1");
    if (trials == 0) throw ParseError("config: trials must be >= 1");
    if (!(level > 0.0 && level < 1.0)) throw ParseError("config: level must lie in (0, 1)");
    if (!(min_pass_rate >= 0.0 && min_pass_rate <= 1.0))
      throw ParseError("config: min_pass_rate must lie in [0, 1]");
    if (!b_file.empty()) {
      b = detail::read_int_matrix_file(b_file);
      if (b->rows() != n || b->cols() != n) throw ParseError("config: b_file must be n x n");
      if (rank(*b) != n) throw ParseError("config: B must be nonsingular");
    }
  }

  Eigen::VectorXd c_vector() const {
    Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(m));
    for (std::size_t i = 0; i < c.size(); ++i) out(static_cast<Eigen::Index>(i)) = c[i];
    return out;
  }

  // Canonical echo of every field; from_pairs(to_pairs()) rebuilds this config.
  ConfigPairs to_pairs() const {
    ConfigPairs p;
    p["n"] = std::to_string(n);
    p["m"] = std::to_string(m);
    p["s"] = s ? exact_decimal(*s) : "";
    p["s_file"] = s_file;
    p["r"] = r ? exact_decimal(*r) : "";
    p["r_file"] = r_file;
    p["r_scale"] = exact_decimal(r_scale);
    std::string cs;
    for (std::size_t i = 0; i < c.size(); ++i) cs += (i ? " " : "") + exact_decimal(c[i]);
    p["c"] = cs;
    p["eps"] = exact_decimal(eps);
    p["seed"] = std::to_string(seed);
    p["samples"] = std::to_string(samples);
    p["radius"] = exact_decimal(radius);
    p["tail_budget"] = exact_decimal(tail_budget);
    p["search_memory"] = std::to_string(search_memory);
    p["trials"] = std::to_string(trials);
    p["x_file"] = x_file;
    p["b_file"] = b_file;
    p["out_dir"] = out_dir;
    p["mode"] = mode_name(mode);
    p["level"] = exact_decimal(level);
    p["min_pass_rate"] = exact_decimal(min_pass_rate);
    p["threads"] = std::to_string(threads);
    return p;
  }
};

}  // namespace dgsum

#endif  // DGSUM_EXPERIMENT_CONFIG_HPP_
