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

// dgsum command-line front end: sample | quality | kernel | tvd | main.

#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgsum/experiments.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Discrete Gaussian sum experiments"};
  app.set_version_flag("--version", std::string(dgsum::kToolName) + " " + dgsum::kToolVersion);
  app.require_subcommand(0, 1);

  std::string config_path, manifest_path, out_dir, seed, eps, samples, radius, trials;
  bool exact = false, mc = false;
  std::vector<std::string> sets;
  app.add_option("--config", config_path, "key = value config file")->check(CLI::ExistingFile);
  app.add_option("--manifest", manifest_path, "replay the run recorded in a manifest.json")
      ->check(CLI::ExistingFile);
  app.add_option("--seed", seed, "64-bit seed");
  app.add_option("--eps", eps, "target epsilon");
  app.add_option("--samples", samples, "Monte Carlo sample count");
  app.add_option("--radius", radius, "output-region radius (target units; 0 = from tail budget)");
  app.add_option("--out-dir", out_dir, "directory for reports and manifest");
  app.add_option("--trials", trials, "trials for the main experiment");
  app.add_flag("--exact", exact, "exact TVD by fiber enumeration");
  app.add_flag("--mc", mc, "Monte Carlo TVD");
  app.add_option("--set", sets, "extra config entry key=value (repeatable)");

  const char* names[][2] = {{"sample", "draw X v samples to CSV"},
                            {"quality", "certify the quality of X"},
                            {"kernel", "kernel basis and reduced lengths"},
                            {"tvd", "distance between X v and its Gaussian target"},
                            {"main", "end-to-end trials over random X"}};
  for (auto& [name, desc] : names) app.add_subcommand(name, desc)->fallthrough();

  CLI11_PARSE(app, argc, argv);

  std::string command;
  if (!app.get_subcommands().empty()) command = app.get_subcommands().front()->get_name();
  try {
    dgsum::ConfigPairs pairs;
    if (!manifest_path.empty()) {
      auto [cmd, recorded] = dgsum::load_manifest(manifest_path);
      if (!command.empty() && command != cmd)
        throw dgsum::ParseError("manifest records command '" + cmd + "', not '" + command + "'");
      command = cmd;
      pairs = recorded;
      if (!config_path.empty()) throw dgsum::ParseError("--config and --manifest are exclusive");
    } else if (!config_path.empty()) {
      pairs = dgsum::load_config_file(config_path);
    }
    if (command.empty()) throw dgsum::ParseError("no subcommand given (sample|quality|kernel|tvd|main)");
    for (const auto& s : sets) {
      auto eq = s.find('=');
      if (eq == std::string::npos) throw dgsum::ParseError("--set expects key=value, got '" + s + "'");
      pairs[dgsum::trim(s.substr(0, eq))] = dgsum::trim(s.substr(eq + 1));
    }
    auto put = [&](const char* key, const std::string& v) {
      if (!v.empty()) pairs[key] = v;
    };
    put("seed", seed);
    put("eps", eps);
    put("samples", samples);
    put("radius", radius);
    put("out_dir", out_dir);
    put("trials", trials);
    if (exact || mc) pairs["mode"] = exact && mc ? "both" : (exact ? "exact" : "mc");
    dgsum::ExperimentConfig cfg = dgsum::ExperimentConfig::from_pairs(pairs);
    return dgsum::run_command(command, cfg, std::cout);
  } catch (const std::exception& e) {
    std::cerr << "dgsum: " << e.what() << "\n";
    return dgsum::kExitError;
  }
}
