/*
 * Licensed to the Apache Software Foundation (ASF) under one
 * or more contributor license agreements.  See the NOTICE file
 * distributed with this work for additional information
 * regarding copyright ownership.  The ASF licenses this file
 * to you under the Apache License, Version 2.0 (the
 * "License"); you may not use this file except in compliance
 * with the License.  You may obtain a copy of the License at
 *
 *   http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing,
 * software distributed under the License is distributed on an
 * "AS IS" BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
 * KIND, either express or implied.  See the License for the
 * specific language governing permissions and limitations
 * under the License.
 */

#include <cstdio>
#include <filesystem>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qf/experiments.hpp"

namespace {

qf::ExperimentConfig make_config(const std::string& config_path,
                                 const std::vector<std::string>& overrides,
                                 const std::string& out_dir) {
  qf::ExperimentConfig cfg;
  if (!config_path.empty()) cfg = qf::ExperimentConfig::load(config_path);
  for (const std::string& kv : overrides) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("--set expects key=value, got: " + kv);
    }
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (!out_dir.empty()) cfg.out_dir = out_dir;
  std::filesystem::create_directories(cfg.out_dir);
  return cfg;
}

std::string join(const std::string& dir, const std::string& file) {
  return (std::filesystem::path(dir) / file).string();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantile-sketch experiment runner"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::vector<std::string> overrides;
  for (auto* sub : {app.add_subcommand("attack", "adversarial stream attack"),
                    app.add_subcommand("iid", "i.i.d. error curves"),
                    app.add_subcommand("emax-sweep", "error vs. exponent range"),
                    app.add_subcommand("speed", "update-time benchmark")}) {
    sub->add_option("--config", config_path, "key=value config file");
    sub->add_option("--set", overrides, "override one config key")
        ->take_all();
    sub->add_option("--out", out_dir, "output directory");
  }

  CLI11_PARSE(app, argc, argv);

  try {
    const qf::ExperimentConfig cfg =
        make_config(config_path, overrides, out_dir);

    if (app.got_subcommand("iid")) {
      const qf::ErrorReport report = qf::run_iid(cfg);
      const std::string path = join(cfg.out_dir, "iid.csv");
      qf::write_error_report_csv(path, report);
      std::printf("wrote %s\n", path.c_str());
    } else if (app.got_subcommand("emax-sweep")) {
      const qf::SweepReport report = qf::run_emax_sweep(cfg);
      const std::string path = join(cfg.out_dir, "emax_sweep.csv");
      qf::write_sweep_report_csv(path, report);
      std::printf("wrote %s\n", path.c_str());
    } else if (app.got_subcommand("speed")) {
      const qf::SpeedReport report = qf::run_speed(cfg);
      const std::string path = join(cfg.out_dir, "speed.csv");
      qf::write_speed_report_csv(path, report);
      std::printf("wrote %s\n", path.c_str());
    } else if (app.got_subcommand("attack")) {
      const qf::AttackCmdResult result = qf::run_attack_cmd(cfg);
      const std::string merging = join(cfg.out_dir, "attack_merging.csv");
      const std::string clustering = join(cfg.out_dir, "attack_clustering.csv");
      const std::string curves = join(cfg.out_dir, "attack_curves.csv");
      const std::string stream = join(cfg.out_dir, "attack_stream.f64");
      qf::write_attack_report_csv(merging, result.merging);
      qf::write_attack_report_csv(clustering, result.clustering);
      qf::write_error_report_csv(curves, result.curves);
      qf::write_stream_f64(stream, result.stream);
      std::printf("wrote %s\nwrote %s\nwrote %s\nwrote %s\n", merging.c_str(),
                  clustering.c_str(), curves.c_str(), stream.c_str());
    }
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
