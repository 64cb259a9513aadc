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

#ifndef QF_EXPERIMENTS_HPP_
#define QF_EXPERIMENTS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "qf/adversary.hpp"
#include "qf/genstreams.hpp"
#include "qf/req_sketch.hpp"
#include "qf/tdigest.hpp"

namespace qf {

/// Flat key=value configuration, loadable from a file with per-key overrides.
struct ExperimentConfig {
  double delta = 500.0;
  std::string scale = "k2_asym";
  double alpha = 0.01;
  uint32_t req_k = 4;
  uint32_t kll_k = 100;
  uint64_t n = uint64_t{1} << 20;
  uint32_t trials = 1 << 12;
  uint64_t seed = 42;
  double e_max = 0.0;  // <= 0: default_e_max(n)
  std::vector<double> emax_sweep = {5, 10, 50, 150, 300};
  std::string dist = "hard";
  uint32_t grid = 200;
  std::string out_dir = ".";
  std::string laziness = "partial";
  uint64_t attack_iterations = 400;
  uint32_t attack_req_seeds = 64;
  uint32_t threads = 0;  // 0: hardware concurrency

  static ExperimentConfig load(const std::string& path);
  /// Applies one "key=value" override. Throws naming the key when unknown.
  void set(const std::string& key, const std::string& value);

  ScaleFunction scale_function() const;
  ReqSketch::Laziness laziness_mode() const;
  double effective_e_max() const;
};

/// Per-rank aggregates over trials: t-digest medians, ReqSketch mean +- 2 SD.
struct ErrorReport {
  std::vector<double> q;
  std::vector<double> td_merge_med;
  std::vector<double> td_cluster_med;
  std::vector<double> req_mean;
  std::vector<double> req_lo;
  std::vector<double> req_hi;
};

struct SweepRow {
  double e_max;
  double tdm_avg_rel;
  double tdc_avg_rel;
  double req_med_avg_rel;
  double req_p2sd_avg_rel;
};
using SweepReport = std::vector<SweepRow>;

struct SpeedRow {
  std::string structure;
  std::string param;
  uint64_t n;
  double ns_per_update;
};
using SpeedReport = std::vector<SpeedRow>;

struct SizeReport {
  size_t bytes_td_merge;
  size_t bytes_td_cluster;
  size_t bytes_req;
};

/// T independent trials over one shared stream per trial; signed quantile
/// errors at the grid ranks against the exact oracle, aggregated per rank.
ErrorReport run_iid(const ExperimentConfig& config);

/// Average relative error per E_max sweep point.
SweepReport run_emax_sweep(const ExperimentConfig& config);

struct AttackCmdResult {
  AttackReport merging;
  AttackReport clustering;
  ErrorReport curves;  // error curves of both variants plus ReqSketch replay
  std::vector<double> req_median;  // per-rank median over the replay seeds
  std::vector<double> stream;      // merging-variant attack stream
};
AttackCmdResult run_attack_cmd(const ExperimentConfig& config);

/// Amortized update times: full-ingest wall clock / n, min of >= 3 reps.
SpeedReport run_speed(const ExperimentConfig& config);

/// Serialized sizes of the three sketches on one uniform stream.
SizeReport size_report(double delta, const ScaleFunction& scale,
                       uint32_t req_k, uint64_t n, uint64_t seed = 42);

void write_error_report_csv(const std::string& path, const ErrorReport& r);
void write_sweep_report_csv(const std::string& path, const SweepReport& r);
void write_speed_report_csv(const std::string& path, const SpeedReport& r);

// small stats helpers shared with the tests
double median(std::vector<double> xs);
double mean(const std::vector<double>& xs);
double stddev(const std::vector<double>& xs);  // sample SD

}  // namespace qf

#endif  // QF_EXPERIMENTS_HPP_
