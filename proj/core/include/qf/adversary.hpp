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

#ifndef QF_ADVERSARY_HPP_
#define QF_ADVERSARY_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "qf/tdigest.hpp"

namespace qf {

struct AttackIteration {
  uint64_t iteration;
  double interval_width;
  uint64_t filler_weight;    // v_i, added to the attacked centroid
  uint64_t lopsided_weight;  // w_{i+1}, size of the new lopsided set
  double max_abs_err;
};

struct AttackReport {
  std::vector<AttackIteration> iterations;
  std::vector<double> rank_grid;
  std::vector<double> error_curve;  // signed, one entry per grid rank
  uint64_t initial_weight_left = 0;      // l_1
  uint64_t initial_weight_right = 0;     // r_1
  uint64_t initial_attacked_weight = 0;  // w_1
  bool stopped_early = false;            // ran out of double precision
};

struct AttackResult {
  TDigest digest;
  AttackReport report;
  std::vector<double> stream;
};

/// Closed-form lower bound on the asymptotic quantile error achievable by the
/// nested lopsided construction. K0: (delta-2)/(delta-1). K3: exp(-1/delta).
/// K2: 1 / (exp(1/delta) * (exp(1/(2 delta)) + 1)). K1 has no closed form and
/// is rejected.
double asymptotic_error_lower_bound(ScaleKind kind, double delta);

/// Signed error curve: for each grid rank q, exact_rank(quantile(q))/n - q
/// measured against the exact oracle over the full logged stream.
std::vector<double> evaluate_attack(const std::vector<double>& stream_log,
                                    TDigest& digest,
                                    const std::vector<double>& rank_grid);

/// Runs the nested lopsided-insertion attack against a fresh digest. Each
/// iteration fills the attacked centroid (the largest one with mean below
/// zero) to its weight limit, then inserts a lopsided set inside the interval
/// between that centroid and the smallest positive stream value: one anchor
/// near the left end and equal items at a point near the right end, placed so
/// the new centroid's mean stays below zero and the interval keeps shrinking
/// toward zero. Stops early, with a report, once double precision runs out.
AttackResult run_attack(double delta, const ScaleFunction& scale,
                        TDigestVariant variant, uint64_t iterations,
                        uint64_t seed, size_t grid_size = 200);

/// CSV rows: iteration,interval_width,v_i,w_i,max_abs_err.
void write_attack_report_csv(const std::string& path,
                             const AttackReport& report);

}  // namespace qf

#endif  // QF_ADVERSARY_HPP_
