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

#ifndef QF_STREAM_HPP_
#define QF_STREAM_HPP_

#include <cstdint>
#include <span>
#include <vector>

namespace qf {

/// A rank estimate together with the stream length it refers to.
struct RankEstimate {
  double rank = 0.0;
  uint64_t n = 0;
};

/// Throws std::invalid_argument on NaN or +-infinity.
void check_finite(double x);

/// Number of elements of `sorted` strictly less than y. `sorted` must be
/// ascending; duplicates are allowed and counted with the strict inequality.
uint64_t exact_rank(std::span<const double> sorted, double y);

/// Signed quantile error q - rank/n. Throws std::invalid_argument if n == 0.
double quantile_error(double q, const RankEstimate& est);

/// Signed error divided by (1 - q). Throws std::invalid_argument at q == 1.
double relative_error(double q, double signed_err);

/// {i / (m+1) : i = 1..m}, strictly inside (0, 1). m == 0 gives an empty list.
std::vector<double> evenly_spaced_ranks(size_t m);

}  // namespace qf

#endif  // QF_STREAM_HPP_
