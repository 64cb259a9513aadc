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

#ifndef QF_GENSTREAMS_HPP_
#define QF_GENSTREAMS_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "qf/rng.hpp"

namespace qf {

enum class DistKind : uint8_t { Uniform01, SignedLogUniform, Hard };

DistKind parse_dist(const std::string& name);

struct StreamSpec {
  DistKind kind = DistKind::Hard;
  double e_max = 0.0;  // <= 0 means default_e_max(n)
  uint64_t seed = 0;
  uint64_t n = 0;
  bool sorted = false;
};

/// (-1)^b * 10^{(2 R^2 - 1) E_max} -- the hard (signed log-uniform squared)
/// distribution evaluated at explicit (b, R).
double hard_value(bool b, double r, double e_max);

/// (-1)^b * 10^{(2 R - 1) E_max}.
double log_uniform_value(bool b, double r, double e_max);

double sample_hard(Rng& rng, double e_max);
double sample_signed_log_uniform(Rng& rng, double e_max);

/// log10(largest finite double / n), so centroid averaging cannot overflow.
double default_e_max(uint64_t n);

/// n i.i.d. samples, reproducible from the seed.
std::vector<double> gen_stream(const StreamSpec& spec);

/// Dumps values as little-endian f64, the replayable binary stream format.
void write_stream_f64(const std::string& path, const std::vector<double>& xs);
std::vector<double> read_stream_f64(const std::string& path);

}  // namespace qf

#endif  // QF_GENSTREAMS_HPP_
