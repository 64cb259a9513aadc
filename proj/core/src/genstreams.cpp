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

#include "qf/genstreams.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace qf {

DistKind parse_dist(const std::string& name) {
  if (name == "uniform01") return DistKind::Uniform01;
  if (name == "signed_log_uniform") return DistKind::SignedLogUniform;
  if (name == "hard") return DistKind::Hard;
  throw std::invalid_argument("unknown distribution: " + name);
}

double hard_value(bool b, double r, double e_max) {
  const double sign = b ? -1.0 : 1.0;
  return sign * std::pow(10.0, (2.0 * r * r - 1.0) * e_max);
}

double log_uniform_value(bool b, double r, double e_max) {
  const double sign = b ? -1.0 : 1.0;
  return sign * std::pow(10.0, (2.0 * r - 1.0) * e_max);
}

double sample_hard(Rng& rng, double e_max) {
  const bool b = rng.bit();
  const double r = rng.uniform01();
  return hard_value(b, r, e_max);
}

double sample_signed_log_uniform(Rng& rng, double e_max) {
  const bool b = rng.bit();
  const double r = rng.uniform01();
  return log_uniform_value(b, r, e_max);
}

double default_e_max(uint64_t n) {
  return std::log10(std::numeric_limits<double>::max() /
                    static_cast<double>(n));
}

std::vector<double> gen_stream(const StreamSpec& spec) {
  const double e_max =
      spec.e_max > 0.0 ? spec.e_max : default_e_max(std::max<uint64_t>(spec.n, 1));
  Rng rng(spec.seed);
  std::vector<double> out;
  out.reserve(spec.n);
  for (uint64_t i = 0; i < spec.n; ++i) {
    switch (spec.kind) {
      case DistKind::Uniform01:
        out.push_back(rng.uniform01());
        break;
      case DistKind::SignedLogUniform:
        out.push_back(sample_signed_log_uniform(rng, e_max));
        break;
      case DistKind::Hard:
        out.push_back(sample_hard(rng, e_max));
        break;
    }
  }
  if (spec.sorted) std::sort(out.begin(), out.end());
  return out;
}

void write_stream_f64(const std::string& path, const std::vector<double>& xs) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  f.write(reinterpret_cast<const char*>(xs.data()),
          static_cast<std::streamsize>(xs.size() * sizeof(double)));
}

std::vector<double> read_stream_f64(const std::string& path) {
  std::ifstream f(path, std::ios::binary | std::ios::ate);
  if (!f) throw std::runtime_error("cannot open for reading: " + path);
  const auto bytes = static_cast<size_t>(f.tellg());
  if (bytes % sizeof(double) != 0) {
    throw std::runtime_error("stream file size is not a multiple of 8");
  }
  std::vector<double> out(bytes / sizeof(double));
  f.seekg(0);
  f.read(reinterpret_cast<char*>(out.data()),
         static_cast<std::streamsize>(bytes));
  return out;
}

}  // namespace qf
