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

#include "qf/stream.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qf {

void check_finite(double x) {
  if (!std::isfinite(x)) {
    throw std::invalid_argument("stream value must be finite");
  }
}

uint64_t exact_rank(std::span<const double> sorted, double y) {
  return static_cast<uint64_t>(
      std::lower_bound(sorted.begin(), sorted.end(), y) - sorted.begin());
}

double quantile_error(double q, const RankEstimate& est) {
  if (est.n == 0) {
    throw std::invalid_argument("quantile_error: empty stream");
  }
  return q - est.rank / static_cast<double>(est.n);
}

double relative_error(double q, double signed_err) {
  if (q >= 1.0) {
    throw std::invalid_argument("relative_error: undefined at q = 1");
  }
  return signed_err / (1.0 - q);
}

std::vector<double> evenly_spaced_ranks(size_t m) {
  std::vector<double> out;
  out.reserve(m);
  for (size_t i = 1; i <= m; ++i) {
    out.push_back(static_cast<double>(i) / static_cast<double>(m + 1));
  }
  return out;
}

}  // namespace qf
