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

#ifndef QF_KLL_SKETCH_HPP_
#define QF_KLL_SKETCH_HPP_

#include <cstdint>
#include <vector>

#include "qf/rng.hpp"
#include "qf/stream.hpp"

namespace qf {

/// Uniform-error compactor sketch used as a timing baseline. Fixed,
/// geometrically decaying level capacities; compactions always take the
/// whole buffer.
class KllSketch {
 public:
  explicit KllSketch(uint32_t k = 100, uint64_t seed = 0);

  void update(double x);
  RankEstimate rank(double y) const;

  uint64_t count() const { return total_; }
  uint64_t stored_weight() const;
  size_t level_count() const { return levels_.size(); }

 private:
  size_t capacity(size_t h) const;
  size_t total_capacity() const;
  void compact_lowest_full();

  uint32_t k_;
  Rng rng_;
  std::vector<std::vector<double>> levels_;
  uint64_t total_ = 0;
};

}  // namespace qf

#endif  // QF_KLL_SKETCH_HPP_
