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

#ifndef QF_REQ_SKETCH_HPP_
#define QF_REQ_SKETCH_HPP_

#include <cstdint>
#include <vector>

#include "qf/rng.hpp"
#include "qf/stream.hpp"

namespace qf {

/// Relative-error compactor sketch. Items at level h carry weight 2^h. Each
/// compaction sorts the level buffer and removes an even-size region from the
/// inaccurate end (a prefix of the smallest items in the high-rank-accurate
/// orientation), promoting the odd- or even-indexed half one level up. The
/// region size follows a derandomized geometric schedule: on the j-th
/// compaction the number of sections compacted is 1 + trailing-ones(C_h),
/// clamped to half the section count. Level capacities grow with the
/// compaction count C_h.
class ReqSketch {
 public:
  enum class Orientation : uint8_t { HighRankAccurate = 0, LowRankAccurate = 1 };
  enum class Laziness : uint8_t { Partial = 0, Full = 1 };

  explicit ReqSketch(uint32_t k = 4,
                     Orientation orientation = Orientation::HighRankAccurate,
                     Laziness laziness = Laziness::Partial, uint64_t seed = 0);

  /// Ingests one item. Throws std::invalid_argument on non-finite input.
  void update(double x);

  /// Weighted count of stored items strictly below y. Integer-valued.
  RankEstimate rank(double y) const;

  /// Smallest stored item whose cumulative weight reaches q * N.
  double quantile(double q) const;

  /// Merges a sketch with the same k and orientation.
  void merge(const ReqSketch& other);

  std::vector<uint8_t> serialize() const;
  static ReqSketch deserialize(const std::vector<uint8_t>& bytes);
  size_t serialized_size() const;

  uint64_t count() const { return total_; }
  uint32_t k() const { return k_; }
  Orientation orientation() const { return orientation_; }
  Laziness laziness() const { return laziness_; }
  size_t level_count() const { return levels_.size(); }

  /// Total weight of stored items, sum over levels of 2^h * |buffer_h|.
  uint64_t stored_weight() const;
  size_t stored_items() const;

  struct LevelView {
    uint8_t level;
    uint64_t compaction_count;
    size_t capacity;
    const std::vector<double>& items;
  };
  std::vector<LevelView> levels() const;

  static constexpr size_t kHeaderBytes = 20;
  static constexpr size_t kLevelHeaderBytes = 13;
  static constexpr uint32_t kNumSections = 4;

  /// Section size for accuracy parameter k after C compactions:
  /// 2 * ceil((k/2) * sqrt(log2(C + 2))).
  static size_t section_size(uint32_t k, uint64_t compactions);

 private:
  struct Compactor {
    std::vector<double> buf;
    uint64_t compactions = 0;  // C_h
    bool last_coin = false;
  };

  size_t capacity(size_t h) const;
  size_t total_capacity() const;
  void compact_level(size_t h);
  void ensure_level(size_t h);

  uint32_t k_;
  Orientation orientation_;
  Laziness laziness_;
  Rng rng_;
  std::vector<Compactor> levels_;
  uint64_t total_ = 0;
};

}  // namespace qf

#endif  // QF_REQ_SKETCH_HPP_
