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

#ifndef QF_TDIGEST_HPP_
#define QF_TDIGEST_HPP_

#include <cstdint>
#include <vector>

#include "qf/rng.hpp"
#include "qf/scale.hpp"
#include "qf/stream.hpp"

namespace qf {

struct Centroid {
  double mean = 0.0;
  uint64_t weight = 0;
};

/// Read-only centroid snapshot with the prefix weight to its left.
struct CentroidView {
  double mean;
  uint64_t weight;
  uint64_t weight_left;
};

enum class TDigestVariant : uint8_t { Merging = 0, Clustering = 1 };

/// t-digest over doubles. Centroids are weakly ordered by mean; the scale
/// function and compression parameter delta bound each centroid's weight by
/// the 1/delta budget in quantile space. Rank and quantile queries use a
/// piecewise-linear CDF with the half-weight convention, anchored at the
/// recorded min and max; singleton centroids are treated as exact points.
///
/// Single-owner: one mutating thread at a time; quiescent reads are safe.
class TDigest {
 public:
  TDigest(double delta, ScaleFunction scale, TDigestVariant variant,
          uint64_t seed = 0);

  /// Ingests one item. Throws std::invalid_argument on non-finite input.
  void insert(double x);

  /// Forces a merge pass (flushes the merging buffer; compacts the
  /// clustering variant down to at most delta centroids).
  void flush();

  /// Estimated rank of y. Flushes pending updates first.
  RankEstimate rank(double y);

  /// Inverse of rank: quantile(0) = recorded min, quantile(1) = recorded max.
  double quantile(double q);

  std::vector<CentroidView> introspect();

  /// Merges two digests with identical scale and delta; the result satisfies
  /// the weight constraint.
  static TDigest merged(TDigest a, TDigest b);

  std::vector<uint8_t> serialize();
  static TDigest deserialize(const std::vector<uint8_t>& bytes);
  size_t serialized_size();

  uint64_t count() const { return total_; }
  size_t centroid_count() const { return centroids_.size(); }
  double delta() const { return delta_; }
  const ScaleFunction& scale() const { return scale_; }
  TDigestVariant variant() const { return variant_; }
  double min() const { return min_; }
  double max() const { return max_; }

  static constexpr size_t kHeaderBytes = 51;
  static constexpr size_t kCentroidBytes = 16;

 private:
  void clustering_add(double x);
  void merge_pass(double delta_eff);
  void build_cdf();
  size_t buffer_capacity() const;

  double delta_;
  ScaleFunction scale_;
  TDigestVariant variant_;
  Rng rng_;

  std::vector<Centroid> centroids_;
  std::vector<double> buffer_;  // merging variant only
  uint64_t total_ = 0;          // ingested items (centroid weight + buffer)
  double min_ = 0.0;
  double max_ = 0.0;

  // cached piecewise-linear CDF knots, rebuilt after mutation
  std::vector<double> knot_x_;
  std::vector<double> knot_r_;
  bool cdf_dirty_ = true;
};

}  // namespace qf

#endif  // QF_TDIGEST_HPP_
