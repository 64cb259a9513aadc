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

#include "qf/tdigest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "byte_io.hpp"

namespace qf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr uint8_t kVersion = 1;
constexpr char kMagic[4] = {'T', 'D', 'I', 'G'};
}  // namespace

TDigest::TDigest(double delta, ScaleFunction scale, TDigestVariant variant,
                 uint64_t seed)
    : delta_(delta),
      scale_(scale),
      variant_(variant),
      rng_(seed),
      min_(kInf),
      max_(-kInf) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("delta must be positive");
  }
}

size_t TDigest::buffer_capacity() const {
  return std::max<size_t>(static_cast<size_t>(5.0 * delta_), 8);
}

void TDigest::insert(double x) {
  check_finite(x);
  min_ = std::min(min_, x);
  max_ = std::max(max_, x);
  ++total_;
  cdf_dirty_ = true;
  if (variant_ == TDigestVariant::Merging) {
    buffer_.push_back(x);
    if (buffer_.size() >= buffer_capacity()) {
      merge_pass(delta_);
    }
  } else {
    clustering_add(x);
  }
}

void TDigest::flush() {
  if (variant_ == TDigestVariant::Merging) {
    if (!buffer_.empty()) merge_pass(delta_);
  } else {
    // Clustering compaction is allowed to overshoot the merging budget, so it
    // runs with half the nominal delta and ends with at most delta centroids.
    if (!centroids_.empty()) merge_pass(delta_ / 2.0);
  }
}

void TDigest::merge_pass(double delta_eff) {
  std::vector<Centroid> all = std::move(centroids_);
  all.reserve(all.size() + buffer_.size());
  for (double x : buffer_) all.push_back({x, 1});
  buffer_.clear();
  centroids_.clear();
  cdf_dirty_ = true;
  if (all.empty()) return;

  std::stable_sort(all.begin(), all.end(),
                   [](const Centroid& a, const Centroid& b) {
                     return a.mean < b.mean;
                   });

  uint64_t n = 0;
  for (const Centroid& c : all) n += c.weight;
  const double dn = static_cast<double>(n);

  const double budget = 1.0 / delta_eff;
  Centroid cur = all[0];
  uint64_t w_done = 0;
  double q_limit =
      scale_.inverse(scale_.eval(0.0, n, delta_) + budget, n, delta_);

  for (size_t i = 1; i < all.size(); ++i) {
    const Centroid& next = all[i];
    const double proposed =
        static_cast<double>(w_done + cur.weight + next.weight) / dn;
    if (proposed <= q_limit) {
      cur.mean += static_cast<double>(next.weight) * (next.mean - cur.mean) /
                  static_cast<double>(cur.weight + next.weight);
      cur.weight += next.weight;
    } else {
      centroids_.push_back(cur);
      w_done += cur.weight;
      q_limit = scale_.inverse(
          scale_.eval(static_cast<double>(w_done) / dn, n, delta_) + budget, n,
          delta_);
      cur = next;
    }
  }
  centroids_.push_back(cur);
}

void TDigest::clustering_add(double x) {
  if (centroids_.empty()) {
    centroids_.push_back({x, 1});
    return;
  }

  auto it = std::lower_bound(
      centroids_.begin(), centroids_.end(), x,
      [](const Centroid& c, double v) { return c.mean < v; });
  size_t hi = static_cast<size_t>(it - centroids_.begin());

  // nearest centroids: scan outwards from the insertion point
  double dmin = kInf;
  if (hi < centroids_.size()) dmin = std::abs(centroids_[hi].mean - x);
  if (hi > 0) dmin = std::min(dmin, std::abs(centroids_[hi - 1].mean - x));
  size_t lo_idx = hi, hi_idx = hi;
  while (lo_idx > 0 && std::abs(centroids_[lo_idx - 1].mean - x) == dmin) {
    --lo_idx;
  }
  while (hi_idx < centroids_.size() &&
         std::abs(centroids_[hi_idx].mean - x) == dmin) {
    ++hi_idx;
  }

  // among the nearest, keep those with room for x under the weight limit
  uint64_t w_left = 0;
  for (size_t i = 0; i < lo_idx; ++i) w_left += centroids_[i].weight;
  std::vector<size_t> roomy;
  uint64_t wl = w_left;
  for (size_t i = lo_idx; i < hi_idx; ++i) {
    if (weight_limit_ok(scale_, delta_, total_, wl,
                        centroids_[i].weight + 1)) {
      roomy.push_back(i);
    }
    wl += centroids_[i].weight;
  }

  if (!roomy.empty()) {
    size_t i = roomy.size() == 1 ? roomy[0] : roomy[rng_.below(roomy.size())];
    Centroid& c = centroids_[i];
    c.mean += (x - c.mean) / static_cast<double>(c.weight + 1);
    c.weight += 1;
    // the mean moved; restore weak ordering locally
    while (i > 0 && centroids_[i].mean < centroids_[i - 1].mean) {
      std::swap(centroids_[i], centroids_[i - 1]);
      --i;
    }
    while (i + 1 < centroids_.size() &&
           centroids_[i].mean > centroids_[i + 1].mean) {
      std::swap(centroids_[i], centroids_[i + 1]);
      ++i;
    }
  } else {
    centroids_.insert(centroids_.begin() + hi, {x, 1});
    if (centroids_.size() > static_cast<size_t>(2.0 * delta_)) {
      merge_pass(delta_ / 2.0);
    }
  }
}

void TDigest::build_cdf() {
  if (!cdf_dirty_) return;
  knot_x_.clear();
  knot_r_.clear();
  knot_x_.push_back(min_);
  knot_r_.push_back(0.0);
  uint64_t cum = 0;
  for (const Centroid& c : centroids_) {
    if (c.weight == 1) {
      knot_x_.push_back(c.mean);
      knot_r_.push_back(static_cast<double>(cum));
      knot_x_.push_back(c.mean);
      knot_r_.push_back(static_cast<double>(cum + 1));
    } else {
      knot_x_.push_back(c.mean);
      knot_r_.push_back(static_cast<double>(cum) +
                        static_cast<double>(c.weight) / 2.0);
    }
    cum += c.weight;
  }
  knot_x_.push_back(max_);
  knot_r_.push_back(static_cast<double>(total_));
  cdf_dirty_ = false;
}

RankEstimate TDigest::rank(double y) {
  if (variant_ == TDigestVariant::Merging && !buffer_.empty()) {
    merge_pass(delta_);
  }
  if (total_ == 0) {
    throw std::runtime_error("rank query on empty digest");
  }
  build_cdf();
  if (y <= knot_x_.front()) return {0.0, total_};
  if (y > max_) return {static_cast<double>(total_), total_};

  size_t j = static_cast<size_t>(
      std::lower_bound(knot_x_.begin(), knot_x_.end(), y) - knot_x_.begin());
  if (knot_x_[j] == y) {
    while (j > 0 && knot_x_[j - 1] == y) --j;
    return {knot_r_[j], total_};
  }
  const double t = (y - knot_x_[j - 1]) / (knot_x_[j] - knot_x_[j - 1]);
  return {knot_r_[j - 1] + t * (knot_r_[j] - knot_r_[j - 1]), total_};
}

double TDigest::quantile(double q) {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile argument outside [0, 1]");
  }
  if (variant_ == TDigestVariant::Merging && !buffer_.empty()) {
    merge_pass(delta_);
  }
  if (total_ == 0) {
    throw std::runtime_error("quantile query on empty digest");
  }
  build_cdf();
  const double target = q * static_cast<double>(total_);
  if (target <= 0.0) return min_;
  if (target >= static_cast<double>(total_)) return max_;

  size_t j = static_cast<size_t>(
      std::lower_bound(knot_r_.begin(), knot_r_.end(), target) -
      knot_r_.begin());
  if (j == 0) return knot_x_.front();
  if (knot_r_[j] == knot_r_[j - 1]) return knot_x_[j];
  const double t = (target - knot_r_[j - 1]) / (knot_r_[j] - knot_r_[j - 1]);
  return knot_x_[j - 1] + t * (knot_x_[j] - knot_x_[j - 1]);
}

std::vector<CentroidView> TDigest::introspect() {
  if (variant_ == TDigestVariant::Merging && !buffer_.empty()) {
    merge_pass(delta_);
  }
  std::vector<CentroidView> out;
  out.reserve(centroids_.size());
  uint64_t cum = 0;
  for (const Centroid& c : centroids_) {
    out.push_back({c.mean, c.weight, cum});
    cum += c.weight;
  }
  return out;
}

TDigest TDigest::merged(TDigest a, TDigest b) {
  if (!(a.scale_ == b.scale_) || a.delta_ != b.delta_) {
    throw std::invalid_argument("digest_merge: mismatched scale or delta");
  }
  a.flush();
  b.flush();
  TDigest out = std::move(a);
  out.centroids_.insert(out.centroids_.end(), b.centroids_.begin(),
                        b.centroids_.end());
  out.total_ += b.total_;
  out.min_ = std::min(out.min_, b.min_);
  out.max_ = std::max(out.max_, b.max_);
  out.merge_pass(out.variant_ == TDigestVariant::Merging ? out.delta_
                                                         : out.delta_ / 2.0);
  return out;
}

std::vector<uint8_t> TDigest::serialize() {
  flush();
  std::vector<uint8_t> out;
  out.reserve(kHeaderBytes + kCentroidBytes * centroids_.size());
  detail::put_magic(out, kMagic);
  detail::put<uint8_t>(out, kVersion);
  detail::put<uint8_t>(out, static_cast<uint8_t>(variant_));
  detail::put<uint8_t>(out, static_cast<uint8_t>(scale_.kind()));
  detail::put<double>(out, scale_.alpha());
  detail::put<double>(out, delta_);
  detail::put<uint64_t>(out, total_);
  detail::put<uint32_t>(out, static_cast<uint32_t>(centroids_.size()));
  detail::put<double>(out, min_);
  detail::put<double>(out, max_);
  for (const Centroid& c : centroids_) {
    detail::put<double>(out, c.mean);
    detail::put<uint64_t>(out, c.weight);
  }
  return out;
}

TDigest TDigest::deserialize(const std::vector<uint8_t>& bytes) {
  detail::ByteReader r(bytes.data(), bytes.size());
  r.expect_magic(kMagic);
  if (r.get<uint8_t>() != kVersion) {
    throw std::runtime_error("unsupported t-digest version");
  }
  const auto variant = static_cast<TDigestVariant>(r.get<uint8_t>());
  const auto kind = static_cast<ScaleKind>(r.get<uint8_t>());
  const double alpha = r.get<double>();
  const double delta = r.get<double>();
  const uint64_t total = r.get<uint64_t>();
  const uint32_t count = r.get<uint32_t>();
  const double mn = r.get<double>();
  const double mx = r.get<double>();

  ScaleFunction scale = std::isnan(alpha)
                            ? ScaleFunction::parse("k" + std::to_string(
                                                             static_cast<int>(
                                                                 kind)))
                            : ScaleFunction::asymmetric(kind, alpha);
  TDigest d(delta, scale, variant);
  d.total_ = total;
  d.min_ = mn;
  d.max_ = mx;
  uint64_t wsum = 0;
  d.centroids_.reserve(count);
  for (uint32_t i = 0; i < count; ++i) {
    const double mean = r.get<double>();
    const uint64_t w = r.get<uint64_t>();
    wsum += w;
    d.centroids_.push_back({mean, w});
  }
  if (!r.done() || wsum != total) {
    throw std::runtime_error("corrupt serialized t-digest");
  }
  return d;
}

size_t TDigest::serialized_size() {
  flush();
  return kHeaderBytes + kCentroidBytes * centroids_.size();
}

}  // namespace qf
