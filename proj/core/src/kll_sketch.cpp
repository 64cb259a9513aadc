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

#include "qf/kll_sketch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace qf {

namespace {
constexpr double kDecay = 2.0 / 3.0;
}

KllSketch::KllSketch(uint32_t k, uint64_t seed) : k_(k), rng_(seed) {
  if (k < 2) throw std::invalid_argument("kll k must be >= 2");
  levels_.emplace_back();
}

size_t KllSketch::capacity(size_t h) const {
  const double c = static_cast<double>(k_) *
                   std::pow(kDecay, static_cast<double>(levels_.size() - h - 1));
  return std::max<size_t>(2, static_cast<size_t>(std::ceil(c)));
}

size_t KllSketch::total_capacity() const {
  size_t cap = 0;
  for (size_t h = 0; h < levels_.size(); ++h) cap += capacity(h);
  return cap;
}

uint64_t KllSketch::stored_weight() const {
  uint64_t w = 0;
  for (size_t h = 0; h < levels_.size(); ++h) {
    w += (uint64_t{1} << h) * levels_[h].size();
  }
  return w;
}

void KllSketch::update(double x) {
  check_finite(x);
  levels_[0].push_back(x);
  ++total_;
  size_t items = 0;
  for (const auto& l : levels_) items += l.size();
  while (items >= total_capacity()) {
    compact_lowest_full();
    items = 0;
    for (const auto& l : levels_) items += l.size();
  }
}

void KllSketch::compact_lowest_full() {
  size_t h = 0;
  for (; h < levels_.size(); ++h) {
    if (levels_[h].size() >= capacity(h)) break;
  }
  if (h == levels_.size()) h = 0;
  if (h + 1 == levels_.size()) levels_.emplace_back();

  std::vector<double>& buf = levels_[h];
  if (buf.size() < 2) return;
  std::stable_sort(buf.begin(), buf.end());
  const size_t even = buf.size() - buf.size() % 2;
  const bool coin = rng_.bit();
  for (size_t i = coin ? 1 : 0; i < even; i += 2) {
    levels_[h + 1].push_back(buf[i]);
  }
  // odd leftover stays at this level
  if (even < buf.size()) {
    buf[0] = buf.back();
    buf.resize(1);
  } else {
    buf.clear();
  }
}

RankEstimate KllSketch::rank(double y) const {
  uint64_t r = 0;
  for (size_t h = 0; h < levels_.size(); ++h) {
    const uint64_t w = uint64_t{1} << h;
    for (double x : levels_[h]) {
      if (x < y) r += w;
    }
  }
  return {static_cast<double>(r), total_};
}

}  // namespace qf
