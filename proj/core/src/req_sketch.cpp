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

#include "qf/req_sketch.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <stdexcept>

#include "byte_io.hpp"

namespace qf {

namespace {
constexpr uint8_t kVersion = 1;
constexpr char kMagic[4] = {'R', 'E', 'Q', 'S'};
}  // namespace

ReqSketch::ReqSketch(uint32_t k, Orientation orientation, Laziness laziness,
                     uint64_t seed)
    : k_(k), orientation_(orientation), laziness_(laziness), rng_(seed) {
  if (k < 4 || k % 2 != 0) {
    throw std::invalid_argument("req k must be even and >= 4");
  }
  levels_.emplace_back();
}

size_t ReqSketch::section_size(uint32_t k, uint64_t compactions) {
  const double s = (k / 2.0) * std::sqrt(std::log2(
                                    static_cast<double>(compactions) + 2.0));
  return 2 * static_cast<size_t>(std::ceil(s));
}

size_t ReqSketch::capacity(size_t h) const {
  return 2 * kNumSections * section_size(k_, levels_[h].compactions);
}

size_t ReqSketch::total_capacity() const {
  size_t cap = 0;
  for (size_t h = 0; h < levels_.size(); ++h) cap += capacity(h);
  return cap;
}

size_t ReqSketch::stored_items() const {
  size_t n = 0;
  for (const Compactor& c : levels_) n += c.buf.size();
  return n;
}

uint64_t ReqSketch::stored_weight() const {
  uint64_t w = 0;
  for (size_t h = 0; h < levels_.size(); ++h) {
    w += (uint64_t{1} << h) * levels_[h].buf.size();
  }
  return w;
}

void ReqSketch::ensure_level(size_t h) {
  while (levels_.size() <= h) levels_.emplace_back();
}

void ReqSketch::update(double x) {
  check_finite(x);
  levels_[0].buf.push_back(x);
  ++total_;

  if (laziness_ == Laziness::Partial) {
    if (levels_[0].buf.size() > capacity(0)) {
      compact_level(0);
      // same sweep: compact every other over-capacity level
      for (size_t h = 1; h < levels_.size(); ++h) {
        if (levels_[h].buf.size() > capacity(h)) compact_level(h);
      }
    }
  } else {
    while (stored_items() > total_capacity()) {
      size_t target = 0;
      for (size_t h = 0; h < levels_.size(); ++h) {
        if (levels_[h].buf.size() > capacity(h)) {
          target = h;
          break;
        }
      }
      compact_level(target);
    }
  }
}

void ReqSketch::compact_level(size_t h) {
  ensure_level(h + 1);  // may reallocate levels_, so do it before binding
  Compactor& c = levels_[h];
  if (c.buf.size() < 4) return;
  std::stable_sort(c.buf.begin(), c.buf.end());

  const uint32_t max_secs = kNumSections / 2;
  uint32_t secs = 1 + static_cast<uint32_t>(std::countr_one(c.compactions));
  secs = std::min(secs, max_secs);
  size_t region = secs * section_size(k_, c.compactions);
  size_t half = c.buf.size() / 2;
  half -= half % 2;
  region = std::min(region, half);
  if (region < 2) region = 2;

  const bool coin =
      (c.compactions % 2 == 0) ? rng_.bit() : !c.last_coin;
  c.last_coin = coin;

  const size_t base =
      orientation_ == Orientation::HighRankAccurate ? 0
                                                    : c.buf.size() - region;
  std::vector<double>& up = levels_[h + 1].buf;
  for (size_t i = coin ? 1 : 0; i < region; i += 2) {
    up.push_back(c.buf[base + i]);
  }
  c.buf.erase(c.buf.begin() + base, c.buf.begin() + base + region);
  ++c.compactions;
}

RankEstimate ReqSketch::rank(double y) const {
  uint64_t r = 0;
  for (size_t h = 0; h < levels_.size(); ++h) {
    const uint64_t w = uint64_t{1} << h;
    for (double x : levels_[h].buf) {
      if (x < y) r += w;
    }
  }
  return {static_cast<double>(r), total_};
}

double ReqSketch::quantile(double q) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("quantile argument outside [0, 1]");
  }
  if (total_ == 0) {
    throw std::runtime_error("quantile query on empty sketch");
  }
  std::vector<std::pair<double, uint64_t>> items;
  items.reserve(stored_items());
  for (size_t h = 0; h < levels_.size(); ++h) {
    const uint64_t w = uint64_t{1} << h;
    for (double x : levels_[h].buf) items.emplace_back(x, w);
  }
  std::sort(items.begin(), items.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  const double target = q * static_cast<double>(total_);
  double cum = 0.0;
  for (const auto& [x, w] : items) {
    cum += static_cast<double>(w);
    if (cum >= target) return x;
  }
  return items.back().first;
}

void ReqSketch::merge(const ReqSketch& other) {
  if (k_ != other.k_ || orientation_ != other.orientation_) {
    throw std::invalid_argument("req_merge: mismatched k or orientation");
  }
  ensure_level(other.levels_.size() - 1);
  for (size_t h = 0; h < other.levels_.size(); ++h) {
    Compactor& c = levels_[h];
    const Compactor& o = other.levels_[h];
    c.buf.insert(c.buf.end(), o.buf.begin(), o.buf.end());
    c.compactions = std::max(c.compactions, o.compactions);
  }
  total_ += other.total_;
  for (size_t h = 0; h < levels_.size(); ++h) {
    while (levels_[h].buf.size() > capacity(h)) compact_level(h);
  }
}

std::vector<ReqSketch::LevelView> ReqSketch::levels() const {
  std::vector<LevelView> out;
  out.reserve(levels_.size());
  for (size_t h = 0; h < levels_.size(); ++h) {
    out.push_back({static_cast<uint8_t>(h), levels_[h].compactions,
                   capacity(h), levels_[h].buf});
  }
  return out;
}

std::vector<uint8_t> ReqSketch::serialize() const {
  std::vector<uint8_t> out;
  out.reserve(serialized_size());
  detail::put_magic(out, kMagic);
  detail::put<uint8_t>(out, kVersion);
  detail::put<uint8_t>(out, static_cast<uint8_t>(orientation_));
  detail::put<uint8_t>(out, static_cast<uint8_t>(laziness_));
  detail::put<uint32_t>(out, k_);
  detail::put<uint64_t>(out, total_);
  detail::put<uint8_t>(out, static_cast<uint8_t>(levels_.size()));
  for (size_t h = 0; h < levels_.size(); ++h) {
    detail::put<uint8_t>(out, static_cast<uint8_t>(h));
    detail::put<uint64_t>(out, levels_[h].compactions);
    detail::put<uint32_t>(out, static_cast<uint32_t>(levels_[h].buf.size()));
    for (double x : levels_[h].buf) detail::put<double>(out, x);
  }
  return out;
}

ReqSketch ReqSketch::deserialize(const std::vector<uint8_t>& bytes) {
  detail::ByteReader r(bytes.data(), bytes.size());
  r.expect_magic(kMagic);
  if (r.get<uint8_t>() != kVersion) {
    throw std::runtime_error("unsupported req sketch version");
  }
  const auto orientation = static_cast<Orientation>(r.get<uint8_t>());
  const auto laziness = static_cast<Laziness>(r.get<uint8_t>());
  const uint32_t k = r.get<uint32_t>();
  const uint64_t total = r.get<uint64_t>();
  const uint8_t nlevels = r.get<uint8_t>();

  ReqSketch s(k, orientation, laziness);
  s.total_ = total;
  s.ensure_level(nlevels == 0 ? 0 : nlevels - 1);
  for (uint8_t i = 0; i < nlevels; ++i) {
    const uint8_t h = r.get<uint8_t>();
    if (h >= nlevels) throw std::runtime_error("corrupt serialized sketch");
    Compactor& c = s.levels_[h];
    c.compactions = r.get<uint64_t>();
    const uint32_t cnt = r.get<uint32_t>();
    c.buf.resize(cnt);
    for (uint32_t j = 0; j < cnt; ++j) c.buf[j] = r.get<double>();
  }
  if (!r.done() || s.stored_weight() != total) {
    throw std::runtime_error("corrupt serialized sketch");
  }
  return s;
}

size_t ReqSketch::serialized_size() const {
  size_t sz = kHeaderBytes;
  for (const Compactor& c : levels_) {
    sz += kLevelHeaderBytes + sizeof(double) * c.buf.size();
  }
  return sz;
}

}  // namespace qf
