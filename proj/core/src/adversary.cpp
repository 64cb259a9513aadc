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

#include "qf/adversary.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <optional>
#include <stdexcept>

#include "qf/rng.hpp"
#include "qf/stream.hpp"

namespace qf {

namespace {

constexpr double kWidthFloor = 1e-306;  // below this the interval degenerates

struct Attacked {
  double mean;
  uint64_t weight;
  uint64_t weight_left;
};

std::optional<Attacked> largest_below_zero(
    const std::vector<CentroidView>& views) {
  std::optional<Attacked> best;
  for (const CentroidView& v : views) {
    if (v.mean < 0.0) best = Attacked{v.mean, v.weight, v.weight_left};
  }
  return best;
}

/// Largest w such that pred(w) holds, probing exponentially then bisecting.
/// pred(lo) must hold.
uint64_t search_max(uint64_t lo, uint64_t cap,
                    const std::function<bool(uint64_t)>& pred) {
  uint64_t good = lo;
  uint64_t probe = std::max<uint64_t>(lo * 2, 1);
  while (probe <= cap && pred(probe)) {
    good = probe;
    probe *= 2;
  }
  uint64_t bad = std::min(probe, cap + 1);
  while (good + 1 < bad) {
    const uint64_t mid = good + (bad - good) / 2;
    if (pred(mid)) {
      good = mid;
    } else {
      bad = mid;
    }
  }
  return good;
}

}  // namespace

double asymptotic_error_lower_bound(ScaleKind kind, double delta) {
  if (!(delta > 0.0)) {
    throw std::invalid_argument("delta must be positive");
  }
  switch (kind) {
    case ScaleKind::K0:
      if (!(delta > 2.0)) {
        throw std::invalid_argument("K0 bound requires delta > 2");
      }
      return (delta - 2.0) / (delta - 1.0);
    case ScaleKind::K2:
      return 1.0 / (std::exp(1.0 / delta) * (std::exp(1.0 / (2.0 * delta)) + 1.0));
    case ScaleKind::K3:
      return std::exp(-1.0 / delta);
    case ScaleKind::K1:
      throw std::invalid_argument("no closed-form bound for K1");
  }
  throw std::invalid_argument("unknown scale kind");
}

std::vector<double> evaluate_attack(const std::vector<double>& stream_log,
                                    TDigest& digest,
                                    const std::vector<double>& rank_grid) {
  std::vector<double> sorted = stream_log;
  std::sort(sorted.begin(), sorted.end());
  const double n = static_cast<double>(sorted.size());
  std::vector<double> errs;
  errs.reserve(rank_grid.size());
  for (double q : rank_grid) {
    const double y = digest.quantile(q);
    const double r = static_cast<double>(exact_rank(sorted, y));
    errs.push_back(r / n - q);
  }
  return errs;
}

AttackResult run_attack(double delta, const ScaleFunction& scale,
                        TDigestVariant variant, uint64_t iterations,
                        uint64_t seed, size_t grid_size) {
  if (!(delta >= 3.0)) {
    throw std::invalid_argument("attack requires delta >= 3");
  }

  TDigest digest(delta, scale, variant, seed);
  AttackReport report;
  report.rank_grid = evenly_spaced_ranks(grid_size);
  std::vector<double> stream;

  Rng rng(seed ^ 0x5deece66dULL);
  double min_positive = std::numeric_limits<double>::infinity();
  auto log_insert = [&](double x) {
    digest.insert(x);
    stream.push_back(x);
    if (x > 0.0) min_positive = std::min(min_positive, x);
  };

  const uint64_t n_seed = static_cast<uint64_t>(10.0 * delta);
  for (uint64_t i = 0; i < n_seed; ++i) log_insert(rng.uniform(-1.0, 1.0));
  digest.flush();

  {
    auto first = largest_below_zero(digest.introspect());
    if (first) {
      report.initial_weight_left = first->weight_left;
      report.initial_attacked_weight = first->weight;
      report.initial_weight_right =
          digest.count() - first->weight_left - first->weight;
    }
  }

  for (uint64_t it = 1; it <= iterations; ++it) {
    auto attacked = largest_below_zero(digest.introspect());
    if (!attacked || !(min_positive < std::numeric_limits<double>::infinity())) {
      report.stopped_early = true;
      break;
    }
    const double c = attacked->mean;
    const double next = min_positive;
    const double width = next - c;
    if (!(width > kWidthFloor)) {
      report.stopped_early = true;
      break;
    }

    // all centroids co-located at the attacked mean act as one cluster
    uint64_t w0 = 0;
    uint64_t wl0 = 0;
    {
      bool seen = false;
      for (const CentroidView& v : digest.introspect()) {
        if (v.mean == c) {
          if (!seen) {
            wl0 = v.weight_left;
            seen = true;
          }
          w0 += v.weight;
        }
      }
    }

    // Size the filler so the attacked centroid is still full once the
    // lopsided set has landed; otherwise the looser limit at the final
    // count lets the anchor merge into it and the pile mean turns positive.
    const uint64_t n_now = digest.count();
    const uint64_t cap = 64 * n_now;
    uint64_t lopsided = 2;
    uint64_t filler = 0;
    for (int round = 0; round < 4; ++round) {
      filler = search_max(0, cap, [&](uint64_t v) {
        return weight_limit_ok(scale, delta, n_now + v + lopsided, wl0, w0 + v);
      });
      lopsided = search_max(1, cap, [&](uint64_t w) {
        return weight_limit_ok(scale, delta, n_now + filler + w,
                               wl0 + w0 + filler, w);
      });
    }
    lopsided = std::max<uint64_t>(lopsided, 2);

    double anchor = c + 1e-3 * width;
    if (!(anchor < 0.0)) anchor = c / 2.0;
    // cap the mass so the pile's mean stays strictly negative: it must be
    // the next attacked centroid, advancing toward zero from below
    const double mass =
        std::min(next * (1.0 - 1e-3),
                 -anchor / (2.0 * static_cast<double>(lopsided - 1)));
    if (!(anchor > c) || !(mass > 0.0) || !(mass < next)) {
      report.stopped_early = true;
      break;
    }
    for (uint64_t i = 0; i < filler; ++i) log_insert(c);
    log_insert(anchor);
    for (uint64_t i = 0; i + 1 < lopsided; ++i) log_insert(mass);
    digest.flush();

    const auto errs = evaluate_attack(stream, digest, report.rank_grid);
    double max_abs = 0.0;
    for (double e : errs) max_abs = std::max(max_abs, std::abs(e));
    report.iterations.push_back({it, width, filler, lopsided, max_abs});
  }

  report.error_curve = evaluate_attack(stream, digest, report.rank_grid);
  return {std::move(digest), std::move(report), std::move(stream)};
}

void write_attack_report_csv(const std::string& path,
                             const AttackReport& report) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  std::fprintf(f, "iteration,interval_width,v_i,w_i,max_abs_err\n");
  for (const AttackIteration& it : report.iterations) {
    std::fprintf(f, "%llu,%.17g,%llu,%llu,%.17g\n",
                 static_cast<unsigned long long>(it.iteration),
                 it.interval_width,
                 static_cast<unsigned long long>(it.filler_weight),
                 static_cast<unsigned long long>(it.lopsided_weight),
                 it.max_abs_err);
  }
  std::fclose(f);
}

}  // namespace qf
