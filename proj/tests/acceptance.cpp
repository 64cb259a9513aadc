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

// End-to-end acceptance gate. Each numbered check prints exactly one
// PASS/FAIL line; the process exits nonzero if any check fails.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <string>
#include <thread>
#include <vector>

#include "qf/adversary.hpp"
#include "qf/experiments.hpp"
#include "qf/genstreams.hpp"
#include "qf/kll_sketch.hpp"
#include "qf/req_sketch.hpp"
#include "qf/stream.hpp"
#include "qf/tdigest.hpp"

using namespace qf;

namespace {

int g_failures = 0;

void report(int id, bool ok, const std::string& what) {
  std::printf("%s criterion %d: %s\n", ok ? "PASS" : "FAIL", id, what.c_str());
  std::fflush(stdout);
  if (!ok) ++g_failures;
}

bool eq1_holds(TDigest& d) {
  const uint64_t n = d.count();
  for (const CentroidView& v : d.introspect()) {
    if (!weight_limit_ok(d.scale(), d.delta(), n, v.weight_left, v.weight)) {
      return false;
    }
  }
  return true;
}

// ---- 1. Eq (1) invariant suite --------------------------------------------

void criterion1() {
  const std::vector<ScaleFunction> kinds = {
      ScaleFunction::k0(), ScaleFunction::k1(), ScaleFunction::k2(),
      ScaleFunction::k3()};
  const double deltas[] = {50.0, 100.0, 500.0};
  std::atomic<bool> ok{true};

  const unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int s = next.fetch_add(1);
        if (s >= 1000 || !ok.load()) return;
        const ScaleFunction& scale = kinds[s % 4];
        const double delta = deltas[(s / 4) % 3];
        TDigest d(delta, scale, TDigestVariant::Merging,
                  static_cast<uint64_t>(s));
        Rng rng(9000 + s);
        for (int i = 0; i < 10000; ++i) {
          d.insert(rng.uniform(-1000.0, 1000.0));
          if ((i + 1) % 2500 == 0) {
            d.flush();  // force a merge pass mid-stream and re-check
            if (!eq1_holds(d) ||
                d.centroid_count() >
                    static_cast<size_t>(std::ceil(2.0 * delta))) {
              ok.store(false);
              return;
            }
          }
        }
        d.flush();
        if (!eq1_holds(d) ||
            d.centroid_count() > static_cast<size_t>(std::ceil(2.0 * delta))) {
          ok.store(false);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  report(1, ok.load(),
         "Eq(1) + centroid-count bound after every merge pass, "
         "1000 streams x 4 scale kinds x delta {50,100,500}");
}

// ---- 2. Oracle equivalence -------------------------------------------------

void criterion2() {
  bool ok = true;
  for (int c = 0; c < 100 && ok; ++c) {
    auto data = gen_stream({DistKind::Uniform01, 0.0,
                            static_cast<uint64_t>(c), 300, false});
    ReqSketch req(64, ReqSketch::Orientation::HighRankAccurate,
                  ReqSketch::Laziness::Partial, c);
    KllSketch kll(512, c);
    for (double x : data) {
      req.update(x);
      kll.update(x);
    }
    std::sort(data.begin(), data.end());
    Rng qrng(777 + c);
    for (int j = 0; j < 10; ++j) {
      const double y = qrng.uniform(-0.1, 1.1);
      const double truth = static_cast<double>(exact_rank(data, y));
      if (req.rank(y).rank != truth || kll.rank(y).rank != truth) ok = false;
    }
  }

  // sorted-input t-digest stays within the straddling-centroid weight
  for (int c = 0; c < 20 && ok; ++c) {
    auto data = gen_stream({DistKind::Uniform01, 0.0,
                            static_cast<uint64_t>(500 + c), 5000, true});
    TDigest d(20, ScaleFunction::k0(), TDigestVariant::Merging, c);
    for (double x : data) d.insert(x);
    d.flush();
    const auto views = d.introspect();
    Rng qrng(888 + c);
    for (int j = 0; j < 20; ++j) {
      const double y = qrng.uniform01();
      const size_t hi = static_cast<size_t>(
          std::lower_bound(views.begin(), views.end(), y,
                           [](const CentroidView& v, double t) {
                             return v.mean < t;
                           }) -
          views.begin());
      uint64_t tol = 1;
      if (hi < views.size()) tol = std::max(tol, views[hi].weight);
      if (hi > 0) tol = std::max(tol, views[hi - 1].weight);
      const double err = std::abs(
          d.rank(y).rank - static_cast<double>(exact_rank(data, y)));
      if (err > static_cast<double>(tol)) ok = false;
    }
  }
  report(2, ok,
         "exact-rank equality for uncompacted ReqSketch/KLL; sorted-input "
         "t-digest within straddling-centroid weight");
}

// ---- 3. ReqSketch unbiasedness ---------------------------------------------

void criterion3() {
  auto data = gen_stream({DistKind::Uniform01, 0.0, 7, 100000, false});
  auto sorted = data;
  std::sort(sorted.begin(), sorted.end());
  const double y = sorted[90000];  // true q = 0.9
  const double truth = static_cast<double>(exact_rank(sorted, y));

  const int seeds = 2000;
  std::vector<double> errs(seeds);
  const unsigned nthreads = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < nthreads; ++t) {
    pool.emplace_back([&] {
      for (;;) {
        const int s = next.fetch_add(1);
        if (s >= seeds) return;
        ReqSketch sk(4, ReqSketch::Orientation::HighRankAccurate,
                     ReqSketch::Laziness::Partial, static_cast<uint64_t>(s));
        for (double x : data) sk.update(x);
        errs[s] = sk.rank(y).rank - truth;
      }
    });
  }
  for (auto& th : pool) th.join();

  const double m = mean(errs);
  const double se = stddev(errs) / std::sqrt(static_cast<double>(seeds));
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "unbiasedness at q=0.9 over 2000 seeds: mean %.4g within 3 x "
                "SE %.4g",
                m, se);
  report(3, std::abs(m) <= 3.0 * se, buf);
}

// ---- 4. Monotone-transform invariance --------------------------------------

void criterion4() {
  bool ok = true;
  int cases = 0;
  for (uint64_t seed = 0; seed < 10 && ok; ++seed) {
    const auto data = gen_stream({DistKind::Uniform01, 0.0, 40 + seed,
                                  20000, false});
    ReqSketch a(4, ReqSketch::Orientation::HighRankAccurate,
                ReqSketch::Laziness::Partial, seed);
    ReqSketch b(4, ReqSketch::Orientation::HighRankAccurate,
                ReqSketch::Laziness::Partial, seed);
    for (double x : data) {
      a.update(x);
      b.update(std::exp(x));
    }
    for (double q : {0.05, 0.25, 0.5, 0.75, 0.95}) {
      if (a.rank(q).rank != b.rank(std::exp(q)).rank) ok = false;
      ++cases;
    }
  }
  report(4, ok && cases == 50,
         "exp-transform leaves ReqSketch ranks exactly identical, 50 cases");
}

// ---- 5. Attack efficacy ------------------------------------------------------

void criterion5() {
  ExperimentConfig cfg;
  cfg.delta = 500;
  cfg.scale = "k0";
  cfg.attack_iterations = 400;
  cfg.attack_req_seeds = 64;
  cfg.grid = 200;
  cfg.seed = 42;
  const AttackCmdResult r = run_attack_cmd(cfg);

  double td_max = 0.0, req_max = 0.0;
  for (double e : r.curves.td_merge_med) td_max = std::max(td_max, std::abs(e));
  for (double e : r.req_median) req_max = std::max(req_max, std::abs(e));

  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "K0 delta=500 attack: merging max |err| %.4f >= 0.3; ReqSketch "
                "max |median err| %.5f <= 0.01 (64 seeds)",
                td_max, req_max);
  report(5, td_max >= 0.3 && req_max <= 0.01, buf);
}

// ---- 6. Asymptotic-bound functions ------------------------------------------

void criterion6() {
  bool ok = std::abs(asymptotic_error_lower_bound(ScaleKind::K0, 500.0) -
                     498.0 / 499.0) <= 1e-12;
  // K3 bound is increasing in delta with limit 1
  double prev = 0.0;
  for (double d : {3.0, 30.0, 300.0, 3000.0, 3e6}) {
    const double b = asymptotic_error_lower_bound(ScaleKind::K3, d);
    if (b <= prev || b >= 1.0) ok = false;
    prev = b;
  }
  if (std::abs(asymptotic_error_lower_bound(ScaleKind::K3, 1e12) - 1.0) >
      1e-10) {
    ok = false;
  }
  // K2 bound is increasing in delta, below 0.5, with limit 0.5
  prev = 0.0;
  for (double d : {3.0, 30.0, 300.0, 3000.0, 3e6}) {
    const double b = asymptotic_error_lower_bound(ScaleKind::K2, d);
    if (b <= prev || b >= 0.5) ok = false;
    prev = b;
  }
  if (std::abs(asymptotic_error_lower_bound(ScaleKind::K2, 1e12) - 0.5) >
      1e-10) {
    ok = false;
  }
  report(6, ok,
         "closed forms: K0(500)=498/499 within 1e-12; K3 -> 1, K2 -> 0.5 "
         "monotonically");
}

// ---- 7. D_hard error reproduction -------------------------------------------

void criterion7() {
  ExperimentConfig cfg;  // defaults: k2_asym, delta=500, n=2^20, hard dist
  cfg.trials = 64;
  cfg.seed = 42;
  const ErrorReport r = run_iid(cfg);

  double td_peak = 0.0;
  double req_worst = 0.0;
  for (size_t j = 0; j < r.q.size(); ++j) {
    if (r.q[j] >= 0.6 && r.q[j] <= 0.85) {
      td_peak = std::max(td_peak, std::abs(r.td_merge_med[j]));
    }
    req_worst =
        std::max({req_worst, std::abs(r.req_lo[j]), std::abs(r.req_hi[j])});
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "D_hard: merging median |err| peak %.4f >= 0.15 in q [0.6, "
                "0.85]; ReqSketch |mean|+2SD worst %.4f <= 0.05",
                td_peak, req_worst);
  report(7, td_peak >= 0.15 && req_worst <= 0.05, buf);
}

// ---- 8. E_max sweep direction -----------------------------------------------

void criterion8() {
  ExperimentConfig cfg;
  cfg.trials = 64;
  cfg.dist = "hard";
  cfg.seed = 42;
  cfg.emax_sweep = {5, 10, 50, 150, 300};
  const SweepReport sweep = run_emax_sweep(cfg);

  bool small_emax_ok = true;
  for (const SweepRow& row : sweep) {
    if (row.e_max <= 10.0) {
      if (row.tdm_avg_rel >= row.req_p2sd_avg_rel ||
          row.tdc_avg_rel >= row.req_p2sd_avg_rel) {
        small_emax_ok = false;
      }
    }
  }
  const double growth = sweep.back().tdm_avg_rel / sweep.front().tdm_avg_rel;
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "E_max sweep: t-digest below ReqSketch +2SD at E_max <= 10; "
                "merging value grows %.1fx >= 10x from 5 to 300",
                growth);
  report(8, small_emax_ok && growth >= 10.0, buf);
}

// ---- 9. Speed orderings -------------------------------------------------------

void criterion9() {
  ExperimentConfig cfg;
  cfg.n = uint64_t{1} << 24;
  cfg.seed = 42;
  const SpeedReport r = run_speed(cfg);

  auto find = [&](const std::string& structure,
                  const std::string& param) -> double {
    for (const SpeedRow& row : r) {
      if (row.structure == structure && row.param == param) {
        return row.ns_per_update;
      }
    }
    return -1.0;
  };

  const double td_cluster = find("td_cluster", "delta=500");
  const double req_p4 = find("req_partial", "k=4");
  bool ok = req_p4 > 0.0 && td_cluster > 0.0 && req_p4 < td_cluster;
  for (const char* k : {"k=8", "k=16", "k=32"}) {
    const double p = find("req_partial", k);
    const double f = find("req_full", k);
    if (!(p > 0.0 && f > 0.0 && p <= f)) ok = false;
  }
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "speed: req(k=4,partial) %.0f ns < clustering t-digest %.0f "
                "ns; partial <= full at k in {8,16,32}",
                req_p4, td_cluster);
  report(9, ok, buf);
}

// ---- 10. Size shape ------------------------------------------------------------

void criterion10() {
  const ScaleFunction scale = ScaleFunction::parse("k2_asym");
  const SizeReport s20 = size_report(500.0, scale, 4, uint64_t{1} << 20, 42);
  const SizeReport s24 = size_report(500.0, scale, 4, uint64_t{1} << 24, 42);

  const double req_ratio = static_cast<double>(s24.bytes_req) /
                           static_cast<double>(s20.bytes_req);
  auto within_10pct = [](size_t a, size_t b) {
    const double lo = static_cast<double>(std::min(a, b));
    const double hi = static_cast<double>(std::max(a, b));
    return hi / lo <= 1.10;
  };
  const bool td_flat = within_10pct(s20.bytes_td_merge, s24.bytes_td_merge) &&
                       within_10pct(s20.bytes_td_cluster, s24.bytes_td_cluster);
  char buf[160];
  std::snprintf(buf, sizeof(buf),
                "size: req grows %.3fx <= 1.5x from n=2^20 to 2^24; t-digest "
                "sizes flat within 10%%",
                req_ratio);
  report(10, req_ratio <= 1.5 && td_flat, buf);
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  criterion8();
  criterion9();
  criterion10();
  std::printf("%d/10 criteria passed (%.0f s)\n", 10 - g_failures,
              seconds_since(t0));
  return g_failures == 0 ? 0 : 1;
}
