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

#include <benchmark/benchmark.h>

#include <vector>

#include "qf/genstreams.hpp"
#include "qf/kll_sketch.hpp"
#include "qf/req_sketch.hpp"
#include "qf/tdigest.hpp"

namespace {

const std::vector<double>& data() {
  static const std::vector<double> d =
      qf::gen_stream({qf::DistKind::Uniform01, 0.0, 42, 1 << 20, false});
  return d;
}

void BM_TDigestMergingInsert(benchmark::State& state) {
  const auto& xs = data();
  const double delta = static_cast<double>(state.range(0));
  for (auto _ : state) {
    qf::TDigest d(delta, qf::ScaleFunction::parse("k2_asym"),
                  qf::TDigestVariant::Merging, 1);
    for (double x : xs) d.insert(x);
    benchmark::DoNotOptimize(d.count());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_TDigestMergingInsert)->Arg(100)->Arg(500);

void BM_TDigestClusteringInsert(benchmark::State& state) {
  const auto& xs = data();
  const double delta = static_cast<double>(state.range(0));
  for (auto _ : state) {
    qf::TDigest d(delta, qf::ScaleFunction::parse("k2_asym"),
                  qf::TDigestVariant::Clustering, 1);
    for (double x : xs) d.insert(x);
    benchmark::DoNotOptimize(d.count());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_TDigestClusteringInsert)->Arg(100)->Arg(500);

void BM_ReqUpdate(benchmark::State& state) {
  const auto& xs = data();
  const auto k = static_cast<uint32_t>(state.range(0));
  const auto laziness = state.range(1) == 0 ? qf::ReqSketch::Laziness::Partial
                                            : qf::ReqSketch::Laziness::Full;
  for (auto _ : state) {
    qf::ReqSketch s(k, qf::ReqSketch::Orientation::HighRankAccurate, laziness,
                    1);
    for (double x : xs) s.update(x);
    benchmark::DoNotOptimize(s.count());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_ReqUpdate)
    ->Args({4, 0})
    ->Args({4, 1})
    ->Args({16, 0})
    ->Args({16, 1})
    ->Args({32, 0})
    ->Args({32, 1});

void BM_KllUpdate(benchmark::State& state) {
  const auto& xs = data();
  for (auto _ : state) {
    qf::KllSketch s(static_cast<uint32_t>(state.range(0)), 1);
    for (double x : xs) s.update(x);
    benchmark::DoNotOptimize(s.count());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<int64_t>(xs.size()));
}
BENCHMARK(BM_KllUpdate)->Arg(100);

}  // namespace

BENCHMARK_MAIN();
