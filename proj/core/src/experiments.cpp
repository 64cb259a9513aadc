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

#include "qf/experiments.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <limits>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "qf/kll_sketch.hpp"
#include "qf/stream.hpp"

namespace qf {

// ---------------------------------------------------------------- stats

double median(std::vector<double> xs) {
  if (xs.empty()) throw std::invalid_argument("median of empty sample");
  const size_t mid = xs.size() / 2;
  std::nth_element(xs.begin(), xs.begin() + mid, xs.end());
  if (xs.size() % 2 == 1) return xs[mid];
  const double hi = xs[mid];
  const double lo = *std::max_element(xs.begin(), xs.begin() + mid);
  return (lo + hi) / 2.0;
}

double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw std::invalid_argument("mean of empty sample");
  double s = 0.0;
  for (double x : xs) s += x;
  return s / static_cast<double>(xs.size());
}

double stddev(const std::vector<double>& xs) {
  if (xs.size() < 2) return 0.0;
  const double m = mean(xs);
  double s = 0.0;
  for (double x : xs) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(xs.size() - 1));
}

// ---------------------------------------------------------------- config

namespace {

std::string trimmed(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

}  // namespace

ExperimentConfig ExperimentConfig::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  while (std::getline(f, line)) {
    const std::string t = trimmed(line);
    if (t.empty() || t[0] == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error("malformed config line: " + line);
    }
    cfg.set(trimmed(t.substr(0, eq)), trimmed(t.substr(eq + 1)));
  }
  return cfg;
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  auto as_u64 = [&] { return std::stoull(value); };
  auto as_u32 = [&] { return static_cast<uint32_t>(std::stoul(value)); };
  auto as_f64 = [&] { return std::stod(value); };
  if (key == "delta") {
    delta = as_f64();
  } else if (key == "scale") {
    scale = value;
  } else if (key == "alpha") {
    alpha = as_f64();
  } else if (key == "req_k") {
    req_k = as_u32();
  } else if (key == "kll_k") {
    kll_k = as_u32();
  } else if (key == "n") {
    n = as_u64();
  } else if (key == "trials") {
    trials = as_u32();
  } else if (key == "seed") {
    seed = as_u64();
  } else if (key == "e_max") {
    e_max = as_f64();
  } else if (key == "emax_sweep") {
    emax_sweep.clear();
    std::stringstream ss(value);
    std::string tok;
    while (std::getline(ss, tok, ',')) emax_sweep.push_back(std::stod(tok));
    for (size_t i = 1; i < emax_sweep.size(); ++i) {
      if (emax_sweep[i] <= emax_sweep[i - 1]) {
        throw std::runtime_error("emax_sweep must be strictly increasing");
      }
    }
  } else if (key == "dist") {
    parse_dist(value);  // validates
    dist = value;
  } else if (key == "grid") {
    grid = as_u32();
  } else if (key == "out_dir") {
    out_dir = value;
  } else if (key == "laziness") {
    if (value != "partial" && value != "full") {
      throw std::runtime_error("laziness must be 'partial' or 'full'");
    }
    laziness = value;
  } else if (key == "attack_iterations") {
    attack_iterations = as_u64();
  } else if (key == "attack_req_seeds") {
    attack_req_seeds = as_u32();
  } else if (key == "threads") {
    threads = as_u32();
  } else {
    throw std::runtime_error("unknown config key: " + key);
  }
}

ScaleFunction ExperimentConfig::scale_function() const {
  return ScaleFunction::parse(scale, alpha);
}

ReqSketch::Laziness ExperimentConfig::laziness_mode() const {
  return laziness == "full" ? ReqSketch::Laziness::Full
                            : ReqSketch::Laziness::Partial;
}

double ExperimentConfig::effective_e_max() const {
  return e_max > 0.0 ? e_max : default_e_max(std::max<uint64_t>(n, 1));
}

// ---------------------------------------------------------------- trials

namespace {

struct TrialErrors {
  std::vector<std::vector<double>> td_merge;    // [trial][rank]
  std::vector<std::vector<double>> td_cluster;  // [trial][rank]
  std::vector<std::vector<double>> req;         // [trial][rank]
};

void run_pool(uint32_t trials, uint32_t threads,
              const std::function<void(uint32_t)>& body) {
  uint32_t nthreads = threads ? threads : std::thread::hardware_concurrency();
  nthreads = std::max<uint32_t>(1, std::min(nthreads, trials));
  std::atomic<uint32_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex error_mutex;
  std::vector<std::thread> pool;
  for (uint32_t i = 0; i < nthreads; ++i) {
    pool.emplace_back([&] {
      for (;;) {
        const uint32_t t = next.fetch_add(1);
        if (t >= trials || failed.load()) return;
        try {
          body(t);
        } catch (...) {
          std::lock_guard<std::mutex> lock(error_mutex);
          if (!error) error = std::current_exception();
          failed.store(true);
          return;
        }
      }
    });
  }
  for (auto& th : pool) th.join();
  if (error) std::rethrow_exception(error);
}

/// Signed quantile error via the value-then-rank composition:
/// exact_rank(quantile(q)) / n - q.
template <typename Sketch>
double measured_error(const std::vector<double>& sorted, Sketch& sketch,
                      double q) {
  const double y = sketch.quantile(q);
  const double n = static_cast<double>(sorted.size());
  return static_cast<double>(exact_rank(sorted, y)) / n - q;
}

TrialErrors collect_trials(const ExperimentConfig& config, double e_max) {
  const std::vector<double> grid = evenly_spaced_ranks(config.grid);
  const DistKind kind = parse_dist(config.dist);
  const ScaleFunction scale = config.scale_function();

  TrialErrors out;
  out.td_merge.resize(config.trials);
  out.td_cluster.resize(config.trials);
  out.req.resize(config.trials);

  run_pool(config.trials, config.threads, [&](uint32_t t) {
    const uint64_t trial_seed = config.seed ^ (uint64_t{t} + 1);
    std::vector<double> stream =
        gen_stream({kind, e_max, trial_seed, config.n, false});

    TDigest td_m(config.delta, scale, TDigestVariant::Merging, trial_seed);
    TDigest td_c(config.delta, scale, TDigestVariant::Clustering, trial_seed);
    ReqSketch req(config.req_k, ReqSketch::Orientation::HighRankAccurate,
                  config.laziness_mode(), trial_seed);
    for (double x : stream) {
      td_m.insert(x);
      td_c.insert(x);
      req.update(x);
    }

    std::sort(stream.begin(), stream.end());
    auto& em = out.td_merge[t];
    auto& ec = out.td_cluster[t];
    auto& er = out.req[t];
    em.reserve(grid.size());
    ec.reserve(grid.size());
    er.reserve(grid.size());
    for (double q : grid) {
      em.push_back(measured_error(stream, td_m, q));
      ec.push_back(measured_error(stream, td_c, q));
      er.push_back(measured_error(stream, req, q));
    }
  });
  return out;
}

std::vector<double> column(const std::vector<std::vector<double>>& rows,
                           size_t j) {
  std::vector<double> col;
  col.reserve(rows.size());
  for (const auto& r : rows) col.push_back(r[j]);
  return col;
}

}  // namespace

ErrorReport run_iid(const ExperimentConfig& config) {
  const std::vector<double> grid = evenly_spaced_ranks(config.grid);
  const TrialErrors errs = collect_trials(config, config.effective_e_max());

  ErrorReport report;
  report.q = grid;
  for (size_t j = 0; j < grid.size(); ++j) {
    report.td_merge_med.push_back(median(column(errs.td_merge, j)));
    report.td_cluster_med.push_back(median(column(errs.td_cluster, j)));
    const std::vector<double> r = column(errs.req, j);
    const double m = mean(r);
    const double sd = stddev(r);
    report.req_mean.push_back(m);
    report.req_lo.push_back(m - 2.0 * sd);
    report.req_hi.push_back(m + 2.0 * sd);
  }
  return report;
}

SweepReport run_emax_sweep(const ExperimentConfig& config) {
  if (config.emax_sweep.empty()) {
    throw std::invalid_argument("emax_sweep is empty");
  }
  const std::vector<double> grid = evenly_spaced_ranks(config.grid);
  SweepReport report;
  for (double e_max : config.emax_sweep) {
    const TrialErrors errs = collect_trials(config, e_max);
    double tdm = 0.0, tdc = 0.0, req_med = 0.0, req_p2sd = 0.0;
    for (size_t j = 0; j < grid.size(); ++j) {
      const double denom = 1.0 - grid[j];
      auto rel = [&](std::vector<double> col) {
        for (double& e : col) e /= denom;
        return col;
      };
      const auto rm = rel(column(errs.td_merge, j));
      const auto rc = rel(column(errs.td_cluster, j));
      const auto rr = rel(column(errs.req, j));
      tdm += std::abs(median(rm));
      tdc += std::abs(median(rc));
      req_med += std::abs(median(rr));
      req_p2sd += std::abs(mean(rr) + 2.0 * stddev(rr));
    }
    const double m = static_cast<double>(grid.size());
    report.push_back({e_max, tdm / m, tdc / m, req_med / m, req_p2sd / m});
  }
  return report;
}

AttackCmdResult run_attack_cmd(const ExperimentConfig& config) {
  const ScaleFunction scale = config.scale_function();
  AttackResult merging =
      run_attack(config.delta, scale, TDigestVariant::Merging,
                 config.attack_iterations, config.seed, config.grid);
  AttackResult clustering =
      run_attack(config.delta, scale, TDigestVariant::Clustering,
                 config.attack_iterations, config.seed, config.grid);

  const std::vector<double>& grid = merging.report.rank_grid;
  std::vector<double> sorted = merging.stream;
  std::sort(sorted.begin(), sorted.end());

  // replay the merging attack stream into ReqSketch over independent seeds
  std::vector<std::vector<double>> req_errs(config.attack_req_seeds);
  run_pool(config.attack_req_seeds, config.threads, [&](uint32_t s) {
    ReqSketch req(config.req_k, ReqSketch::Orientation::HighRankAccurate,
                  config.laziness_mode(), config.seed ^ (uint64_t{s} + 1));
    for (double x : merging.stream) req.update(x);
    auto& er = req_errs[s];
    er.reserve(grid.size());
    for (double q : grid) er.push_back(measured_error(sorted, req, q));
  });

  AttackCmdResult out;
  out.curves.q = grid;
  out.curves.td_merge_med = merging.report.error_curve;
  out.curves.td_cluster_med = clustering.report.error_curve;
  for (size_t j = 0; j < grid.size(); ++j) {
    const std::vector<double> col = column(req_errs, j);
    const double m = mean(col);
    const double sd = stddev(col);
    out.curves.req_mean.push_back(m);
    out.curves.req_lo.push_back(m - 2.0 * sd);
    out.curves.req_hi.push_back(m + 2.0 * sd);
    out.req_median.push_back(median(col));
  }
  out.merging = std::move(merging.report);
  out.clustering = std::move(clustering.report);
  out.stream = std::move(merging.stream);
  return out;
}

// ---------------------------------------------------------------- speed

namespace {

template <typename MakeSketch>
double time_ingest(const std::vector<double>& data, MakeSketch make,
                   int reps = 3) {
  double best = std::numeric_limits<double>::infinity();
  for (int rep = 0; rep < reps; ++rep) {
    auto sketch = make();
    const auto t0 = std::chrono::steady_clock::now();
    for (double x : data) sketch.update(x);
    const auto t1 = std::chrono::steady_clock::now();
    const double ns =
        std::chrono::duration<double, std::nano>(t1 - t0).count() /
        static_cast<double>(data.size());
    best = std::min(best, ns);
  }
  return best;
}

// adapter so TDigest::insert fits the update() shape
struct TDigestUpdater {
  TDigest d;
  void update(double x) { d.insert(x); }
};

}  // namespace

SpeedReport run_speed(const ExperimentConfig& config) {
  const std::vector<double> data =
      gen_stream({DistKind::Uniform01, 0.0, config.seed, config.n, false});
  const ScaleFunction scale = config.scale_function();
  SpeedReport report;

  auto add = [&](const std::string& structure, const std::string& param,
                 double ns) {
    report.push_back({structure, param, config.n, ns});
  };

  add("td_merge", "delta=" + std::to_string(static_cast<int>(config.delta)),
      time_ingest(data, [&] {
        return TDigestUpdater{
            TDigest(config.delta, scale, TDigestVariant::Merging, config.seed)};
      }));
  add("td_cluster", "delta=" + std::to_string(static_cast<int>(config.delta)),
      time_ingest(data, [&] {
        return TDigestUpdater{TDigest(config.delta, scale,
                                      TDigestVariant::Clustering, config.seed)};
      }));
  for (uint32_t k : {4u, 8u, 16u, 32u}) {
    add("req_partial", "k=" + std::to_string(k), time_ingest(data, [&] {
          return ReqSketch(k, ReqSketch::Orientation::HighRankAccurate,
                           ReqSketch::Laziness::Partial, config.seed);
        }));
    add("req_full", "k=" + std::to_string(k), time_ingest(data, [&] {
          return ReqSketch(k, ReqSketch::Orientation::HighRankAccurate,
                           ReqSketch::Laziness::Full, config.seed);
        }));
  }
  add("kll", "k=" + std::to_string(config.kll_k), time_ingest(data, [&] {
        return KllSketch(config.kll_k, config.seed);
      }));
  return report;
}

SizeReport size_report(double delta, const ScaleFunction& scale,
                       uint32_t req_k, uint64_t n, uint64_t seed) {
  const std::vector<double> data =
      gen_stream({DistKind::Uniform01, 0.0, seed, n, false});
  TDigest td_m(delta, scale, TDigestVariant::Merging, seed);
  TDigest td_c(delta, scale, TDigestVariant::Clustering, seed);
  ReqSketch req(req_k, ReqSketch::Orientation::HighRankAccurate,
                ReqSketch::Laziness::Partial, seed);
  for (double x : data) {
    td_m.insert(x);
    td_c.insert(x);
    req.update(x);
  }
  return {td_m.serialized_size(), td_c.serialized_size(),
          req.serialized_size()};
}

// ---------------------------------------------------------------- csv

namespace {
std::FILE* open_csv(const std::string& path) {
  std::FILE* f = std::fopen(path.c_str(), "w");
  if (!f) throw std::runtime_error("cannot open for writing: " + path);
  return f;
}
}  // namespace

void write_error_report_csv(const std::string& path, const ErrorReport& r) {
  std::FILE* f = open_csv(path);
  std::fprintf(f, "q,td_merge_med,td_cluster_med,req_mean,req_lo,req_hi\n");
  for (size_t j = 0; j < r.q.size(); ++j) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", r.q[j],
                 r.td_merge_med[j], r.td_cluster_med[j], r.req_mean[j],
                 r.req_lo[j], r.req_hi[j]);
  }
  std::fclose(f);
}

void write_sweep_report_csv(const std::string& path, const SweepReport& r) {
  std::FILE* f = open_csv(path);
  std::fprintf(f, "emax,tdm_avg_rel,tdc_avg_rel,req_med_avg_rel,"
                  "req_p2sd_avg_rel\n");
  for (const SweepRow& row : r) {
    std::fprintf(f, "%.17g,%.17g,%.17g,%.17g,%.17g\n", row.e_max,
                 row.tdm_avg_rel, row.tdc_avg_rel, row.req_med_avg_rel,
                 row.req_p2sd_avg_rel);
  }
  std::fclose(f);
}

void write_speed_report_csv(const std::string& path, const SpeedReport& r) {
  std::FILE* f = open_csv(path);
  std::fprintf(f, "structure,param,n,ns_per_update\n");
  for (const SpeedRow& row : r) {
    std::fprintf(f, "%s,%s,%llu,%.17g\n", row.structure.c_str(),
                 row.param.c_str(), static_cast<unsigned long long>(row.n),
                 row.ns_per_update);
  }
  std::fclose(f);
}

}  // namespace qf
