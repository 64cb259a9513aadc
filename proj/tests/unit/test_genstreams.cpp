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

#include "qf/genstreams.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <vector>

#include <stdexcept>

#include "doctest.h"

using namespace qf;

TEST_CASE("formula endpoints") {
  CHECK(hard_value(false, 1.0, 100.0) == doctest::Approx(1e100));
  CHECK(hard_value(true, 0.0, 100.0) == doctest::Approx(-1e-100));
  CHECK(hard_value(false, 0.5, 100.0) ==
        doctest::Approx(std::pow(10.0, -0.5 * 100.0)));
  CHECK(log_uniform_value(false, 0.5, 100.0) == doctest::Approx(1.0));
  CHECK(log_uniform_value(false, 1.0, 50.0) == doctest::Approx(1e50));
  CHECK(log_uniform_value(true, 0.0, 50.0) == doctest::Approx(-1e-50));
}

TEST_CASE("default_e_max values") {
  CHECK(default_e_max(1) == doctest::Approx(308.2547).epsilon(1e-4));
  CHECK(default_e_max(uint64_t{1} << 20) ==
        doctest::Approx(308.2547 - std::log10(1048576.0)).epsilon(1e-4));
}

TEST_CASE("gen_stream determinism and shapes") {
  CHECK(gen_stream({DistKind::Hard, 10.0, 1, 0, false}).empty());
  const StreamSpec spec{DistKind::Hard, 10.0, 42, 1000, false};
  const auto a = gen_stream(spec);
  const auto b = gen_stream(spec);
  CHECK(a == b);
  CHECK(a.size() == 1000);

  auto sorted_spec = spec;
  sorted_spec.sorted = true;
  const auto s = gen_stream(sorted_spec);
  CHECK(std::is_sorted(s.begin(), s.end()));
  auto manual = a;
  std::sort(manual.begin(), manual.end());
  CHECK(s == manual);
}

TEST_CASE("hard samples: magnitude bounds and sign balance") {
  const double e_max = 20.0;
  const auto xs = gen_stream({DistKind::Hard, e_max, 7, 100000, false});
  size_t neg = 0, small = 0;
  for (double x : xs) {
    CHECK(std::isfinite(x));
    CHECK(x != 0.0);
    const double mag = std::abs(x);
    CHECK(mag >= std::pow(10.0, -e_max) * (1 - 1e-12));
    CHECK(mag <= std::pow(10.0, e_max) * (1 + 1e-12));
    if (x < 0) ++neg;
    if (mag < std::pow(10.0, -0.5 * e_max)) ++small;
  }
  // binomial 3-sigma band around 50%
  const double sigma = std::sqrt(0.25 * xs.size());
  CHECK(std::abs(static_cast<double>(neg) - 0.5 * xs.size()) <= 3 * sigma);
  // |x| < 10^{-E/2} iff R < sqrt(1/4)... i.e. 2R^2-1 < -1/2, R < sqrt(0.25)
  CHECK(std::abs(static_cast<double>(small) - 0.5 * xs.size()) <= 3 * sigma);
}

TEST_CASE("log-uniform exponents pass a KS test") {
  const double e_max = 50.0;
  const auto xs =
      gen_stream({DistKind::SignedLogUniform, e_max, 11, 100000, false});
  std::vector<double> u;
  u.reserve(xs.size());
  for (double x : xs) {
    u.push_back((std::log10(std::abs(x)) + e_max) / (2.0 * e_max));
  }
  std::sort(u.begin(), u.end());
  double ks = 0.0;
  const double n = static_cast<double>(u.size());
  for (size_t i = 0; i < u.size(); ++i) {
    ks = std::max(ks, std::abs(u[i] - (i + 1) / n));
    ks = std::max(ks, std::abs(u[i] - i / n));
  }
  CHECK(ks < 0.02);
}

TEST_CASE("binary stream dump round-trips") {
  const auto xs = gen_stream({DistKind::Hard, 30.0, 3, 512, false});
  const auto path =
      (std::filesystem::temp_directory_path() / "qf_stream_test.f64").string();
  write_stream_f64(path, xs);
  CHECK(read_stream_f64(path) == xs);
  std::remove(path.c_str());
  CHECK_THROWS(read_stream_f64("/nonexistent/qf.f64"));
}

TEST_CASE("parse_dist") {
  CHECK(parse_dist("uniform01") == DistKind::Uniform01);
  CHECK(parse_dist("signed_log_uniform") == DistKind::SignedLogUniform);
  CHECK(parse_dist("hard") == DistKind::Hard);
  CHECK_THROWS_AS(parse_dist("zipf"), std::invalid_argument);
}
