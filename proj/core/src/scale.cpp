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

#include "qf/scale.hpp"

#include <algorithm>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace qf {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}  // namespace

double scale_normalizer(uint64_t n, double delta) {
  const double z = 4.0 * std::log(static_cast<double>(n) / delta) + 24.0;
  return std::max(z, 1.0);
}

ScaleFunction ScaleFunction::asymmetric(ScaleKind kind, double alpha) {
  if (!(alpha > 0.0 && alpha <= 0.5)) {
    throw std::invalid_argument("asymmetric alpha must be in (0, 0.5]");
  }
  return ScaleFunction(kind, alpha);
}

ScaleFunction ScaleFunction::parse(const std::string& name, double alpha) {
  if (name == "k0") return k0();
  if (name == "k1") return k1();
  if (name == "k2") return k2();
  if (name == "k3") return k3();
  if (name == "k1_asym") return asymmetric(ScaleKind::K1, alpha);
  if (name == "k2_asym") return asymmetric(ScaleKind::K2, alpha);
  if (name == "k3_asym") return asymmetric(ScaleKind::K3, alpha);
  throw std::invalid_argument("unknown scale function: " + name);
}

std::string ScaleFunction::name() const {
  std::string base = "k" + std::to_string(static_cast<int>(kind_));
  return is_asymmetric() ? base + "_asym" : base;
}

double ScaleFunction::base_eval(double q, double z) const {
  switch (kind_) {
    case ScaleKind::K0:
      return q / 2.0;
    case ScaleKind::K1:
      return std::asin(2.0 * q - 1.0) / kTwoPi;
    case ScaleKind::K2:
      if (q <= 0.0) return -kInf;
      if (q >= 1.0) return kInf;
      return std::log(q / (1.0 - q)) / z;
    case ScaleKind::K3:
      if (q <= 0.0) return -kInf;
      if (q >= 1.0) return kInf;
      if (q <= 0.5) return std::log(2.0 * q) / z;
      return -std::log(2.0 * (1.0 - q)) / z;
  }
  return 0.0;
}

double ScaleFunction::base_derivative(double q, double z) const {
  switch (kind_) {
    case ScaleKind::K0:
      return 0.5;
    case ScaleKind::K1:
      return 1.0 / (kTwoPi * std::sqrt(q * (1.0 - q)));
    case ScaleKind::K2:
      return 1.0 / (z * q * (1.0 - q));
    case ScaleKind::K3:
      return q <= 0.5 ? 1.0 / (z * q) : 1.0 / (z * (1.0 - q));
  }
  return 0.0;
}

double ScaleFunction::base_inverse(double y, double z) const {
  switch (kind_) {
    case ScaleKind::K0:
      return std::clamp(2.0 * y, 0.0, 1.0);
    case ScaleKind::K1: {
      if (y <= -0.25) return 0.0;
      if (y >= 0.25) return 1.0;
      return (std::sin(kTwoPi * y) + 1.0) / 2.0;
    }
    case ScaleKind::K2: {
      const double e = y * z;
      return std::clamp(1.0 / (1.0 + std::exp(-e)), 0.0, 1.0);
    }
    case ScaleKind::K3: {
      const double e = y * z;
      const double q = e <= 0.0 ? std::exp(e) / 2.0 : 1.0 - std::exp(-e) / 2.0;
      return std::clamp(q, 0.0, 1.0);
    }
  }
  return 0.0;
}

double ScaleFunction::eval(double q, uint64_t n, double delta) const {
  if (!(q >= 0.0 && q <= 1.0)) {
    throw std::invalid_argument("scale function argument outside [0, 1]");
  }
  const double z = scale_normalizer(n, delta);
  if (is_asymmetric() && q < alpha_) {
    return base_eval(alpha_, z) + base_derivative(alpha_, z) * (q - alpha_);
  }
  return base_eval(q, z);
}

double ScaleFunction::inverse(double y, uint64_t n, double delta) const {
  const double z = scale_normalizer(n, delta);
  if (is_asymmetric()) {
    const double k_alpha = base_eval(alpha_, z);
    if (y < k_alpha) {
      const double q = alpha_ + (y - k_alpha) / base_derivative(alpha_, z);
      return std::clamp(q, 0.0, alpha_);
    }
  }
  return base_inverse(y, z);
}

bool weight_limit_ok(const ScaleFunction& scale, double delta, uint64_t n,
                     uint64_t w_left, uint64_t w) {
  if (w <= 1) return true;  // singletons are always admissible
  const double dn = static_cast<double>(n);
  const double lo = scale.eval(static_cast<double>(w_left) / dn, n, delta);
  const double hi =
      scale.eval(static_cast<double>(w_left + w) / dn, n, delta);
  const double budget = (1.0 / delta) * (1.0 + 1e-9) + 1e-12;
  return hi - lo <= budget;
}

}  // namespace qf
