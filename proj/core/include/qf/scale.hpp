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

#ifndef QF_SCALE_HPP_
#define QF_SCALE_HPP_

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>

namespace qf {

enum class ScaleKind : uint8_t { K0 = 0, K1 = 1, K2 = 2, K3 = 3 };

/// Normalizer Z(N) used by the logarithmic scale functions. Tunable constant
/// chosen so the centroid count stays O(delta) across N; clamped away from
/// zero for tiny digests.
double scale_normalizer(uint64_t n, double delta);

/// A t-digest scale function: one of the four standard kinds, optionally with
/// the asymmetric modification that replaces the function on [0, alpha) by its
/// linearization at alpha (leaving the steep upper tail intact).
class ScaleFunction {
 public:
  static ScaleFunction k0() { return ScaleFunction(ScaleKind::K0, kNoAlpha); }
  static ScaleFunction k1() { return ScaleFunction(ScaleKind::K1, kNoAlpha); }
  static ScaleFunction k2() { return ScaleFunction(ScaleKind::K2, kNoAlpha); }
  static ScaleFunction k3() { return ScaleFunction(ScaleKind::K3, kNoAlpha); }
  static ScaleFunction asymmetric(ScaleKind kind, double alpha);

  /// Parses "k0", "k1", "k2", "k3", "k2_asym", "k3_asym".
  static ScaleFunction parse(const std::string& name, double alpha = 0.01);

  /// k(q). Symmetric K2/K3 return -inf/+inf at q = 0/1. Throws on q outside
  /// [0, 1].
  double eval(double q, uint64_t n, double delta) const;

  /// Closed-form inverse, clamped to [0, 1]; values outside the range of k
  /// map to the nearest endpoint.
  double inverse(double y, uint64_t n, double delta) const;

  ScaleKind kind() const { return kind_; }
  bool is_asymmetric() const { return !std::isnan(alpha_); }
  double alpha() const { return alpha_; }  // NaN when symmetric
  std::string name() const;

  bool operator==(const ScaleFunction& o) const {
    return kind_ == o.kind_ &&
           (alpha_ == o.alpha_ || (std::isnan(alpha_) && std::isnan(o.alpha_)));
  }

 private:
  ScaleFunction(ScaleKind kind, double alpha) : kind_(kind), alpha_(alpha) {}
  static constexpr double kNoAlpha = std::numeric_limits<double>::quiet_NaN();

  double base_eval(double q, double z) const;
  double base_inverse(double y, double z) const;
  double base_derivative(double q, double z) const;

  ScaleKind kind_;
  double alpha_;
};

/// Eq-style weight admissibility check: true iff a centroid of weight w with
/// total weight w_left to its left fits under the 1/delta budget of `scale`.
/// Singletons (w == 1) are always admissible.
bool weight_limit_ok(const ScaleFunction& scale, double delta, uint64_t n,
                     uint64_t w_left, uint64_t w);

}  // namespace qf

#endif  // QF_SCALE_HPP_
