// Copyright 2026 The twopass Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef TWOPASS_FST_WEIGHT_H_
#define TWOPASS_FST_WEIGHT_H_

#include <algorithm>
#include <cmath>
#include <limits>

namespace twopass {

// Tropical semiring over costs in nats: Plus = min, Times = +.
class TropicalWeight {
 public:
  constexpr TropicalWeight() : value_(0.0) {}
  constexpr explicit TropicalWeight(double value) : value_(value) {}

  static constexpr TropicalWeight One() { return TropicalWeight(0.0); }
  static constexpr TropicalWeight Zero() {
    return TropicalWeight(std::numeric_limits<double>::infinity());
  }

  constexpr double Value() const { return value_; }
  bool IsZero() const { return value_ == std::numeric_limits<double>::infinity(); }
  bool IsMember() const { return !std::isnan(value_) && value_ != -std::numeric_limits<double>::infinity(); }

  friend constexpr bool operator==(TropicalWeight a, TropicalWeight b) {
    return a.value_ == b.value_;
  }

 private:
  double value_;
};

inline TropicalWeight Plus(TropicalWeight a, TropicalWeight b) {
  return TropicalWeight(std::min(a.Value(), b.Value()));
}

inline TropicalWeight Times(TropicalWeight a, TropicalWeight b) {
  if (a.IsZero() || b.IsZero()) return TropicalWeight::Zero();
  return TropicalWeight(a.Value() + b.Value());
}

// Left division: the residual r with Times(a, r) == b. Requires a != Zero.
inline TropicalWeight Divide(TropicalWeight b, TropicalWeight a) {
  if (b.IsZero()) return TropicalWeight::Zero();
  return TropicalWeight(b.Value() - a.Value());
}

inline bool ApproxEqual(TropicalWeight a, TropicalWeight b, double tol = 1e-9) {
  if (a.IsZero() || b.IsZero()) return a.IsZero() && b.IsZero();
  return std::abs(a.Value() - b.Value()) <= tol;
}

constexpr double kInfinity = std::numeric_limits<double>::infinity();

}  // namespace twopass

#endif  // TWOPASS_FST_WEIGHT_H_
