// Copyright 2026 The schedq Authors.
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

#ifndef SCHEDQ_SCALED_DOUBLE_HPP_
#define SCHEDQ_SCALED_DOUBLE_HPP_

#include <cmath>
#include <cstdint>
#include <limits>

namespace schedq {

// A double mantissa with a separate power-of-two exponent, so that products
// of many probabilities stay representable far below 1e-308. The mantissa is
// renormalized lazily, only when it leaves [2^-500, 2^500]; the window is
// narrow enough that the product of two in-range mantissas cannot overflow.
class ScaledDouble {
 public:
  ScaledDouble() = default;
  ScaledDouble(double v) : m_(v) { tidy(); }  // NOLINT: implicit by design

  static ScaledDouble from_log(double log_value) {
    if (log_value == -std::numeric_limits<double>::infinity()) return {};
    const double log2v = log_value / std::log(2.0);
    const double whole = std::floor(log2v);
    ScaledDouble r;
    r.m_ = std::exp2(log2v - whole);
    r.e_ = static_cast<std::int64_t>(whole);
    return r;
  }

  double mantissa() const { return m_; }
  std::int64_t exponent() const { return e_; }
  bool is_zero() const { return m_ == 0.0; }

  // Natural log of |value|; -inf for zero.
  double log() const {
    if (m_ == 0.0) return -std::numeric_limits<double>::infinity();
    return std::log(std::abs(m_)) + static_cast<double>(e_) * std::log(2.0);
  }

  // Plain double; underflows to 0 or overflows to inf when out of range.
  double to_double() const {
    if (m_ == 0.0) return 0.0;
    if (e_ > 4096) return std::copysign(std::numeric_limits<double>::infinity(), m_);
    if (e_ < -4096) return std::copysign(0.0, m_);
    return std::ldexp(m_, static_cast<int>(e_));
  }

  ScaledDouble& operator*=(const ScaledDouble& o) {
    m_ *= o.m_;
    e_ += o.e_;
    tidy();
    return *this;
  }
  ScaledDouble& operator/=(const ScaledDouble& o) {
    m_ /= o.m_;
    e_ -= o.e_;
    tidy();
    return *this;
  }
  ScaledDouble& operator+=(const ScaledDouble& o) {
    if (o.m_ == 0.0) return *this;
    if (m_ == 0.0) return *this = o;
    const std::int64_t d = e_ - o.e_;
    if (d >= 0) {
      if (d <= kDropGap) m_ += std::ldexp(o.m_, static_cast<int>(-d));
    } else if (-d > kDropGap) {
      *this = o;
      return *this;
    } else {
      m_ = std::ldexp(m_, static_cast<int>(d)) + o.m_;
      e_ = o.e_;
    }
    tidy();
    return *this;
  }
  ScaledDouble& operator-=(const ScaledDouble& o) { return *this += -o; }

  ScaledDouble operator-() const {
    ScaledDouble r = *this;
    r.m_ = -r.m_;
    return r;
  }

  friend ScaledDouble operator*(ScaledDouble a, const ScaledDouble& b) { return a *= b; }
  friend ScaledDouble operator/(ScaledDouble a, const ScaledDouble& b) { return a /= b; }
  friend ScaledDouble operator+(ScaledDouble a, const ScaledDouble& b) { return a += b; }
  friend ScaledDouble operator-(ScaledDouble a, const ScaledDouble& b) { return a -= b; }

  friend bool operator<(const ScaledDouble& a, const ScaledDouble& b) {
    return (a - b).m_ < 0.0;
  }

 private:
  // Beyond this exponent gap the smaller addend is below 2^-76 relative.
  static constexpr std::int64_t kDropGap = 1100;

  void tidy() {
    const double a = std::abs(m_);
    if (a == 0.0) {
      e_ = 0;
    } else if (a > 0x1.0p500 || a < 0x1.0p-500) {
      int k = 0;
      m_ = std::frexp(m_, &k);
      e_ += k;
    }
  }

  double m_ = 0.0;
  std::int64_t e_ = 0;
};

}  // namespace schedq

#endif  // SCHEDQ_SCALED_DOUBLE_HPP_
