#pragma once

#include <cmath>
#include <cstdint>
#include <type_traits>

#include <gmpxx.h>

namespace couponrace {

using Rational = mpq_class;

// Neumaier-compensated accumulator for doubles; exact passthrough for
// rationals so the same templated code serves both backends.
template <class T>
class CompensatedSum {
 public:
  void add(const T& x) { sum_ += x; }
  T value() const { return sum_; }

 private:
  T sum_{0};
};

template <>
class CompensatedSum<double> {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x))
      comp_ += (sum_ - t) + x;
    else
      comp_ += (x - t) + sum_;
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

template <class T>
T abs_value(const T& x) {
  if constexpr (std::is_same_v<T, Rational>)
    return abs(x);
  else
    return std::abs(x);
}

inline double to_double(double x) { return x; }
inline double to_double(const Rational& x) { return x.get_d(); }

template <class T>
inline constexpr bool is_exact_backend = std::is_same_v<T, Rational>;

}  // namespace couponrace
