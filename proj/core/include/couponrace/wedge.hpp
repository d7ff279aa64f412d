#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace couponrace {

// Largest d for which the transition weights (products of two values <= d)
// still fit in int64.
inline constexpr std::int64_t kMaxCouponTypes = 3'037'000'499;

enum class StateClass { Interior, Success, Loss, TerminalTie };

// A point of the triangular state space for the two-collector race with d
// coupon types: s is B's distinct-coupon count, g is A's lead.  g = -1 is
// the loss sink (A fell behind); s stays frozen at the killing column.
struct WedgeState {
  std::int64_t d;
  std::int64_t s;
  std::int64_t g;

  WedgeState(std::int64_t d_, std::int64_t s_, std::int64_t g_)
      : d(d_), s(s_), g(g_) {
    if (d < 1 || d > kMaxCouponTypes)
      throw std::invalid_argument("WedgeState: d out of range, d=" +
                                  std::to_string(d_));
    if (s < 0 || s > d)
      throw std::invalid_argument("WedgeState: s outside [0,d]");
    if (g < -1 || g > d - s)
      throw std::invalid_argument("WedgeState: g outside [-1,d-s]");
  }

  // Coupon types still missing for B.
  std::int64_t missing() const { return d - s; }
};

inline StateClass classify(const WedgeState& x) {
  if (x.g == -1) return StateClass::Loss;
  if (x.s == x.d) return StateClass::TerminalTie;  // (d,0): only g=0 possible
  if (x.g == x.d - x.s) return StateClass::Success;
  return StateClass::Interior;
}

// Self-loop-erased one-round weights at an interior state.  Targets are
// (s+1,g), (s,g+1), (s+1,g-1) in field order; the b_only step from g=0
// routes to the loss sink.
struct ChangedStepWeights {
  std::int64_t w_both;
  std::int64_t w_a_only;
  std::int64_t w_b_only;
  std::int64_t total;
};

inline ChangedStepWeights changed_weights(const WedgeState& x) {
  if (classify(x) != StateClass::Interior)
    throw std::invalid_argument("changed_weights: state is not interior");
  const std::int64_t m = x.d - x.s;
  ChangedStepWeights w{};
  w.w_both = (m - x.g) * m;
  w.w_a_only = (m - x.g) * x.s;
  w.w_b_only = (x.s + x.g) * m;
  w.total = w.w_both + w.w_a_only + w.w_b_only;
  return w;
}

// Raw one-round probabilities (self-loop included), T in {double, mpq_class}.
template <class T>
struct RoundProbabilities {
  T p_both;
  T p_a_only;
  T p_b_only;
  T p_self;
};

template <class T>
RoundProbabilities<T> round_probabilities(const WedgeState& x) {
  const ChangedStepWeights w = changed_weights(x);
  const T dsq = T(x.d) * T(x.d);
  RoundProbabilities<T> p;
  p.p_both = T(w.w_both) / dsq;
  p.p_a_only = T(w.w_a_only) / dsq;
  p.p_b_only = T(w.w_b_only) / dsq;
  p.p_self = T(1) - p.p_both - p.p_a_only - p.p_b_only;
  return p;
}

}  // namespace couponrace
