#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "couponrace/numeric.hpp"
#include "couponrace/wedge.hpp"

namespace couponrace {

// Rational solves above this d are refused by solve_exact: the entries'
// numerators grow combinatorially and the oracle is only needed at desk
// scale.
inline constexpr std::int64_t kRationalCeiling = 64;

// Backward-DP output.  U(s,g) is the probability that A wins and is never
// behind, started from (s,g); b = 2*U(0,0).
template <class T>
struct SolveTable {
  std::int64_t d = 0;
  T b{};
  std::vector<T> e_row;  // e_row[m] = U(d-m, 0), m = 0..d
  std::vector<T> w_row;  // w_row[m] = U(d-m, 1), m = 1..d; w_row[0] unused
  std::vector<std::vector<T>> full;  // full[s][g], g = 0..d-s; only if kept
  bool has_full = false;

  T value_at(std::int64_t s, std::int64_t g) const {
    const WedgeState x(d, s, g);  // validates
    if (classify(x) == StateClass::Loss) return T(0);
    if (classify(x) == StateClass::Success) return T(1);
    if (classify(x) == StateClass::TerminalTie) return T(0);
    if (has_full) return full[static_cast<std::size_t>(s)]
                             [static_cast<std::size_t>(g)];
    if (g == 0) return e_row[static_cast<std::size_t>(d - s)];
    if (g == 1) return w_row[static_cast<std::size_t>(d - s)];
    throw std::invalid_argument(
        "value_at: full table not retained and g >= 2");
  }
};

namespace detail {

// One interior-row value of the recursion: weighted average of the three
// successor values, accumulated compensated, one final division by D.
template <class T>
T recursion_step(std::int64_t d, std::int64_t s, std::int64_t g,
                 const T& u_both, const T& u_a, const T& u_b) {
  const ChangedStepWeights w = changed_weights(WedgeState(d, s, g));
  CompensatedSum<T> acc;
  acc.add(T(w.w_both) * u_both);
  if (w.w_a_only != 0) acc.add(T(w.w_a_only) * u_a);
  if (w.w_b_only != 0 && g >= 1) acc.add(T(w.w_b_only) * u_b);
  return acc.value() / T(w.total);
}

}  // namespace detail

// Backward sweep over the triangle in decreasing s, then decreasing g, so
// the dependencies U(s+1,.) and U(s,g+1) are already available.  Memory is
// two rolling rows unless keep_full is set.
template <class T>
SolveTable<T> solve(std::int64_t d, bool keep_full = false) {
  if (d < 1) throw std::invalid_argument("solve: d must be >= 1");
  SolveTable<T> out;
  out.d = d;
  out.e_row.assign(static_cast<std::size_t>(d) + 1, T(0));
  out.w_row.assign(static_cast<std::size_t>(d) + 1, T(0));
  out.has_full = keep_full;
  if (keep_full) out.full.resize(static_cast<std::size_t>(d) + 1);

  std::vector<T> below{T(0)};  // row at s = d: U(d,0) = 0
  if (keep_full) out.full[static_cast<std::size_t>(d)] = below;
  out.e_row[0] = T(0);

  for (std::int64_t s = d - 1; s >= 0; --s) {
    const std::int64_t m = d - s;
    std::vector<T> row(static_cast<std::size_t>(m) + 1);
    row[static_cast<std::size_t>(m)] = T(1);  // success boundary g = d-s
    for (std::int64_t g = m - 1; g >= 0; --g) {
      // The row below carries its own boundary entries, including the
      // terminal tie U(d,0) = 0 at the corner.
      const T& u_both = below[static_cast<std::size_t>(g)];
      const T& u_a = row[static_cast<std::size_t>(g) + 1];
      const T u_b = (g >= 1) ? below[static_cast<std::size_t>(g) - 1] : T(0);
      row[static_cast<std::size_t>(g)] =
          detail::recursion_step<T>(d, s, g, u_both, u_a, u_b);
    }
    out.e_row[static_cast<std::size_t>(m)] = row[0];
    out.w_row[static_cast<std::size_t>(m)] = row[1];
    if (keep_full) out.full[static_cast<std::size_t>(s)] = row;
    below = std::move(row);
  }
  out.b = T(2) * out.e_row[static_cast<std::size_t>(d)];
  return out;
}

inline SolveTable<double> solve_f64(std::int64_t d, bool keep_full = false) {
  return solve<double>(d, keep_full);
}

inline SolveTable<Rational> solve_exact(std::int64_t d, bool keep_full = false,
                                        std::int64_t ceiling = kRationalCeiling) {
  if (d > ceiling)
    throw std::invalid_argument(
        "solve_exact: d exceeds the rational cost ceiling");
  return solve<Rational>(d, keep_full);
}

// Max residual of the tie-boundary recursion
//   e_m = m/(2d-m) e_{m-1} + (d-m)/(2d-m) w_m
// over m = 1..d.  Zero on the rational backend by construction.
template <class T>
T tie_recursion_residual(const SolveTable<T>& t) {
  T worst(0);
  for (std::int64_t m = 1; m <= t.d; ++m) {
    const T denom = T(2 * t.d - m);
    const T rhs = (T(m) * t.e_row[static_cast<std::size_t>(m) - 1] +
                   T(t.d - m) * t.w_row[static_cast<std::size_t>(m)]) /
                  denom;
    const T r = abs_value<T>(t.e_row[static_cast<std::size_t>(m)] - rhs);
    if (r > worst) worst = r;
  }
  return worst;
}

// Max residual of the interior recursion itself, over every interior state.
// Requires the full table.
template <class T>
T recursion_residual(const SolveTable<T>& t) {
  if (!t.has_full)
    throw std::invalid_argument("recursion_residual: full table required");
  T worst(0);
  for (std::int64_t s = 0; s < t.d; ++s)
    for (std::int64_t g = 0; g < t.d - s; ++g) {
      const T lhs = t.full[static_cast<std::size_t>(s)]
                          [static_cast<std::size_t>(g)];
      const T rhs = detail::recursion_step<T>(
          t.d, s, g, t.value_at(s + 1, g), t.value_at(s, g + 1),
          g >= 1 ? t.value_at(s + 1, g - 1) : T(0));
      const T r = abs_value<T>(lhs - rhs);
      if (r > worst) worst = r;
    }
  return worst;
}

// Forward occupation solve.  Because 2s+g strictly increases along changed
// transitions the graph is acyclic and every state is visited at most once,
// so visit[s][g] is the probability of ever being at (s,g).
template <class T>
struct VisitMeasure {
  std::int64_t d = 0, s0 = 0, g0 = 0;
  // visit[s][g] over interior states only: s = 0..d-1, g = 0..d-s-1.
  std::vector<std::vector<T>> visit;
  std::vector<T> success_by_col;  // absorbed at (s, d-s), indexed by s
  std::vector<T> loss_by_col;     // absorbed at (s, -1), indexed by s
  T success{}, loss{}, tie{};

  const T& at(std::int64_t s, std::int64_t g) const {
    return visit[static_cast<std::size_t>(s)][static_cast<std::size_t>(g)];
  }
};

template <class T>
VisitMeasure<T> visit_measure(std::int64_t d, std::int64_t s0,
                              std::int64_t g0) {
  const WedgeState start(d, s0, g0);
  if (classify(start) != StateClass::Interior)
    throw std::invalid_argument("visit_measure: start is not interior");
  VisitMeasure<T> vm;
  vm.d = d;
  vm.s0 = s0;
  vm.g0 = g0;
  vm.visit.resize(static_cast<std::size_t>(d));
  for (std::int64_t s = 0; s < d; ++s)
    vm.visit[static_cast<std::size_t>(s)].assign(
        static_cast<std::size_t>(d - s), T(0));
  vm.success_by_col.assign(static_cast<std::size_t>(d) + 1, T(0));
  vm.loss_by_col.assign(static_cast<std::size_t>(d) + 1, T(0));
  vm.visit[static_cast<std::size_t>(s0)][static_cast<std::size_t>(g0)] = T(1);

  for (std::int64_t s = s0; s < d; ++s) {
    for (std::int64_t g = 0; g < d - s; ++g) {
      const T v = vm.at(s, g);
      if (v == T(0)) continue;
      const ChangedStepWeights w = changed_weights(WedgeState(d, s, g));
      const T total(w.total);
      // both -> (s+1, g)
      if (w.w_both != 0) {
        const T mass = v * T(w.w_both) / total;
        if (s + 1 == d && g == 0)
          vm.tie += mass;
        else if (g == d - (s + 1))
          vm.success_by_col[static_cast<std::size_t>(s) + 1] += mass;
        else
          vm.visit[static_cast<std::size_t>(s) + 1]
                  [static_cast<std::size_t>(g)] += mass;
      }
      // A only -> (s, g+1)
      if (w.w_a_only != 0) {
        const T mass = v * T(w.w_a_only) / total;
        if (g + 1 == d - s)
          vm.success_by_col[static_cast<std::size_t>(s)] += mass;
        else
          vm.visit[static_cast<std::size_t>(s)]
                  [static_cast<std::size_t>(g) + 1] += mass;
      }
      // B only -> (s+1, g-1); killing when g = 0
      if (w.w_b_only != 0) {
        const T mass = v * T(w.w_b_only) / total;
        if (g == 0)
          vm.loss_by_col[static_cast<std::size_t>(s) + 1] += mass;
        else
          vm.visit[static_cast<std::size_t>(s) + 1]
                  [static_cast<std::size_t>(g) - 1] += mass;
      }
    }
  }
  CompensatedSum<T> succ, loss;
  for (const T& x : vm.success_by_col) succ.add(x);
  for (const T& x : vm.loss_by_col) loss.add(x);
  vm.success = succ.value();
  vm.loss = loss.value();
  return vm;
}

// Probability of simultaneous completion from an interior start; the only
// gateway is (d-1,0).
template <class T>
T terminal_tie_prob(std::int64_t d, std::int64_t s0, std::int64_t g0) {
  return visit_measure<T>(d, s0, g0).tie;
}

}  // namespace couponrace
