#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "couponrace/numeric.hpp"
#include "couponrace/solver.hpp"
#include "couponrace/wedge.hpp"

namespace couponrace {

// Gambler's-ruin comparison harmonic H(s,g) = (g+1)/(d-s+1).  The formula
// already yields the boundary values H(s,-1) = 0, H(s,d-s) = 1, H(d,0) = 1.
template <class T>
T harmonic(std::int64_t d, std::int64_t s, std::int64_t g) {
  const WedgeState x(d, s, g);  // validates, boundaries and g=-1 included
  return T(x.g + 1) / T(x.d - x.s + 1);
}

// One-step subharmonicity gap of H, closed form (m-g)/((m+1) D(s,g)).
template <class T>
T defect_closed_form(std::int64_t d, std::int64_t s, std::int64_t g) {
  const WedgeState x(d, s, g);
  if (classify(x) != StateClass::Interior)
    throw std::invalid_argument("defect_closed_form: state is not interior");
  const std::int64_t m = d - s;
  const ChangedStepWeights w = changed_weights(x);
  return T(m - g) / (T(m + 1) * T(w.total));
}

// The same gap evaluated from the transition kernel, (PH)(s,g) - H(s,g),
// with the killing branch from g=0 contributing H = 0.
template <class T>
T defect_via_kernel(std::int64_t d, std::int64_t s, std::int64_t g) {
  const WedgeState x(d, s, g);
  if (classify(x) != StateClass::Interior)
    throw std::invalid_argument("defect_via_kernel: state is not interior");
  const ChangedStepWeights w = changed_weights(x);
  CompensatedSum<T> acc;
  acc.add(T(w.w_both) * harmonic<T>(d, s + 1, g));
  if (w.w_a_only != 0) acc.add(T(w.w_a_only) * harmonic<T>(d, s, g + 1));
  if (w.w_b_only != 0 && g >= 1)
    acc.add(T(w.w_b_only) * harmonic<T>(d, s + 1, g - 1));
  return acc.value() / T(w.total) - harmonic<T>(d, s, g);
}

// Optional-stopping audit from one interior start:
//   E H(at absorption) = H(start) + accumulated defect,
// and E H(at absorption) = U(start) + P(terminal tie), since H = 1 on both
// the success boundary and the terminal tie while the tie is not a win.
template <class T>
struct GreenAudit {
  std::int64_t d = 0, s0 = 0, g0 = 0;
  T h_start{};
  T green_sum{};          // sum over interior states of visit * defect
  T expected_h_at_tau{};  // mass-weighted boundary value of H
  T terminal_tie_mass{};
  T u_start{};
  T residual{};               // |h + green - u - tie|
  T relative_overshoot{};     // u/h - 1, the lead-excursion error term
  // Diagnostic split of the exact Green sum by age: s < sqrt(d) ("initial"),
  // sqrt(d) <= s < d/2 ("middle"), s >= d/2 ("terminal").
  T green_initial{}, green_middle{}, green_terminal{};
};

template <class T>
GreenAudit<T> green_audit(const SolveTable<T>& table,
                          const VisitMeasure<T>& vm) {
  if (table.d != vm.d)
    throw std::invalid_argument("green_audit: table and measure disagree on d");
  const std::int64_t d = vm.d;
  GreenAudit<T> a;
  a.d = d;
  a.s0 = vm.s0;
  a.g0 = vm.g0;
  a.h_start = harmonic<T>(d, vm.s0, vm.g0);
  CompensatedSum<T> green, init, mid, term;
  const std::int64_t sq = static_cast<std::int64_t>(
      std::sqrt(static_cast<double>(d)));
  for (std::int64_t s = vm.s0; s < d; ++s)
    for (std::int64_t g = 0; g < d - s; ++g) {
      const T& v = vm.at(s, g);
      if (v == T(0)) continue;
      const T contrib = v * defect_closed_form<T>(d, s, g);
      green.add(contrib);
      if (s < sq)
        init.add(contrib);
      else if (s < d / 2)
        mid.add(contrib);
      else
        term.add(contrib);
    }
  a.green_sum = green.value();
  a.green_initial = init.value();
  a.green_middle = mid.value();
  a.green_terminal = term.value();
  a.terminal_tie_mass = vm.tie;
  a.expected_h_at_tau = vm.success + vm.tie;  // H = 1 at both, 0 at loss
  a.u_start = table.value_at(vm.s0, vm.g0);
  a.residual = abs_value<T>(a.h_start + a.green_sum - a.u_start -
                            a.terminal_tie_mass);
  a.relative_overshoot = a.u_start / a.h_start - T(1);
  return a;
}

template <class T>
GreenAudit<T> green_audit(std::int64_t d, std::int64_t s0, std::int64_t g0) {
  const SolveTable<T> table = solve<T>(d, /*keep_full=*/true);
  const VisitMeasure<T> vm = visit_measure<T>(d, s0, g0);
  return green_audit(table, vm);
}

template <class T>
T lead_excursion_ratio(const SolveTable<T>& table, std::int64_t s0,
                       std::int64_t g0) {
  return table.value_at(s0, g0) / harmonic<T>(table.d, s0, g0);
}

// Backward solve of the accumulated-defect equation G = defect + PG with
// G = 0 on every absorbing state.  G(s,g) equals the expected accumulated
// defect from (s,g), so the optional-stopping identity can be checked from
// every interior start with a single sweep.
template <class T>
std::vector<std::vector<T>> accumulated_defect_table(std::int64_t d) {
  std::vector<std::vector<T>> tab(static_cast<std::size_t>(d) + 1);
  tab[static_cast<std::size_t>(d)] = {T(0)};
  for (std::int64_t s = d - 1; s >= 0; --s) {
    const std::int64_t m = d - s;
    auto& row = tab[static_cast<std::size_t>(s)];
    row.assign(static_cast<std::size_t>(m) + 1, T(0));  // success boundary 0
    const auto& below = tab[static_cast<std::size_t>(s) + 1];
    for (std::int64_t g = m - 1; g >= 0; --g) {
      const ChangedStepWeights w = changed_weights(WedgeState(d, s, g));
      CompensatedSum<T> acc;
      acc.add(T(w.w_both) * below[static_cast<std::size_t>(g)]);
      if (w.w_a_only != 0)
        acc.add(T(w.w_a_only) * row[static_cast<std::size_t>(g) + 1]);
      if (w.w_b_only != 0 && g >= 1)
        acc.add(T(w.w_b_only) * below[static_cast<std::size_t>(g) - 1]);
      row[static_cast<std::size_t>(g)] =
          defect_closed_form<T>(d, s, g) + acc.value() / T(w.total);
    }
  }
  return tab;
}

// Backward hitting probability of the terminal tie (d,0).
template <class T>
std::vector<std::vector<T>> terminal_tie_table(std::int64_t d) {
  std::vector<std::vector<T>> tab(static_cast<std::size_t>(d) + 1);
  tab[static_cast<std::size_t>(d)] = {T(1)};
  for (std::int64_t s = d - 1; s >= 0; --s) {
    const std::int64_t m = d - s;
    auto& row = tab[static_cast<std::size_t>(s)];
    row.assign(static_cast<std::size_t>(m) + 1, T(0));
    const auto& below = tab[static_cast<std::size_t>(s) + 1];
    for (std::int64_t g = m - 1; g >= 0; --g) {
      const ChangedStepWeights w = changed_weights(WedgeState(d, s, g));
      CompensatedSum<T> acc;
      acc.add(T(w.w_both) * below[static_cast<std::size_t>(g)]);
      if (w.w_a_only != 0)
        acc.add(T(w.w_a_only) * row[static_cast<std::size_t>(g) + 1]);
      if (w.w_b_only != 0 && g >= 1)
        acc.add(T(w.w_b_only) * below[static_cast<std::size_t>(g) - 1]);
      row[static_cast<std::size_t>(g)] = acc.value() / T(w.total);
    }
  }
  return tab;
}

// P(reach age a before absorption, in a non-loss state), a = s0..d.  Entry
// into column a happens only on a transition from column a-1; the killing
// step from (a-1,0) lands in the loss sink and does not count.
template <class T>
struct SurvivalCurve {
  std::int64_t d = 0, s0 = 0, g0 = 0;
  std::vector<T> values;  // values[a - s0] = P(tau_a < tau)

  const T& at_age(std::int64_t a) const {
    return values[static_cast<std::size_t>(a - s0)];
  }
};

template <class T>
SurvivalCurve<T> survival_curve(const VisitMeasure<T>& vm) {
  SurvivalCurve<T> c;
  c.d = vm.d;
  c.s0 = vm.s0;
  c.g0 = vm.g0;
  c.values.assign(static_cast<std::size_t>(vm.d - vm.s0) + 1, T(0));
  c.values[0] = T(1);
  for (std::int64_t a = vm.s0 + 1; a <= vm.d; ++a) {
    CompensatedSum<T> acc;
    for (std::int64_t g = 0; g < vm.d - (a - 1); ++g) {
      const T& v = vm.at(a - 1, g);
      if (v == T(0)) continue;
      const ChangedStepWeights w = changed_weights(WedgeState(vm.d, a - 1, g));
      std::int64_t enter = w.w_both;
      if (g >= 1) enter += w.w_b_only;
      acc.add(v * T(enter) / T(w.total));
    }
    c.values[static_cast<std::size_t>(a - vm.s0)] = acc.value();
  }
  return c;
}

// Per-age occupation check: expected visits to age s, divided by the
// probability of reaching age s, must not exceed 2 at any age.
template <class T>
struct OccupationAudit {
  std::int64_t d = 0, s0 = 0, g0 = 0;
  std::vector<T> expected_visits;  // index a - s0, interior states only
  std::vector<T> ratio;            // expected_visits / P(tau_a < tau)
  T max_ratio{};
};

template <class T>
OccupationAudit<T> occupation_audit(const VisitMeasure<T>& vm) {
  const SurvivalCurve<T> surv = survival_curve(vm);
  OccupationAudit<T> a;
  a.d = vm.d;
  a.s0 = vm.s0;
  a.g0 = vm.g0;
  a.expected_visits.assign(static_cast<std::size_t>(vm.d - vm.s0), T(0));
  a.ratio.assign(static_cast<std::size_t>(vm.d - vm.s0), T(0));
  a.max_ratio = T(0);
  for (std::int64_t s = vm.s0; s < vm.d; ++s) {
    CompensatedSum<T> acc;
    for (std::int64_t g = 0; g < vm.d - s; ++g) acc.add(vm.at(s, g));
    const T visits = acc.value();
    a.expected_visits[static_cast<std::size_t>(s - vm.s0)] = visits;
    const T& reach = surv.at_age(s);
    if (reach > T(0)) {
      const T r = visits / reach;
      a.ratio[static_cast<std::size_t>(s - vm.s0)] = r;
      if (r > a.max_ratio) a.max_ratio = r;
    }
  }
  return a;
}

}  // namespace couponrace
