#include "couponrace/sim.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <thread>
#include <vector>

#include "couponrace/wedge.hpp"

namespace couponrace {

namespace {

inline std::uint64_t mix64(std::uint64_t z) {
  z += 0x9E3779B97F4A7C15ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

}  // namespace

TrialRng::TrialRng(std::uint64_t seed, std::uint64_t trial)
    : state_(mix64(mix64(seed) ^ (trial * 0xD1B54A32D192ED03ULL))) {}

std::uint64_t TrialRng::next() {
  state_ += 0x9E3779B97F4A7C15ULL;
  std::uint64_t z = state_;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t TrialRng::below(std::uint64_t n) {
  return static_cast<std::uint64_t>(
      (static_cast<unsigned __int128>(next()) * n) >> 64);
}

namespace {

// Shared bookkeeping for both round-trial variants.
struct RaceTracker {
  std::int64_t d;
  std::int64_t ca = 0, cb = 0;
  bool a_ok = true, b_ok = true;
  bool a_absorbed = false;
  Absorption absorption = Absorption::Loss;
  std::int64_t first_break = kNoBreak;
  Winner first_breaker = Winner::Tie;
  std::int64_t changed_steps = 0;

  explicit RaceTracker(std::int64_t d_) : d(d_) {}

  // Apply one nonself round outcome.
  void step(bool a_new, bool b_new) {
    if (a_new || b_new) {
      if (first_break == kNoBreak && ca == cb && a_new != b_new) {
        first_break = ca;
        first_breaker = a_new ? Winner::A : Winner::B;
      }
      if (a_new) ++ca;
      if (b_new) ++cb;
      ++changed_steps;
      assert(changed_steps <= 2 * d);  // each nonself round raises ca+cb
      if (ca >= cb) {
        if (!a_absorbed && ca == d) {
          a_absorbed = true;
          absorption =
              cb == d ? Absorption::TerminalTie : Absorption::Success;
        }
      } else {
        a_ok = false;
        if (!a_absorbed) {
          a_absorbed = true;
          absorption = Absorption::Loss;
        }
      }
      if (cb < ca) b_ok = false;
    }
  }

  bool done() const { return ca == d || cb == d; }

  TrialOutcome outcome() const {
    TrialOutcome out;
    if (ca == d && cb == d)
      out.winner = Winner::Tie;
    else
      out.winner = ca == d ? Winner::A : Winner::B;
    out.never_behind_winner = (out.winner == Winner::A && a_ok) ||
                              (out.winner == Winner::B && b_ok);
    out.first_break_level = first_break;
    out.first_breaker = first_breaker;
    out.changed_steps = changed_steps;
    out.absorption = absorption;
    return out;
  }
};

}  // namespace

TrialOutcome simulate_round_trial(std::int64_t d, TrialRng& rng) {
  if (d < 1) throw std::invalid_argument("simulate_round_trial: d < 1");
  RaceTracker race(d);
  const std::uint64_t dsq = static_cast<std::uint64_t>(d) *
                            static_cast<std::uint64_t>(d);
  std::int64_t rounds = 0;
  while (!race.done()) {
    ++rounds;
    // Joint law of (A new, B new): independent misses with d-ca and d-cb
    // types still unseen.
    const std::uint64_t wa = static_cast<std::uint64_t>(d - race.ca);
    const std::uint64_t wb = static_cast<std::uint64_t>(d - race.cb);
    const std::uint64_t u = rng.below(dsq);
    const std::uint64_t w_both = wa * wb;
    const std::uint64_t w_a = wa * static_cast<std::uint64_t>(race.cb);
    const std::uint64_t w_b = static_cast<std::uint64_t>(race.ca) * wb;
    if (u < w_both)
      race.step(true, true);
    else if (u < w_both + w_a)
      race.step(true, false);
    else if (u < w_both + w_a + w_b)
      race.step(false, true);
    // else: self-loop round
  }
  TrialOutcome out = race.outcome();
  out.rounds = rounds;
  return out;
}

TrialOutcome simulate_round_trial_identity(std::int64_t d, TrialRng& rng) {
  if (d < 1) throw std::invalid_argument("simulate_round_trial_identity: d < 1");
  RaceTracker race(d);
  std::vector<bool> seen_a(static_cast<std::size_t>(d), false);
  std::vector<bool> seen_b(static_cast<std::size_t>(d), false);
  const std::uint64_t ud = static_cast<std::uint64_t>(d);
  std::int64_t rounds = 0;
  while (!race.done()) {
    ++rounds;
    const std::size_t coupon_a = static_cast<std::size_t>(rng.below(ud));
    const std::size_t coupon_b = static_cast<std::size_t>(rng.below(ud));
    const bool a_new = !seen_a[coupon_a];
    const bool b_new = !seen_b[coupon_b];
    seen_a[coupon_a] = true;
    seen_b[coupon_b] = true;
    race.step(a_new, b_new);
  }
  TrialOutcome out = race.outcome();
  out.rounds = rounds;
  return out;
}

TrialOutcome simulate_changed_trial(std::int64_t d, std::int64_t s0,
                                    std::int64_t g0, TrialRng& rng) {
  WedgeState x(d, s0, g0);
  if (classify(x) != StateClass::Interior)
    throw std::invalid_argument("simulate_changed_trial: start not interior");
  const std::int64_t max_steps = 2 * d - (2 * s0 + g0);
  TrialOutcome out;
  std::int64_t s = s0, g = g0;
  while (true) {
    const ChangedStepWeights w = changed_weights(WedgeState(d, s, g));
    const std::uint64_t u = rng.below(static_cast<std::uint64_t>(w.total));
    if (out.first_break_level == kNoBreak && g == 0 &&
        u >= static_cast<std::uint64_t>(w.w_both)) {
      out.first_break_level = s;
      out.first_breaker =
          u < static_cast<std::uint64_t>(w.w_both + w.w_a_only) ? Winner::A
                                                                : Winner::B;
    }
    if (u < static_cast<std::uint64_t>(w.w_both)) {
      ++s;
    } else if (u < static_cast<std::uint64_t>(w.w_both + w.w_a_only)) {
      ++g;
    } else {
      ++s;
      --g;
    }
    ++out.changed_steps;
    if (out.changed_steps > max_steps)
      throw std::logic_error("simulate_changed_trial: step bound violated");
    const StateClass c = classify(WedgeState(d, s, g));
    if (c == StateClass::Interior) continue;
    switch (c) {
      case StateClass::Success:
        out.absorption = Absorption::Success;
        out.winner = Winner::A;
        out.never_behind_winner = true;
        break;
      case StateClass::Loss:
        out.absorption = Absorption::Loss;
        out.winner = Winner::B;
        out.never_behind_winner = false;
        break;
      default:
        out.absorption = Absorption::TerminalTie;
        out.winner = Winner::Tie;
        out.never_behind_winner = false;
        break;
    }
    return out;
  }
}

namespace {

// Partition [0, trials) across workers and merge integer accumulators; the
// result is a pure function of (parameters, seed) for any worker count.
template <class PerTrial, class Acc>
void run_trials(std::uint64_t trials, int workers, const PerTrial& per_trial,
                std::vector<Acc>& accs) {
  if (workers < 1) workers = 1;
  const std::uint64_t n = trials;
  const int nw = static_cast<int>(
      std::min<std::uint64_t>(static_cast<std::uint64_t>(workers), n ? n : 1));
  accs.assign(static_cast<std::size_t>(nw), Acc{});
  std::vector<std::thread> pool;
  const std::uint64_t chunk = (n + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const std::uint64_t lo = chunk * static_cast<std::uint64_t>(w);
    const std::uint64_t hi = std::min(n, lo + chunk);
    pool.emplace_back([&, w, lo, hi] {
      for (std::uint64_t i = lo; i < hi; ++i) per_trial(i, accs[w]);
    });
  }
  for (auto& t : pool) t.join();
}

}  // namespace

SimEstimate estimate_b(std::int64_t d, std::uint64_t trials,
                       std::uint64_t seed, SimMode mode, int workers) {
  if (trials < 1) throw std::invalid_argument("estimate_b: trials < 1");
  struct Acc {
    std::uint64_t hits = 0;
  };
  std::vector<Acc> accs;
  if (mode == SimMode::RoundChain) {
    run_trials(
        trials, workers,
        [&](std::uint64_t i, Acc& a) {
          TrialRng rng(seed, i);
          if (simulate_round_trial(d, rng).never_behind_winner) ++a.hits;
        },
        accs);
  } else {
    run_trials(
        trials, workers,
        [&](std::uint64_t i, Acc& a) {
          TrialRng rng(seed, i);
          if (d == 1) return;  // only path is the terminal tie
          if (simulate_changed_trial(d, 0, 0, rng).absorption ==
              Absorption::Success)
            ++a.hits;
        },
        accs);
  }
  std::uint64_t hits = 0;
  for (const Acc& a : accs) hits += a.hits;
  const double p = static_cast<double>(hits) / static_cast<double>(trials);
  SimEstimate est;
  est.trials = trials;
  est.seed = seed;
  est.mode = mode;
  const double base_se =
      std::sqrt(p * (1.0 - p) / static_cast<double>(trials));
  if (mode == SimMode::RoundChain) {
    est.estimate = p;
    est.stderr_ = base_se;
  } else {
    est.estimate = 2.0 * p;
    est.stderr_ = 2.0 * base_se;
  }
  return est;
}

FirstBreakEstimate estimate_first_break(std::int64_t d, std::uint64_t trials,
                                        std::uint64_t seed, int workers) {
  if (d < 2) throw std::invalid_argument("estimate_first_break: d < 2");
  if (trials < 1)
    throw std::invalid_argument("estimate_first_break: trials < 1");
  struct Acc {
    std::vector<std::uint64_t> counts;
    std::uint64_t no_break = 0;
    std::uint64_t broken_by_a = 0;
    std::uint64_t broken = 0;
  };
  std::vector<Acc> accs;
  run_trials(
      trials, workers,
      [&](std::uint64_t i, Acc& a) {
        if (a.counts.empty())
          a.counts.assign(static_cast<std::size_t>(d), 0);
        TrialRng rng(seed, i);
        const TrialOutcome out = simulate_round_trial(d, rng);
        if (out.first_break_level == kNoBreak) {
          ++a.no_break;
        } else {
          ++a.counts[static_cast<std::size_t>(out.first_break_level)];
          ++a.broken;
          if (out.first_breaker == Winner::A) ++a.broken_by_a;
        }
      },
      accs);
  FirstBreakEstimate est;
  est.d = d;
  est.trials = trials;
  est.seed = seed;
  est.pmf.assign(static_cast<std::size_t>(d), 0.0);
  std::uint64_t no_break = 0, broken = 0, broken_by_a = 0;
  std::vector<std::uint64_t> counts(static_cast<std::size_t>(d), 0);
  for (const Acc& a : accs) {
    no_break += a.no_break;
    broken += a.broken;
    broken_by_a += a.broken_by_a;
    for (std::size_t k = 0; k < a.counts.size(); ++k)
      counts[k] += a.counts[k];
  }
  double mean = 0.0;
  const double sqd = std::sqrt(static_cast<double>(d));
  for (std::int64_t k = 1; k <= d - 1; ++k) {
    const double f = static_cast<double>(counts[static_cast<std::size_t>(k)]) /
                     static_cast<double>(trials);
    est.pmf[static_cast<std::size_t>(k)] = f;
    mean += f * static_cast<double>(k) / sqd;
  }
  est.no_break =
      static_cast<double>(no_break) / static_cast<double>(trials);
  mean += est.no_break * static_cast<double>(d) / sqd;
  est.mean_scaled = mean;
  est.breaker_a_share =
      broken > 0 ? static_cast<double>(broken_by_a) / static_cast<double>(broken)
                 : 0.0;
  return est;
}

AbsorptionEstimate estimate_absorption(std::int64_t d, std::uint64_t trials,
                                       std::uint64_t seed, SimMode mode,
                                       int workers) {
  if (trials < 1)
    throw std::invalid_argument("estimate_absorption: trials < 1");
  struct Acc {
    std::uint64_t success = 0, loss = 0, tie = 0;
  };
  std::vector<Acc> accs;
  run_trials(
      trials, workers,
      [&](std::uint64_t i, Acc& a) {
        TrialRng rng(seed, i);
        const TrialOutcome out =
            mode == SimMode::RoundChain
                ? simulate_round_trial(d, rng)
                : simulate_changed_trial(d, 0, 0, rng);
        switch (out.absorption) {
          case Absorption::Success: ++a.success; break;
          case Absorption::Loss: ++a.loss; break;
          case Absorption::TerminalTie: ++a.tie; break;
        }
      },
      accs);
  AbsorptionEstimate est;
  est.trials = trials;
  std::uint64_t s = 0, l = 0, t = 0;
  for (const Acc& a : accs) {
    s += a.success;
    l += a.loss;
    t += a.tie;
  }
  const double n = static_cast<double>(trials);
  est.success = static_cast<double>(s) / n;
  est.loss = static_cast<double>(l) / n;
  est.tie = static_cast<double>(t) / n;
  return est;
}

}  // namespace couponrace
