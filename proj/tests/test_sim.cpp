#include <doctest.h>

#include <cmath>

#include "couponrace/sim.hpp"
#include "couponrace/solver.hpp"
#include "couponrace/tie_skeleton.hpp"

using namespace couponrace;

namespace {
constexpr std::uint64_t kSeed = 20250824;
}

TEST_CASE("per-trial streams are pure functions of (seed, trial)") {
  TrialRng a(kSeed, 17), b(kSeed, 17), c(kSeed, 18);
  bool differs = false;
  for (int i = 0; i < 16; ++i) {
    const std::uint64_t x = a.next();
    CHECK(x == b.next());
    if (x != c.next()) differs = true;
  }
  CHECK(differs);
}

TEST_CASE("estimates are bit-identical under any worker count") {
  const auto e1 = estimate_b(5, 20000, kSeed, SimMode::RoundChain, 1);
  const auto e3 = estimate_b(5, 20000, kSeed, SimMode::RoundChain, 3);
  const auto e8 = estimate_b(5, 20000, kSeed, SimMode::RoundChain, 8);
  CHECK(e1.estimate == e3.estimate);
  CHECK(e1.estimate == e8.estimate);
  const auto c1 = estimate_b(5, 20000, kSeed, SimMode::ChangedChain, 1);
  const auto c5 = estimate_b(5, 20000, kSeed, SimMode::ChangedChain, 5);
  CHECK(c1.estimate == c5.estimate);
}

TEST_CASE("d=1 is always a terminal tie") {
  TrialRng rng(kSeed, 0);
  const TrialOutcome out = simulate_round_trial(1, rng);
  CHECK(out.winner == Winner::Tie);
  CHECK(out.rounds == 1);
  CHECK_FALSE(out.never_behind_winner);
  CHECK(estimate_b(1, 100, kSeed, SimMode::RoundChain).estimate == 0.0);
  CHECK(estimate_b(1, 100, kSeed, SimMode::ChangedChain).estimate == 0.0);
}

TEST_CASE("round-chain estimate matches the exact solver at d=2") {
  const auto est = estimate_b(2, 200000, kSeed, SimMode::RoundChain, 4);
  CHECK(std::abs(est.estimate - 2.0 / 3.0) <= 4.0 * est.stderr_);
  CHECK(est.stderr_ ==
        std::sqrt(est.estimate * (1.0 - est.estimate) / 200000.0));
}

TEST_CASE("changed-chain absorbed masses at d=2") {
  std::uint64_t s = 0, l = 0, t = 0;
  const std::uint64_t n = 200000;
  for (std::uint64_t i = 0; i < n; ++i) {
    TrialRng rng(kSeed, i);
    switch (simulate_changed_trial(2, 0, 0, rng).absorption) {
      case Absorption::Success: ++s; break;
      case Absorption::Loss: ++l; break;
      case Absorption::TerminalTie: ++t; break;
    }
  }
  const double se = std::sqrt((1.0 / 3.0) * (2.0 / 3.0) / n);
  CHECK(std::abs(s / double(n) - 1.0 / 3.0) <= 4.0 * se);
  CHECK(std::abs(l / double(n) - 1.0 / 3.0) <= 4.0 * se);
  CHECK(std::abs(t / double(n) - 1.0 / 3.0) <= 4.0 * se);
}

TEST_CASE("one-step law from (d-1,0) matches 1, d-1, d-1 over 2d-1") {
  const std::int64_t d = 6;
  std::uint64_t s = 0, t = 0;
  const std::uint64_t n = 200000;
  for (std::uint64_t i = 0; i < n; ++i) {
    TrialRng rng(kSeed, i);
    const TrialOutcome out = simulate_changed_trial(d, d - 1, 0, rng);
    CHECK(out.changed_steps == 1);
    if (out.absorption == Absorption::Success) ++s;
    if (out.absorption == Absorption::TerminalTie) ++t;
  }
  const double p_side = 5.0 / 11.0, p_tie = 1.0 / 11.0;
  CHECK(std::abs(s / double(n) - p_side) <=
        4.0 * std::sqrt(p_side * (1 - p_side) / n));
  CHECK(std::abs(t / double(n) - p_tie) <=
        4.0 * std::sqrt(p_tie * (1 - p_tie) / n));
}

TEST_CASE("every sampled path respects the 2d step bound") {
  for (std::int64_t d : {3, 11}) {
    for (std::uint64_t i = 0; i < 10000; ++i) {
      TrialRng r1(kSeed, i);
      CHECK(simulate_round_trial(d, r1).changed_steps <= 2 * d);
      TrialRng r2(kSeed ^ 1, i);
      CHECK(simulate_changed_trial(d, 0, 0, r2).changed_steps <= 2 * d);
    }
  }
}

TEST_CASE("categorical reduction agrees with literal coupon identities") {
  const std::int64_t d = 5;
  const std::uint64_t n = 50000;
  std::uint64_t hits_cat = 0, hits_id = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    TrialRng r1(kSeed, i);
    if (simulate_round_trial(d, r1).never_behind_winner) ++hits_cat;
    TrialRng r2(kSeed + 99, i);
    if (simulate_round_trial_identity(d, r2).never_behind_winner) ++hits_id;
  }
  const double p = solve_f64(d).b;
  const double se = std::sqrt(p * (1 - p) / n);
  CHECK(std::abs(hits_cat / double(n) - p) <= 4.0 * se);
  CHECK(std::abs(hits_id / double(n) - p) <= 4.0 * se);
}

TEST_CASE("round and changed modes agree with each other and the solver") {
  for (std::int64_t d : {5, 20}) {
    const double exact = solve_f64(d).b;
    const auto r = estimate_b(d, 200000, kSeed, SimMode::RoundChain, 4);
    const auto c = estimate_b(d, 200000, kSeed + 1, SimMode::ChangedChain, 4);
    CHECK(std::abs(r.estimate - exact) <= 4.0 * r.stderr_);
    CHECK(std::abs(c.estimate - exact) <= 4.0 * c.stderr_);
    const double joint = std::hypot(r.stderr_, c.stderr_);
    CHECK(std::abs(r.estimate - c.estimate) <= 4.0 * joint);
  }
}

TEST_CASE("wedge-projection absorption masses agree across modes") {
  const std::int64_t d = 5;
  const auto vm = visit_measure<double>(d, 0, 0);
  const auto round = estimate_absorption(d, 200000, kSeed, SimMode::RoundChain, 4);
  const auto changed =
      estimate_absorption(d, 200000, kSeed + 7, SimMode::ChangedChain, 4);
  const std::uint64_t n = 200000;
  for (const auto& [est, exact] :
       {std::pair{round.success, vm.success}, {round.loss, vm.loss},
        {round.tie, vm.tie}, {changed.success, vm.success},
        {changed.loss, vm.loss}, {changed.tie, vm.tie}}) {
    const double se = std::sqrt(exact * (1 - exact) / double(n));
    CHECK(std::abs(est - exact) <= 4.0 * se);
  }
}

TEST_CASE("empirical first-break law at d=2") {
  const auto est = estimate_first_break(2, 200000, kSeed, 4);
  const double se = std::sqrt((2.0 / 3.0) * (1.0 / 3.0) / 200000.0);
  CHECK(std::abs(est.pmf[1] - 2.0 / 3.0) <= 4.0 * se);
  CHECK(std::abs(est.no_break - 1.0 / 3.0) <= 4.0 * se);
}

TEST_CASE("conditional on a break, either player breaks with frequency 1/2") {
  const auto est = estimate_first_break(10, 100000, kSeed, 4);
  CHECK(std::abs(est.breaker_a_share - 0.5) <=
        4.0 * std::sqrt(0.25 / 100000.0));
}

TEST_CASE("empirical scaled mean of the first-break level at d=100") {
  const std::int64_t d = 100;
  const std::uint64_t n = 100000;
  const auto est = estimate_first_break(d, n, kSeed, 4);
  const auto m1 = scaled_moment(d, 1.0);
  const auto m2 = scaled_moment(d, 2.0);
  const double sd = std::sqrt(m2.unconditional - m1.unconditional * m1.unconditional);
  CHECK(std::abs(est.mean_scaled - m1.unconditional) <=
        4.0 * sd / std::sqrt(double(n)));
}

TEST_CASE("simulation guards") {
  CHECK_THROWS_AS(estimate_b(5, 0, kSeed, SimMode::RoundChain),
                  std::invalid_argument);
  TrialRng rng(kSeed, 0);
  CHECK_THROWS_AS(simulate_changed_trial(5, 5, 0, rng), std::invalid_argument);
  CHECK_THROWS_AS(simulate_changed_trial(5, 2, 3, rng), std::invalid_argument);
}
