#pragma once

#include <cstdint>
#include <vector>

namespace couponrace {

// Counter-based per-trial generator: the stream key is a hash of
// (seed, trial index), so estimates are invariant under how trials are
// split across workers.
class TrialRng {
 public:
  TrialRng(std::uint64_t seed, std::uint64_t trial);

  std::uint64_t next();

  // Uniform in [0, n); the multiply-shift bias of ~n/2^64 is far below
  // statistical resolution.
  std::uint64_t below(std::uint64_t n);

 private:
  std::uint64_t state_;
};

enum class Winner { A, B, Tie };
enum class SimMode { RoundChain, ChangedChain };

// Absorption class of the player-A wedge projection: first of {A falls
// behind (Loss), A completes never-behind (Success), simultaneous
// completion never-behind (TerminalTie)}.
enum class Absorption { Success, Loss, TerminalTie };

inline constexpr std::int64_t kNoBreak = -1;

struct TrialOutcome {
  Winner winner = Winner::Tie;
  bool never_behind_winner = false;
  std::int64_t first_break_level = kNoBreak;  // tied level of the first
                                              // one-sided move, or kNoBreak
  Winner first_breaker = Winner::Tie;         // Tie when no break occurred
  std::int64_t changed_steps = 0;
  std::int64_t rounds = 0;  // raw rounds; round-chain mode only
  Absorption absorption = Absorption::Loss;
};

// One full race in raw rounds, using the four-way categorical reduction of
// the pair (C_A, C_B).
TrialOutcome simulate_round_trial(std::int64_t d, TrialRng& rng);

// Same race but drawing literal coupon identities (seen-sets); slow, used
// to validate the categorical reduction.
TrialOutcome simulate_round_trial_identity(std::int64_t d, TrialRng& rng);

// Self-loop-erased wedge chain from an interior start, stopped at
// success / loss sink / terminal tie.
TrialOutcome simulate_changed_trial(std::int64_t d, std::int64_t s0,
                                    std::int64_t g0, TrialRng& rng);

struct SimEstimate {
  double estimate = 0.0;
  double stderr_ = 0.0;
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
  SimMode mode = SimMode::RoundChain;
};

// Estimate of the winner-never-behind probability b_d.  RoundChain counts
// never-behind winners directly; ChangedChain counts wedge successes from
// (0,0) and doubles by the A/B symmetry (its stderr is doubled with it).
SimEstimate estimate_b(std::int64_t d, std::uint64_t trials,
                       std::uint64_t seed, SimMode mode, int workers = 1);

struct FirstBreakEstimate {
  std::int64_t d = 0;
  std::vector<double> pmf;      // index k = 1..d-1
  double no_break = 0.0;
  double mean_scaled = 0.0;     // empirical E[K_d/sqrt(d)], atom at d included
  double breaker_a_share = 0.0; // among broken trials, fraction broken by A
  std::uint64_t trials = 0;
  std::uint64_t seed = 0;
};

FirstBreakEstimate estimate_first_break(std::int64_t d, std::uint64_t trials,
                                        std::uint64_t seed, int workers = 1);

// Absorption-class frequencies of the wedge projection, from round-chain
// trials (the projection of the raw race) or changed-chain trials.
struct AbsorptionEstimate {
  double success = 0.0, loss = 0.0, tie = 0.0;
  std::uint64_t trials = 0;
};

AbsorptionEstimate estimate_absorption(std::int64_t d, std::uint64_t trials,
                                       std::uint64_t seed, SimMode mode,
                                       int workers = 1);

}  // namespace couponrace
