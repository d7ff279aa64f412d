#include <doctest.h>

#include "couponrace/numeric.hpp"
#include "couponrace/wedge.hpp"

using namespace couponrace;

TEST_CASE("classification of the three boundaries and the interior") {
  CHECK(classify(WedgeState(5, 2, 3)) == StateClass::Success);
  CHECK(classify(WedgeState(5, 5, 0)) == StateClass::TerminalTie);
  CHECK(classify(WedgeState(2, 1, 0)) == StateClass::Interior);
  CHECK(classify(WedgeState(3, 1, -1)) == StateClass::Loss);
  CHECK(classify(WedgeState(1, 0, 1)) == StateClass::Success);
}

TEST_CASE("construction rejects coordinates outside the wedge") {
  CHECK_THROWS_AS(WedgeState(0, 0, 0), std::invalid_argument);
  CHECK_THROWS_AS(WedgeState(5, -1, 0), std::invalid_argument);
  CHECK_THROWS_AS(WedgeState(5, 6, 0), std::invalid_argument);
  CHECK_THROWS_AS(WedgeState(5, 2, 4), std::invalid_argument);
  CHECK_THROWS_AS(WedgeState(5, 2, -2), std::invalid_argument);
}

TEST_CASE("changed-step weights at hand-evaluated states") {
  const ChangedStepWeights w1 = changed_weights(WedgeState(2, 1, 0));
  CHECK(w1.w_both == 1);
  CHECK(w1.w_a_only == 1);
  CHECK(w1.w_b_only == 1);
  CHECK(w1.total == 3);

  const ChangedStepWeights w2 = changed_weights(WedgeState(2, 0, 0));
  CHECK(w2.w_both == 4);
  CHECK(w2.w_a_only == 0);
  CHECK(w2.w_b_only == 0);
  CHECK(w2.total == 4);

  const ChangedStepWeights w3 = changed_weights(WedgeState(2, 0, 1));
  CHECK(w3.w_both == 2);
  CHECK(w3.w_a_only == 0);
  CHECK(w3.w_b_only == 2);
  CHECK(w3.total == 4);

  CHECK_THROWS_AS(changed_weights(WedgeState(2, 1, 1)), std::invalid_argument);
  CHECK_THROWS_AS(changed_weights(WedgeState(2, 2, 0)), std::invalid_argument);
}

TEST_CASE("round probabilities at hand-evaluated states") {
  const auto p = round_probabilities<Rational>(WedgeState(2, 1, 0));
  CHECK(p.p_both == Rational(1, 4));
  CHECK(p.p_a_only == Rational(1, 4));
  CHECK(p.p_b_only == Rational(1, 4));
  CHECK(p.p_self == Rational(1, 4));

  const auto q = round_probabilities<Rational>(WedgeState(1, 0, 0));
  CHECK(q.p_both == 1);
  CHECK(q.p_a_only == 0);
  CHECK(q.p_b_only == 0);
  CHECK(q.p_self == 0);
}

TEST_CASE("weight identities over every interior state, d <= 50") {
  for (std::int64_t d = 1; d <= 50; ++d)
    for (std::int64_t s = 0; s < d; ++s)
      for (std::int64_t g = 0; g < d - s; ++g) {
        const std::int64_t m = d - s;
        const ChangedStepWeights w = changed_weights(WedgeState(d, s, g));
        CHECK(w.total == (m - g) * d + (s + g) * m);
        CHECK(w.total >= d * (m - g));
        CHECK(w.total > 0);
        CHECK(w.w_both >= 0);
        CHECK(w.w_a_only >= 0);
        CHECK(w.w_b_only >= 0);
      }
}

TEST_CASE("conditional nonself probabilities equal weights/total exactly") {
  // Self-loop erasure at the one-step level, on the rational backend.
  for (std::int64_t d : {2, 3, 7, 20})
    for (std::int64_t s = 0; s < d; ++s)
      for (std::int64_t g = 0; g < d - s; ++g) {
        const WedgeState x(d, s, g);
        const ChangedStepWeights w = changed_weights(x);
        const auto p = round_probabilities<Rational>(x);
        const Rational nonself = p.p_both + p.p_a_only + p.p_b_only;
        CHECK(p.p_both * w.total == nonself * w.w_both);
        CHECK(p.p_a_only * w.total == nonself * w.w_a_only);
        CHECK(p.p_b_only * w.total == nonself * w.w_b_only);
      }
}

TEST_CASE("every changed transition raises 2s+g by 1 or 2") {
  // Targets are (s+1,g), (s,g+1), (s+1,g-1): increments 2, 1, 1.
  for (std::int64_t d : {2, 5, 11})
    for (std::int64_t s = 0; s < d; ++s)
      for (std::int64_t g = 0; g < d - s; ++g) {
        const std::int64_t level = 2 * s + g;
        CHECK(2 * (s + 1) + g - level == 2);
        CHECK(2 * s + (g + 1) - level == 1);
        CHECK(2 * (s + 1) + (g - 1) - level == 1);
      }
}
