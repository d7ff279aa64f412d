#include <doctest.h>

#include <cmath>

#include "couponrace/numeric.hpp"
#include "couponrace/solver.hpp"

using namespace couponrace;

TEST_CASE("d=1: the only path is the simultaneous terminal tie") {
  const auto t = solve_exact(1);
  CHECK(t.b == 0);
  CHECK(t.e_row[1] == 0);
}

TEST_CASE("d=2: hand-evaluated three-state recursion") {
  const auto t = solve_exact(2, /*keep_full=*/true);
  CHECK(t.value_at(1, 0) == Rational(1, 3));
  CHECK(t.value_at(0, 1) == Rational(2, 3));
  CHECK(t.value_at(0, 0) == Rational(1, 3));
  CHECK(t.b == Rational(2, 3));
}

TEST_CASE("d=20 float solve matches the exact table value") {
  const auto t = solve_f64(20);
  CHECK(std::abs(t.b - 0.1534023902) < 5e-11);
}

TEST_CASE("float solve agrees with the rational oracle entrywise, d <= 32") {
  for (std::int64_t d = 1; d <= 32; ++d) {
    const auto f = solve<double>(d, true);
    const auto q = solve_exact(d, true);
    for (std::int64_t s = 0; s <= d; ++s)
      for (std::int64_t g = 0; g <= d - s; ++g)
        CHECK(std::abs(f.value_at(s, g) - to_double(q.value_at(s, g))) <=
              1e-12);
  }
}

TEST_CASE("recursion residual is exactly zero on the rational backend") {
  for (std::int64_t d : {2, 5, 13, 40}) {
    const auto q = solve_exact(d, true);
    CHECK(recursion_residual(q) == 0);
  }
}

TEST_CASE("boundary rows and range of the table") {
  const auto t = solve_exact(7, true);
  for (std::int64_t s = 0; s < 7; ++s) CHECK(t.value_at(s, 7 - s) == 1);
  CHECK(t.value_at(7, 0) == 0);
  for (std::int64_t s = 0; s <= 7; ++s)
    for (std::int64_t g = 0; g <= 7 - s; ++g) {
      CHECK(t.value_at(s, g) >= 0);
      CHECK(t.value_at(s, g) <= 1);
    }
}

TEST_CASE("tie-boundary recursion residual") {
  CHECK(tie_recursion_residual(solve_exact(2)) == 0);
  CHECK(tie_recursion_residual(solve_exact(40)) == 0);
  CHECK(tie_recursion_residual(solve_f64(100)) <= 1e-12);
  CHECK(tie_recursion_residual(solve_f64(2000)) <= 1e-10);
}

TEST_CASE("a larger lead never hurts: U monotone in g") {
  for (std::int64_t d = 1; d <= 32; ++d) {
    const auto q = solve_exact(d, true);
    for (std::int64_t s = 0; s < d; ++s)
      for (std::int64_t g = 0; g < d - s; ++g)
        CHECK(q.value_at(s, g + 1) >= q.value_at(s, g));
  }
}

TEST_CASE("value_at guards") {
  const auto t = solve_f64(5);
  CHECK_THROWS_AS(t.value_at(1, 2), std::invalid_argument);  // no full table
  CHECK_THROWS_AS(t.value_at(6, 0), std::invalid_argument);
  CHECK(t.value_at(2, 3) == 1.0);   // success boundary
  CHECK(t.value_at(5, 0) == 0.0);   // terminal tie
  CHECK(t.value_at(3, -1) == 0.0);  // loss sink
}

TEST_CASE("solve guards") {
  CHECK_THROWS_AS(solve_f64(0), std::invalid_argument);
  CHECK_THROWS_AS(solve_exact(65), std::invalid_argument);
}

TEST_CASE("visit measure at d=2 from the origin") {
  const auto vm = visit_measure<Rational>(2, 0, 0);
  CHECK(vm.at(0, 0) == 1);
  CHECK(vm.at(1, 0) == 1);  // forced both-new step
  CHECK(vm.success == Rational(1, 3));
  CHECK(vm.loss == Rational(1, 3));
  CHECK(vm.tie == Rational(1, 3));
}

TEST_CASE("one-step absorption from (d-1,0): masses 1, d-1, d-1 over 2d-1") {
  for (std::int64_t d : {2, 7, 20}) {
    const auto vm = visit_measure<Rational>(d, d - 1, 0);
    CHECK(vm.success == Rational(d - 1, 2 * d - 1));
    CHECK(vm.loss == Rational(d - 1, 2 * d - 1));
    CHECK(vm.tie == Rational(1, 2 * d - 1));
  }
}

TEST_CASE("absorbed masses sum to one") {
  for (std::int64_t d : {2, 9, 24})
    for (std::int64_t g0 = 0; g0 < d; ++g0) {
      const auto vm = visit_measure<Rational>(d, 0, g0);
      CHECK(vm.success + vm.loss + vm.tie == 1);
    }
  const auto vmf = visit_measure<double>(500, 3, 1);
  CHECK(std::abs(vmf.success + vmf.loss + vmf.tie - 1.0) <= 1e-12);
}

TEST_CASE("forward success mass equals the backward win probability") {
  // Independent sweeps: forward occupation vs backward recursion.
  for (std::int64_t d = 2; d <= 24; ++d) {
    const auto vm = visit_measure<Rational>(d, 0, 0);
    const auto t = solve_exact(d);
    CHECK(vm.success == t.e_row[static_cast<std::size_t>(d)]);
  }
}

TEST_CASE("terminal tie probability") {
  CHECK(terminal_tie_prob<Rational>(2, 0, 0) == Rational(1, 3));
  CHECK(terminal_tie_prob<Rational>(2, 1, 0) == Rational(1, 3));
  // Equals the visit probability of the only gateway times 1/(2d-1).
  for (std::int64_t d : {5, 12}) {
    const auto vm = visit_measure<Rational>(d, 0, 0);
    CHECK(vm.tie == vm.at(d - 1, 0) * Rational(1, 2 * d - 1));
  }
  // A start that cannot reach the gateway has tie probability zero.
  CHECK(terminal_tie_prob<Rational>(5, 0, 3) ==
        visit_measure<Rational>(5, 0, 3).tie);
  CHECK_THROWS_AS(visit_measure<Rational>(5, 5, 0), std::invalid_argument);
  CHECK_THROWS_AS(visit_measure<Rational>(5, 2, 3), std::invalid_argument);
}
