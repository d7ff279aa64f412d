#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "couponrace/numeric.hpp"
#include "couponrace/solver.hpp"

namespace couponrace {

// Law of the extended first-break level K_d: pmf[k] for k = 1..d-1 is the
// probability that the first one-sided tie-break happens at tied level k
// (either player), rho is the no-break atom at K_d = d.
//
// pmf[k] = exp(sum_{r<k} log((d-r)/(d+r))) * 2k/(d+k): the cumulative
// log-product keeps k ~ d well clear of underflow, where the linear-space
// telescoping product is e^{-Theta(d)}.
struct FirstBreakLaw {
  std::int64_t d = 0;
  std::vector<double> pmf;           // index k = 1..d-1; pmf[0] unused
  double rho = 0.0;                  // atom at K_d = d
  std::vector<double> log_products;  // log_products[k] = log prod_{r<k}, k=1..d

  double normalization_defect() const {
    CompensatedSum<double> acc;
    for (std::size_t k = 1; k + 1 <= pmf.size(); ++k) acc.add(pmf[k]);
    acc.add(rho);
    return acc.value() - 1.0;
  }
};

inline FirstBreakLaw first_break_law(std::int64_t d) {
  if (d < 2) throw std::invalid_argument("first_break_law: d must be >= 2");
  FirstBreakLaw law;
  law.d = d;
  law.pmf.assign(static_cast<std::size_t>(d), 0.0);
  law.log_products.assign(static_cast<std::size_t>(d) + 1, 0.0);
  CompensatedSum<double> logsum;
  for (std::int64_t k = 1; k <= d; ++k) {
    law.log_products[static_cast<std::size_t>(k)] = logsum.value();
    if (k <= d - 1) {
      const double dk = static_cast<double>(d + k);
      law.pmf[static_cast<std::size_t>(k)] =
          std::exp(logsum.value()) * (2.0 * static_cast<double>(k) / dk);
      logsum.add(std::log(static_cast<double>(d - k) / dk));
    }
  }
  law.rho = std::exp(law.log_products[static_cast<std::size_t>(d)]);
  return law;
}

// Exact-rational counterpart, used as the oracle at desk scale.
struct ExactFirstBreakLaw {
  std::int64_t d = 0;
  std::vector<Rational> pmf;  // index k = 1..d-1
  Rational rho;
};

inline ExactFirstBreakLaw first_break_law_exact(std::int64_t d) {
  if (d < 2)
    throw std::invalid_argument("first_break_law_exact: d must be >= 2");
  ExactFirstBreakLaw law;
  law.d = d;
  law.pmf.assign(static_cast<std::size_t>(d), Rational(0));
  Rational prod(1);
  for (std::int64_t k = 1; k <= d - 1; ++k) {
    law.pmf[static_cast<std::size_t>(k)] =
        prod * Rational(2 * k) / Rational(d + k);
    Rational step(d - k, d + k);
    step.canonicalize();
    prod *= step;
  }
  law.rho = prod;
  return law;
}

// Tie-expectation reconstruction: E_d = (1/2) sum_k pi_{d,k} w_{d-k}.
// Must reproduce the solver's U(0,0).
inline double reconstruct_E(const FirstBreakLaw& law,
                            const std::vector<double>& w_row) {
  if (static_cast<std::int64_t>(w_row.size()) != law.d + 1)
    throw std::invalid_argument("reconstruct_E: w_row size mismatch");
  CompensatedSum<double> acc;
  for (std::int64_t k = 1; k <= law.d - 1; ++k)
    acc.add(law.pmf[static_cast<std::size_t>(k)] *
            w_row[static_cast<std::size_t>(law.d - k)]);
  return 0.5 * acc.value();
}

inline Rational reconstruct_E(const ExactFirstBreakLaw& law,
                              const std::vector<Rational>& w_row) {
  if (static_cast<std::int64_t>(w_row.size()) != law.d + 1)
    throw std::invalid_argument("reconstruct_E: w_row size mismatch");
  Rational acc(0);
  for (std::int64_t k = 1; k <= law.d - 1; ++k)
    acc += law.pmf[static_cast<std::size_t>(k)] *
           w_row[static_cast<std::size_t>(law.d - k)];
  return acc / Rational(2);
}

// P(K_d = k | A wins never-behind) = pi_k w_{d-k} / (2 E_d).  The entries
// sum to 1 up to rounding; the leftover is reported as `deficit`.
struct ConditionalFirstBreak {
  std::int64_t d = 0;
  std::vector<double> pmf;  // index k = 1..d-1
  double deficit = 0.0;
};

inline ConditionalFirstBreak conditional_pmf(const FirstBreakLaw& law,
                                             const std::vector<double>& w_row,
                                             double e_d) {
  if (e_d <= 0.0)
    throw std::invalid_argument("conditional_pmf: E_d must be positive");
  if (static_cast<std::int64_t>(w_row.size()) != law.d + 1)
    throw std::invalid_argument("conditional_pmf: w_row size mismatch");
  ConditionalFirstBreak out;
  out.d = law.d;
  out.pmf.assign(static_cast<std::size_t>(law.d), 0.0);
  CompensatedSum<double> acc;
  for (std::int64_t k = 1; k <= law.d - 1; ++k) {
    const double v = law.pmf[static_cast<std::size_t>(k)] *
                     w_row[static_cast<std::size_t>(law.d - k)] /
                     (2.0 * e_d);
    out.pmf[static_cast<std::size_t>(k)] = v;
    acc.add(v);
  }
  out.deficit = 1.0 - acc.value();
  return out;
}

struct MomentReport {
  std::int64_t d = 0;
  double p = 0.0;
  double unconditional = 0.0;  // E[(K_d/sqrt(d))^p], atom at K_d=d included
  double conditional = 0.0;    // same under P(. | A wins never-behind)
  double limit = 0.0;          // Gamma(1 + p/2)
};

inline MomentReport scaled_moment(const FirstBreakLaw& law,
                                  const ConditionalFirstBreak& cond,
                                  double p) {
  MomentReport r;
  r.d = law.d;
  r.p = p;
  r.limit = std::tgamma(1.0 + p / 2.0);
  const double sqd = std::sqrt(static_cast<double>(law.d));
  CompensatedSum<double> u, c;
  for (std::int64_t k = 1; k <= law.d - 1; ++k) {
    const double xk = std::pow(static_cast<double>(k) / sqd, p);
    u.add(xk * law.pmf[static_cast<std::size_t>(k)]);
    c.add(xk * cond.pmf[static_cast<std::size_t>(k)]);
  }
  u.add(std::pow(sqd, p) * law.rho);
  r.unconditional = u.value();
  r.conditional = c.value();
  return r;
}

// Convenience form: runs its own float solve for the conditional weights.
inline MomentReport scaled_moment(std::int64_t d, double p) {
  if (d < 2 || p <= 0.0)
    throw std::invalid_argument("scaled_moment: need d >= 2 and p > 0");
  const FirstBreakLaw law = first_break_law(d);
  const SolveTable<double> t = solve_f64(d);
  const ConditionalFirstBreak cond =
      conditional_pmf(law, t.w_row, t.e_row[static_cast<std::size_t>(d)]);
  return scaled_moment(law, cond, p);
}

// sup_k |P(K_d <= k) - (1 - exp(-k^2/d))| over the integer jump grid
// k = 1..d, the atom at d included as upper-tail mass.
inline double rayleigh_ks(const FirstBreakLaw& law) {
  const double d = static_cast<double>(law.d);
  CompensatedSum<double> cdf;
  double worst = 0.0;
  for (std::int64_t k = 1; k <= law.d; ++k) {
    if (k <= law.d - 1)
      cdf.add(law.pmf[static_cast<std::size_t>(k)]);
    else
      cdf.add(law.rho);
    const double kk = static_cast<double>(k);
    const double ray = -std::expm1(-kk * kk / d);
    const double dev = std::abs(cdf.value() - ray);
    if (dev > worst) worst = dev;
  }
  return worst;
}

inline double rayleigh_ks(std::int64_t d) {
  return rayleigh_ks(first_break_law(d));
}

// Exact log of the tie-preserving product up to level k, with the residual
// against the leading expansion -k(k-1)/d.
struct TieProductLog {
  double log_product = 0.0;
  double expansion_residual = 0.0;  // |log_product + k(k-1)/d|
};

inline TieProductLog log_tie_product(std::int64_t d, std::int64_t k) {
  if (k < 1 || k > d)
    throw std::invalid_argument("log_tie_product: k outside [1,d]");
  CompensatedSum<double> acc;
  for (std::int64_t r = 1; r <= k - 1; ++r)
    acc.add(std::log(static_cast<double>(d - r) / static_cast<double>(d + r)));
  TieProductLog out;
  out.log_product = acc.value();
  out.expansion_residual =
      std::abs(out.log_product + static_cast<double>(k) *
                                     static_cast<double>(k - 1) /
                                     static_cast<double>(d));
  return out;
}

}  // namespace couponrace
