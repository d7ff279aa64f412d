// couponrace: exact solvers, audits, and Monte Carlo cross-checks for the
// two-player coupon-collector race.
//
// Subcommands:
//   table     backward-DP table of b_d over a list of d values
//   solve     single solve with optional exact-rational backend
//   skeleton  first-break law, moments, and Rayleigh diagnostics
//   audit     identity audit (recursion, tie, defect, Green, occupation)
//   simulate  Monte Carlo estimate of b_d with exact comparison

#include <cstdint>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "couponrace/harmonic.hpp"
#include "couponrace/report.hpp"
#include "couponrace/sim.hpp"
#include "couponrace/solver.hpp"
#include "couponrace/tie_skeleton.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvariantFailure = 1;
constexpr int kExitUsage = 2;

// Tolerances for the float-backend audit, calibrated against the rational
// backend at d <= 64.
constexpr double kFloatResidualTol = 1e-12;
constexpr double kGreenResidualTol = 1e-10;

struct CommonOpts {
  std::int64_t d = 0;
  std::vector<std::int64_t> d_list;
  std::string backend = "f64";
  std::uint64_t trials = 1000000;
  std::uint64_t seed = 20250824;
  std::string mode = "round";
  std::string format = "human";
  std::string out_path;
  int workers = 0;
  bool keep_full = false;
  std::int64_t s0 = 0;
  std::int64_t g0 = 0;
};

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path);
    if (!f) throw std::runtime_error("cannot open output file: " + out_path);
    f << text;
  }
}

couponrace::OutputFormat parse_format(const std::string& s) {
  if (s == "json") return couponrace::OutputFormat::Json;
  if (s == "csv") return couponrace::OutputFormat::Csv;
  return couponrace::OutputFormat::Human;
}

int run_table(const CommonOpts& opt) {
  std::vector<std::int64_t> ds = opt.d_list;
  if (ds.empty() && opt.d >= 1) ds.push_back(opt.d);
  if (ds.empty()) {
    std::cerr << "table: need --d or --d-list\n";
    return kExitUsage;
  }
  const int workers =
      opt.workers >= 1 ? opt.workers : couponrace::default_workers();
  const auto rows = couponrace::make_table(ds, workers);
  emit(couponrace::render(rows, parse_format(opt.format)), opt.out_path);
  return kExitOk;
}

int run_solve(const CommonOpts& opt) {
  nlohmann::json o;
  o["d"] = opt.d;
  o["backend"] = opt.backend;
  double b = 0.0;
  if (opt.backend == "rational") {
    const auto t = couponrace::solve_exact(opt.d, opt.keep_full);
    b = couponrace::to_double(t.b);
    o["b_exact"] = t.b.get_str();
  } else {
    const auto t = couponrace::solve_f64(opt.d, opt.keep_full);
    b = t.b;
    o["tie_recursion_residual"] = couponrace::tie_recursion_residual(t);
  }
  o["b_d"] = b;
  o["db_d"] = static_cast<double>(opt.d) * b;
  if (parse_format(opt.format) == couponrace::OutputFormat::Human) {
    std::ostringstream os;
    os.setf(std::ios::fixed);
    os.precision(10);
    os << "d = " << opt.d << "  b_d = " << b
       << "  d*b_d = " << static_cast<double>(opt.d) * b << '\n';
    emit(os.str(), opt.out_path);
  } else {
    emit(o.dump(2) + "\n", opt.out_path);
  }
  return kExitOk;
}

int run_skeleton(const CommonOpts& opt) {
  const auto law = couponrace::first_break_law(opt.d);
  const auto t = couponrace::solve_f64(opt.d);
  const auto cond = couponrace::conditional_pmf(
      law, t.w_row, t.e_row[static_cast<std::size_t>(opt.d)]);
  const auto m1 = couponrace::scaled_moment(law, cond, 1.0);
  const auto m2 = couponrace::scaled_moment(law, cond, 2.0);
  nlohmann::json o;
  o["d"] = opt.d;
  o["rho"] = law.rho;
  o["pi_1"] = law.pmf[1];
  o["normalization_defect"] = law.normalization_defect();
  o["mean_scaled"] = m1.unconditional;
  o["mean_scaled_conditional"] = m1.conditional;
  o["second_moment_scaled"] = m2.unconditional;
  o["rayleigh_ks"] = couponrace::rayleigh_ks(law);
  o["conditional_deficit"] = cond.deficit;
  if (parse_format(opt.format) == couponrace::OutputFormat::Human) {
    std::ostringstream os;
    os.precision(12);
    os << "d = " << opt.d << "\n"
       << "rho_d                 = " << law.rho << "\n"
       << "normalization defect  = " << law.normalization_defect() << "\n"
       << "E[K/sqrt(d)]          = " << m1.unconditional
       << "   (limit " << m1.limit << ")\n"
       << "E[K/sqrt(d)|A wins]   = " << m1.conditional << "\n"
       << "E[(K/sqrt(d))^2]      = " << m2.unconditional << "   (limit 1)\n"
       << "Rayleigh KS distance  = " << couponrace::rayleigh_ks(law) << "\n";
    emit(os.str(), opt.out_path);
  } else {
    emit(o.dump(2) + "\n", opt.out_path);
  }
  return kExitOk;
}

template <class T>
int audit_with_backend(const CommonOpts& opt, double tol, double green_tol) {
  using namespace couponrace;
  const std::int64_t d = opt.d;
  const SolveTable<T> table = solve<T>(d, /*keep_full=*/true);
  const VisitMeasure<T> vm = visit_measure<T>(d, opt.s0, opt.g0);
  const GreenAudit<T> green = green_audit(table, vm);
  const OccupationAudit<T> occ = occupation_audit(vm);

  const double rec = to_double(recursion_residual(table));
  const double tie = to_double(tie_recursion_residual(table));
  double defect_gap = 0.0;
  for (std::int64_t s = 0; s < d; ++s)
    for (std::int64_t g = 0; g < d - s; ++g) {
      const double gap = std::abs(to_double(
          defect_via_kernel<T>(d, s, g) - defect_closed_form<T>(d, s, g)));
      if (gap > defect_gap) defect_gap = gap;
    }
  const FirstBreakLaw law = first_break_law(d);
  const double norm_defect = std::abs(law.normalization_defect());
  const double green_res = to_double(green.residual);
  const double occ_max = to_double(occ.max_ratio);

  const bool ok = rec <= tol && tie <= tol && defect_gap <= tol &&
                  norm_defect <= kFloatResidualTol &&
                  green_res <= green_tol && occ_max <= 2.0 + tol;

  std::ostringstream os;
  os.precision(6);
  os << "d = " << d << "  start = (" << opt.s0 << "," << opt.g0
     << ")  backend = " << opt.backend << "\n"
     << "recursion residual      = " << rec << "\n"
     << "tie-recursion residual  = " << tie << "\n"
     << "defect kernel gap       = " << defect_gap << "\n"
     << "normalization defect    = " << norm_defect << "\n"
     << "green residual          = " << green_res << "\n"
     << "occupation max ratio    = " << occ_max << "\n"
     << (ok ? "AUDIT PASS\n" : "AUDIT FAIL\n");
  emit(os.str(), opt.out_path);
  return ok ? kExitOk : kExitInvariantFailure;
}

int run_audit(const CommonOpts& opt) {
  if (opt.backend == "rational")
    return audit_with_backend<couponrace::Rational>(opt, 0.0, 0.0);
  return audit_with_backend<double>(opt, kFloatResidualTol, kGreenResidualTol);
}

int run_simulate(const CommonOpts& opt) {
  using namespace couponrace;
  const SimMode mode =
      opt.mode == "changed" ? SimMode::ChangedChain : SimMode::RoundChain;
  const int workers =
      opt.workers >= 1 ? opt.workers : default_workers();
  const SimEstimate est = estimate_b(opt.d, opt.trials, opt.seed, mode,
                                     workers);
  nlohmann::json o;
  o["d"] = opt.d;
  o["mode"] = opt.mode;
  o["trials"] = est.trials;
  o["seed"] = est.seed;
  o["estimate"] = est.estimate;
  o["stderr"] = est.stderr_;
  if (opt.d <= 20000) {
    const double exact = solve_f64(opt.d).b;
    o["exact"] = exact;
    o["z"] = est.stderr_ > 0.0 ? (est.estimate - exact) / est.stderr_ : 0.0;
  }
  if (parse_format(opt.format) == couponrace::OutputFormat::Human) {
    std::ostringstream os;
    os.precision(10);
    os << "d = " << opt.d << "  mode = " << opt.mode
       << "  trials = " << est.trials << "  seed = " << est.seed << "\n"
       << "estimate = " << est.estimate << " +/- " << est.stderr_ << "\n";
    if (o.contains("exact"))
      os << "exact    = " << o["exact"].get<double>()
         << "   z = " << o["z"].get<double>() << "\n";
    emit(os.str(), opt.out_path);
  } else {
    emit(o.dump(2) + "\n", opt.out_path);
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"two-player coupon-collector race: exact solver and audits"};
  app.require_subcommand(1);
  CommonOpts opt;

  auto add_common = [&](CLI::App* cmd, bool need_d) {
    if (need_d)
      cmd->add_option("--d", opt.d, "number of coupon types")->required();
    cmd->add_option("--format", opt.format, "human|json|csv")
        ->check(CLI::IsMember({"human", "json", "csv"}));
    cmd->add_option("--out", opt.out_path, "output file (default stdout)");
    cmd->add_option("--workers", opt.workers,
                    "worker threads (default: COUPONRACE_WORKERS or all cores)");
  };

  CLI::App* table = app.add_subcommand("table", "b_d table over d values");
  table->add_option("--d", opt.d, "single d");
  table->add_option("--d-list", opt.d_list, "comma-separated d values")
      ->delimiter(',');
  add_common(table, false);

  CLI::App* solve_cmd = app.add_subcommand("solve", "single backward solve");
  add_common(solve_cmd, true);
  solve_cmd->add_option("--backend", opt.backend, "f64|rational")
      ->check(CLI::IsMember({"f64", "rational"}));
  solve_cmd->add_flag("--keep-full", opt.keep_full, "retain full U table");

  CLI::App* skel = app.add_subcommand("skeleton", "first-break diagnostics");
  add_common(skel, true);

  CLI::App* audit = app.add_subcommand("audit", "identity audit");
  add_common(audit, true);
  audit->add_option("--backend", opt.backend, "f64|rational")
      ->check(CLI::IsMember({"f64", "rational"}));
  audit->add_option("--s0", opt.s0, "start age (default 0)");
  audit->add_option("--g0", opt.g0, "start lead (default 0)");

  CLI::App* sim = app.add_subcommand("simulate", "Monte Carlo estimate");
  add_common(sim, true);
  sim->add_option("--trials", opt.trials, "trial count")
      ->check(CLI::PositiveNumber);
  sim->add_option("--seed", opt.seed, "64-bit seed");
  sim->add_option("--mode", opt.mode, "round|changed")
      ->check(CLI::IsMember({"round", "changed"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (table->parsed()) return run_table(opt);
    if (solve_cmd->parsed()) return run_solve(opt);
    if (skel->parsed()) return run_skeleton(opt);
    if (audit->parsed()) return run_audit(opt);
    if (sim->parsed()) return run_simulate(opt);
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInvariantFailure;
  }
  return kExitUsage;
}
