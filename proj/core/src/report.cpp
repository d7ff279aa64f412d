#include "couponrace/report.hpp"

#include <atomic>
#include <cstdlib>
#include <sstream>
#include <thread>

#include <nlohmann/json.hpp>

#include "couponrace/solver.hpp"
#include "couponrace/tie_skeleton.hpp"

namespace couponrace {

namespace {

ReportRow make_row(std::int64_t d, bool with_skeleton) {
  ReportRow row;
  row.d = d;
  const SolveTable<double> t = solve_f64(d);
  row.b = t.b;
  row.db = static_cast<double>(d) * t.b;
  if (with_skeleton && d >= 2) {
    const FirstBreakLaw law = first_break_law(d);
    row.rho = law.rho;
    const ConditionalFirstBreak cond =
        conditional_pmf(law, t.w_row, t.e_row[static_cast<std::size_t>(d)]);
    row.mean_scaled = scaled_moment(law, cond, 1.0).unconditional;
    row.ks = rayleigh_ks(law);
  }
  return row;
}

void append_opt(std::ostringstream& os, const std::optional<double>& v) {
  os << ',';
  if (v) os << *v;
}

}  // namespace

std::vector<ReportRow> make_table(const std::vector<std::int64_t>& ds,
                                  int workers, bool with_skeleton) {
  std::vector<ReportRow> rows(ds.size());
  if (workers < 1) workers = 1;
  const int nw = static_cast<int>(
      std::min<std::size_t>(static_cast<std::size_t>(workers), ds.size()));
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < nw; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < ds.size();
           i = next.fetch_add(1))
        rows[i] = make_row(ds[i], with_skeleton);
    });
  for (auto& t : pool) t.join();
  return rows;
}

std::string to_csv(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os.precision(12);
  os << "d,b_d,db_d,rho,mean_scaled,ks,green_residual,mc_estimate,mc_stderr\n";
  for (const ReportRow& r : rows) {
    os << r.d << ',';
    {
      std::ostringstream fixed;
      fixed.setf(std::ios::fixed);
      fixed.precision(10);
      fixed << r.b;
      os << fixed.str();
    }
    os << ',' << r.db;
    append_opt(os, r.rho);
    append_opt(os, r.mean_scaled);
    append_opt(os, r.ks);
    append_opt(os, r.green_residual);
    append_opt(os, r.mc_estimate);
    append_opt(os, r.mc_stderr);
    os << '\n';
  }
  return os.str();
}

std::string to_json(const std::vector<ReportRow>& rows) {
  nlohmann::json arr = nlohmann::json::array();
  for (const ReportRow& r : rows) {
    nlohmann::json o;
    o["d"] = r.d;
    o["b_d"] = r.b;
    o["db_d"] = r.db;
    if (r.rho) o["rho"] = *r.rho;
    if (r.mean_scaled) o["mean_scaled"] = *r.mean_scaled;
    if (r.ks) o["ks"] = *r.ks;
    if (r.green_residual) o["green_residual"] = *r.green_residual;
    if (r.mc_estimate) o["mc_estimate"] = *r.mc_estimate;
    if (r.mc_stderr) o["mc_stderr"] = *r.mc_stderr;
    arr.push_back(std::move(o));
  }
  return arr.dump(2) + "\n";
}

std::string to_human(const std::vector<ReportRow>& rows) {
  std::ostringstream os;
  os << "    d          b_d          d*b_d\n";
  for (const ReportRow& r : rows) {
    std::ostringstream b;
    b.setf(std::ios::fixed);
    b.precision(10);
    b << r.b;
    std::ostringstream db;
    db.precision(10);
    db << r.db;
    os << ' ' << r.d;
    for (std::size_t pad = std::to_string(r.d).size(); pad < 5; ++pad)
      os << ' ';
    os << "  " << b.str() << "  " << db.str();
    if (r.mc_estimate)
      os << "  mc=" << *r.mc_estimate << " +/- "
         << (r.mc_stderr ? *r.mc_stderr : 0.0);
    os << '\n';
  }
  return os.str();
}

std::string render(const std::vector<ReportRow>& rows, OutputFormat fmt) {
  switch (fmt) {
    case OutputFormat::Csv: return to_csv(rows);
    case OutputFormat::Json: return to_json(rows);
    default: return to_human(rows);
  }
}

int default_workers() {
  if (const char* env = std::getenv("COUPONRACE_WORKERS")) {
    const int n = std::atoi(env);
    if (n >= 1) return n;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw ? static_cast<int>(hw) : 1;
}

}  // namespace couponrace
