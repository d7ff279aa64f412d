#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace couponrace {

enum class Backend { Float64, RationalBackend };
enum class OutputFormat { Human, Json, Csv };

struct ReportRow {
  std::int64_t d = 0;
  double b = 0.0;
  double db = 0.0;  // d * b
  std::optional<double> rho;
  std::optional<double> mean_scaled;  // E[K_d/sqrt(d)], exact law
  std::optional<double> ks;
  std::optional<double> green_residual;
  std::optional<double> mc_estimate;
  std::optional<double> mc_stderr;
};

// One solve per d, dispatched to a worker pool; rows come back in the order
// of `ds` regardless of completion order.
std::vector<ReportRow> make_table(const std::vector<std::int64_t>& ds,
                                  int workers, bool with_skeleton = false);

// Serialization.  CSV column order is fixed: d, b_d, db_d, then the
// optional columns rho, mean_scaled, ks, green_residual, mc_estimate,
// mc_stderr (blank when absent).  JSON is a top-level array of row objects
// with the same keys.
std::string to_csv(const std::vector<ReportRow>& rows);
std::string to_json(const std::vector<ReportRow>& rows);
std::string to_human(const std::vector<ReportRow>& rows);

std::string render(const std::vector<ReportRow>& rows, OutputFormat fmt);

// Number of workers to use when the user gave no --workers flag: the
// COUPONRACE_WORKERS environment variable, else hardware concurrency.
int default_workers();

}  // namespace couponrace
