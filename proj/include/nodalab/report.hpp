#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

namespace nodalab {

// Fixed registry of checkers; every CheckRecord cites one of these ids and
// the consolidated report audits coverage against the full list.
const std::vector<std::string>& check_registry();
bool known_check(const std::string& id);

struct CheckRecord {
  std::string check_id;   // one of check_registry()
  std::string subject;    // which field / domain / parameters
  nlohmann::json inputs;  // structured parameters for reproduction
  double fitted_constant = 0.0;
  double error_bar = 0.0;
  bool pass = false;
  std::string detail;

  nlohmann::json to_json() const;
  static CheckRecord from_json(const nlohmann::json& j);
};

// Append-only record list for one command invocation.
struct StudyReport {
  std::string command;
  nlohmann::json manifest;  // mesh sizes, quadrature depths, seed
  std::vector<CheckRecord> records;

  void add(CheckRecord r);  // validates the id against the registry
  int failures() const;
  bool all_pass() const { return failures() == 0; }
  nlohmann::json to_json() const;
};

// Output helpers.  Numeric cells use %.17g so doubles round-trip exactly;
// no file carries a timestamp, so identical runs are byte-identical.
std::string format_g17(double x);
void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows);
void write_csv_mixed(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows);
void write_json(const std::string& path, const nlohmann::json& j);
// Columnar plot data: '#'-prefixed name row, then aligned numeric columns.
void write_plot_columns(const std::string& path,
                        const std::vector<std::string>& names,
                        const std::vector<std::vector<double>>& columns);

// Reads every report_*.json under dir, audits registry coverage, and writes
// summary.json + checks.csv there.  Throws std::runtime_error when the
// directory holds no reports (missing upstream artifact).
struct ConsolidatedReport {
  int report_files = 0;
  int total_records = 0;
  int failures = 0;
  std::vector<std::string> covered;  // registry ids seen, registry order
  std::vector<std::string> missing;  // registry ids absent from all reports
};
ConsolidatedReport consolidate_reports(const std::string& dir);

}  // namespace nodalab
