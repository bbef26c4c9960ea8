#include "nodalab/report.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <stdexcept>

namespace nodalab {

namespace fs = std::filesystem;

const std::vector<std::string>& check_registry() {
  static const std::vector<std::string> ids{
      "frequency_monotonicity",
      "star_shaped_certification",
      "frequency_doubling",
      "changing_center",
      "lifted_sup_bound",
      "doubling_bridge",
      "doubling_almost_monotonicity",
      "doubling_global_bound",
      "vanishing_order",
      "interior_length_bound",
      "interior_cube_measure",
      "boundary_cube_measure",
      "smallness_propagation",
      "dividing_lemma",
      "nodal_scaling_sweep",
  };
  return ids;
}

bool known_check(const std::string& id) {
  const auto& reg = check_registry();
  return std::find(reg.begin(), reg.end(), id) != reg.end();
}

nlohmann::json CheckRecord::to_json() const {
  return nlohmann::json{{"check_id", check_id},
                        {"subject", subject},
                        {"inputs", inputs},
                        {"fitted_constant", fitted_constant},
                        {"error_bar", error_bar},
                        {"pass", pass},
                        {"detail", detail}};
}

CheckRecord CheckRecord::from_json(const nlohmann::json& j) {
  CheckRecord r;
  r.check_id = j.value("check_id", "");
  r.subject = j.value("subject", "");
  r.inputs = j.value("inputs", nlohmann::json::object());
  r.fitted_constant = j.value("fitted_constant", 0.0);
  r.error_bar = j.value("error_bar", 0.0);
  r.pass = j.value("pass", false);
  r.detail = j.value("detail", "");
  return r;
}

void StudyReport::add(CheckRecord r) {
  if (!known_check(r.check_id))
    throw std::invalid_argument("unknown check id: " + r.check_id);
  records.push_back(std::move(r));
}

int StudyReport::failures() const {
  int n = 0;
  for (const CheckRecord& r : records) n += r.pass ? 0 : 1;
  return n;
}

nlohmann::json StudyReport::to_json() const {
  nlohmann::json recs = nlohmann::json::array();
  for (const CheckRecord& r : records) recs.push_back(r.to_json());
  return nlohmann::json{{"command", command},
                        {"manifest", manifest},
                        {"records", recs},
                        {"failures", failures()}};
}

std::string format_g17(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

namespace {

std::ofstream open_out(const std::string& path) {
  fs::path p(path);
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  return out;
}

}  // namespace

void write_csv(const std::string& path, const std::vector<std::string>& header,
               const std::vector<std::vector<double>>& rows) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << format_g17(row[i]);
    out << "\n";
  }
}

void write_csv_mixed(const std::string& path,
                     const std::vector<std::string>& header,
                     const std::vector<std::vector<std::string>>& rows) {
  std::ofstream out = open_out(path);
  for (std::size_t i = 0; i < header.size(); ++i)
    out << (i ? "," : "") << header[i];
  out << "\n";
  for (const auto& row : rows) {
    for (std::size_t i = 0; i < row.size(); ++i)
      out << (i ? "," : "") << row[i];
    out << "\n";
  }
}

void write_json(const std::string& path, const nlohmann::json& j) {
  std::ofstream out = open_out(path);
  out << j.dump(2) << "\n";
}

void write_plot_columns(const std::string& path,
                        const std::vector<std::string>& names,
                        const std::vector<std::vector<double>>& columns) {
  if (names.size() != columns.size())
    throw std::invalid_argument("plot columns/names mismatch");
  std::size_t n = 0;
  for (const auto& c : columns) n = std::max(n, c.size());
  std::ofstream out = open_out(path);
  out << "#";
  for (const auto& name : names) out << " " << name;
  out << "\n";
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t c = 0; c < columns.size(); ++c)
      out << (c ? " " : "")
          << (i < columns[c].size() ? format_g17(columns[c][i]) : "nan");
    out << "\n";
  }
}

ConsolidatedReport consolidate_reports(const std::string& dir) {
  if (!fs::is_directory(dir))
    throw std::runtime_error("report directory missing: " + dir);
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir)) {
    const std::string name = e.path().filename().string();
    if (name.rfind("report_", 0) == 0 && e.path().extension() == ".json")
      files.push_back(e.path());
  }
  std::sort(files.begin(), files.end());
  if (files.empty())
    throw std::runtime_error("no report_*.json found in " + dir +
                             " (run a study command first)");

  ConsolidatedReport cr;
  cr.report_files = int(files.size());
  std::set<std::string> seen;
  std::vector<std::vector<std::string>> csv_rows;
  nlohmann::json all = nlohmann::json::array();
  for (const auto& f : files) {
    std::ifstream in(f);
    nlohmann::json j;
    in >> j;
    all.push_back(j);
    for (const auto& jr : j.value("records", nlohmann::json::array())) {
      const CheckRecord r = CheckRecord::from_json(jr);
      ++cr.total_records;
      if (!r.pass) ++cr.failures;
      seen.insert(r.check_id);
      csv_rows.push_back({r.check_id, "\"" + r.subject + "\"",
                          format_g17(r.fitted_constant),
                          format_g17(r.error_bar), r.pass ? "1" : "0"});
    }
  }
  for (const std::string& id : check_registry())
    (seen.count(id) ? cr.covered : cr.missing).push_back(id);

  write_csv_mixed(dir + "/checks.csv",
                  {"check_id", "subject", "fitted_constant", "error_bar",
                   "pass"},
                  csv_rows);
  write_json(dir + "/summary.json",
             nlohmann::json{{"report_files", cr.report_files},
                            {"total_records", cr.total_records},
                            {"failures", cr.failures},
                            {"covered", cr.covered},
                            {"missing", cr.missing},
                            {"reports", all}});
  return cr;
}

}  // namespace nodalab
