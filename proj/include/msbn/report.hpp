// SPDX-License-Identifier: Apache-2.0
//
// Run reports in two renderings: a line-oriented text form and a JSON form
// with a fixed key order.  See docs/formats.md.

#pragma once

#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "msbn/compile.hpp"
#include "msbn/format.hpp"

namespace msbn {

enum class ReportFormat { kText, kMachine };

struct QueryResult {
  std::string variable;
  std::optional<std::string> subnet;  // set when read from a non-owner subnet
  std::vector<std::string> states;
  std::vector<double> distribution;
};

struct RunReport {
  std::string command;
  std::string input;
  std::optional<std::string> engine;
  std::optional<double> evidence_probability;
  std::vector<QueryResult> posteriors;
  std::optional<double> elapsed_ms;
  std::optional<std::size_t> peak_cells;
  std::optional<std::size_t> sepset_messages;
  std::optional<std::size_t> linkage_messages;
  std::optional<StorageStats> storage;
  std::optional<double> max_deviation;
  std::optional<double> tolerance;
};

inline constexpr int kReportVersion = 1;

inline void write_report_text(std::ostream& os, const RunReport& r) {
  auto num = [](double x) { return detail::format_number(x); };
  os << "msbn-report " << kReportVersion << "\n";
  os << "command " << r.command << "\n";
  if (!r.input.empty()) os << "input " << r.input << "\n";
  if (r.engine) os << "engine " << *r.engine << "\n";
  if (r.evidence_probability) os << "evidence-probability " << num(*r.evidence_probability) << "\n";
  for (const QueryResult& q : r.posteriors) {
    os << "posterior " << q.variable;
    if (q.subnet) os << " @ " << *q.subnet;
    os << ":";
    for (std::size_t s = 0; s < q.distribution.size(); ++s) {
      os << ' ' << q.states[s] << '=' << num(q.distribution[s]);
    }
    os << "\n";
  }
  if (r.sepset_messages) os << "sepset-messages " << *r.sepset_messages << "\n";
  if (r.linkage_messages) os << "linkage-messages " << *r.linkage_messages << "\n";
  if (r.peak_cells) os << "peak-cells " << *r.peak_cells << "\n";
  if (r.storage) {
    os << "storage lazy=" << r.storage->lazy_parameters << " full=" << r.storage->full_cpt_values
       << " hugin=" << r.storage->hugin_table_cells << "\n";
  }
  if (r.max_deviation) os << "max-deviation " << num(*r.max_deviation) << "\n";
  if (r.tolerance) os << "tolerance " << num(*r.tolerance) << "\n";
  if (r.elapsed_ms) os << "elapsed-ms " << num(*r.elapsed_ms) << "\n";
}

inline nlohmann::ordered_json report_json(const RunReport& r) {
  nlohmann::ordered_json j;
  j["format"] = "msbn-report";
  j["version"] = kReportVersion;
  j["command"] = r.command;
  if (!r.input.empty()) j["input"] = r.input;
  if (r.engine) j["engine"] = *r.engine;
  if (r.evidence_probability) j["evidence_probability"] = *r.evidence_probability;
  j["posteriors"] = nlohmann::ordered_json::array();
  for (const QueryResult& q : r.posteriors) {
    nlohmann::ordered_json p;
    p["variable"] = q.variable;
    if (q.subnet) p["subnet"] = *q.subnet;
    p["states"] = q.states;
    p["distribution"] = q.distribution;
    j["posteriors"].push_back(std::move(p));
  }
  if (r.sepset_messages) j["sepset_messages"] = *r.sepset_messages;
  if (r.linkage_messages) j["linkage_messages"] = *r.linkage_messages;
  if (r.peak_cells) j["peak_cells"] = *r.peak_cells;
  if (r.storage) {
    j["storage"]["lazy_parameters"] = r.storage->lazy_parameters;
    j["storage"]["full_cpt_values"] = r.storage->full_cpt_values;
    j["storage"]["hugin_table_cells"] = r.storage->hugin_table_cells;
  }
  if (r.max_deviation) j["max_deviation"] = *r.max_deviation;
  if (r.tolerance) j["tolerance"] = *r.tolerance;
  if (r.elapsed_ms) j["elapsed_ms"] = *r.elapsed_ms;
  return j;
}

inline std::string emit_report(const RunReport& r, ReportFormat format) {
  if (format == ReportFormat::kMachine) return report_json(r).dump(2) + "\n";
  std::ostringstream os;
  write_report_text(os, r);
  return os.str();
}

// State names of a variable: labels when declared, indices otherwise.
inline std::vector<std::string> state_names(const Variable& v) {
  if (!v.states.empty()) return v.states;
  std::vector<std::string> out;
  for (std::size_t s = 0; s < v.cardinality; ++s) out.push_back(std::to_string(s));
  return out;
}

}  // namespace msbn
