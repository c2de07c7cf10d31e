#include "rna/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include <json.hpp>

namespace rna {

namespace {

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

nlohmann::ordered_json number_or_null(double x) {
  if (std::isnan(x)) return nullptr;
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return x;
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

void sort_rows(std::vector<ReportRow>& rows) {
  std::stable_sort(rows.begin(), rows.end(),
                   [](const ReportRow& a, const ReportRow& b) { return a.experiment < b.experiment; });
}

bool all_pass(const std::vector<ReportRow>& rows) {
  return std::all_of(rows.begin(), rows.end(), [](const ReportRow& r) { return r.pass; });
}

void write_csv(std::ostream& out, const std::vector<ReportRow>& rows) {
  out << "schema_version,experiment,params,quantity,value,expected,tolerance,pass,anchor,wall_ms\n";
  char ms[32];
  for (const auto& r : rows) {
    std::snprintf(ms, sizeof ms, "%.3f", r.wall_ms);
    out << kReportSchemaVersion << ',' << csv_field(r.experiment) << ',' << csv_field(r.params) << ','
        << csv_field(r.quantity) << ',' << format_number(r.value) << ',' << format_number(r.expected) << ','
        << format_number(r.tolerance) << ',' << (r.pass ? "true" : "false") << ',' << csv_field(r.anchor)
        << ',' << ms << '\n';
  }
}

void write_json(std::ostream& out, const std::vector<ReportRow>& rows) {
  nlohmann::ordered_json doc;
  doc["schema_version"] = kReportSchemaVersion;
  doc["rows"] = nlohmann::ordered_json::array();
  for (const auto& r : rows) {
    nlohmann::ordered_json j;
    j["experiment"] = r.experiment;
    j["params"] = r.params;
    j["quantity"] = r.quantity;
    j["value"] = number_or_null(r.value);
    j["expected"] = number_or_null(r.expected);
    j["tolerance"] = number_or_null(r.tolerance);
    j["pass"] = r.pass;
    j["anchor"] = r.anchor;
    j["wall_ms"] = r.wall_ms;
    doc["rows"].push_back(std::move(j));
  }
  out << doc.dump(2) << '\n';
}

}  // namespace rna
