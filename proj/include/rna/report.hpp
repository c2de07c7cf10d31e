#pragma once

// Experiment report rows and their CSV / JSON serialisation.

#include <iosfwd>
#include <limits>
#include <string>
#include <vector>

namespace rna {

inline constexpr int kReportSchemaVersion = 1;

struct ReportRow {
  std::string experiment;  // sort key, e.g. "c05.sigma_oracle/0012"
  std::string params;      // enough to replay the row
  std::string quantity;
  double value = std::numeric_limits<double>::quiet_NaN();
  double expected = std::numeric_limits<double>::quiet_NaN();  // NaN: no reference value
  double tolerance = std::numeric_limits<double>::quiet_NaN();
  bool pass = true;
  std::string anchor;  // name of the property the row checks
  double wall_ms = 0.0;
};

/// Stable sort by experiment id.
void sort_rows(std::vector<ReportRow>& rows);

bool all_pass(const std::vector<ReportRow>& rows);

/// Fixed header, one line per row, numbers with 17 significant digits.
void write_csv(std::ostream& out, const std::vector<ReportRow>& rows);
/// {"schema_version": 1, "rows": [...]} with the same fields as the CSV.
void write_json(std::ostream& out, const std::vector<ReportRow>& rows);

std::string format_number(double x);

}  // namespace rna
