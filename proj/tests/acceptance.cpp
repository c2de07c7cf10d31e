// One line per acceptance criterion; failing rows are listed underneath.

#include <cstdio>
#include <cstdlib>
#include <string>

#include "rna/verify.hpp"

int main(int argc, char** argv) {
  rna::VerifyConfig cfg;
  // Optional: seed, then a single criterion number.
  if (argc > 1) cfg.seed = std::strtoull(argv[1], nullptr, 10);
  const int only = argc > 2 ? std::atoi(argv[2]) : 0;
  bool ok = true;
  const auto& criteria = rna::all_criteria();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (only != 0 && static_cast<int>(i) + 1 != only) continue;
    const rna::CriterionResult r = criteria[i](cfg);
    std::printf("criterion %2d: %s  %s  (%zu rows, %.0f ms)\n", r.id, r.pass ? "PASS" : "FAIL", r.title.c_str(),
                r.rows.size(), r.wall_ms);
    int shown = 0;
    for (const auto& row : r.rows) {
      if (row.pass || shown++ >= 5) continue;
      std::printf("    %s  %s=%s expected=%s tol=%s  [%s]  %s\n", row.experiment.c_str(), row.quantity.c_str(),
                  rna::format_number(row.value).c_str(), rna::format_number(row.expected).c_str(),
                  rna::format_number(row.tolerance).c_str(), row.anchor.c_str(), row.params.c_str());
    }
    std::fflush(stdout);
    ok = ok && r.pass;
  }
  return ok ? 0 : 1;
}
