#pragma once

// The experiment harness: runs the k-sweep catalog and collects per-k
// defect rows plus fitted rate reports.

#include <string>
#include <vector>

#include "fineq/config.hpp"
#include "fineq/rate.hpp"

namespace fineq {

struct DefectRow {
  std::string experiment;
  int k = 0;        // Hilbert-space level (matrix size for schatten_sandwich)
  double defect = 0.0;
  double p = 0.0;   // norm index; infinity = operator norm
  std::string extra;
};

struct SuiteResult {
  std::vector<DefectRow> rows;      // sorted by (experiment, k, p)
  std::vector<RateReport> reports;  // sorted by name

  bool all_pass() const;
};

// catalog names resolve per config; throws config_error on unknown names
SuiteResult run_suite(const RunConfig& cfg);

}  // namespace fineq
