#pragma once

// Log-log rate fitting: turns (k, defect) sweeps into fitted slopes with
// OLS diagnostics and a pass/fail/invalid verdict.

#include <limits>
#include <string>
#include <vector>

namespace fineq {

inline constexpr double kDefectFloor = 1e-13;

struct RateSample {
  int k = 0;
  double defect = 0.0;
};

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// OLS on (log k, log defect); throws insufficient_data_error below 3 samples
FitResult fit_rate(const std::vector<RateSample>& samples);

struct RateReport {
  std::string name;
  std::vector<RateSample> samples;  // sorted by k
  bool fitted = false;              // false when exact or absolute-threshold
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  std::string verdict;  // pass | fail | invalid
  std::string note;
  double integrator_defect = 0.0;
};

struct RateCriteria {
  // slope window [slope_min, slope_max]; +-inf disables a side
  double slope_max = std::numeric_limits<double>::infinity();
  double slope_min = -std::numeric_limits<double>::infinity();
  double r2_min = 0.0;
  // defects at/below this are classified as exact; raise it for quantities
  // that vanish identically and only show eigensolver roundoff
  double exact_floor = kDefectFloor;
};

// fits after dropping defects at/below the floor ("exact" samples); verdict
// invalid when < 3 usable non-exact samples remain or the integrator error
// exceeds 1% of the smallest fitted defect
RateReport assess_rate(std::string name, std::vector<RateSample> samples,
                       const RateCriteria& criteria, double integrator_defect = 0.0);

// all samples must stay at/below (ceiling) or at/above (floor) the bound
RateReport assess_absolute(std::string name, std::vector<RateSample> samples,
                           double bound, bool upper, double integrator_defect = 0.0);

}  // namespace fineq
