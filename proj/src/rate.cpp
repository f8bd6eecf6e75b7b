#include "fineq/rate.hpp"

#include <algorithm>
#include <cmath>

#include "fineq/errors.hpp"

namespace fineq {

FitResult fit_rate(const std::vector<RateSample>& samples) {
  if (samples.size() < 3)
    throw insufficient_data_error("rate fit needs at least 3 samples, got " +
                                  std::to_string(samples.size()));
  std::vector<double> xs, ys;
  for (const auto& s : samples) {
    if (s.k < 1 || s.defect <= 0.0)
      throw insufficient_data_error("rate fit needs positive k and defects");
    xs.push_back(std::log(double(s.k)));
    ys.push_back(std::log(s.defect));
  }
  size_t n = xs.size();
  double mx = 0.0, my = 0.0;
  for (size_t i = 0; i < n; ++i) {
    mx += xs[i];
    my += ys[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  FitResult out;
  out.slope = sxy / sxx;
  out.intercept = my - out.slope * mx;
  if (syy < 1e-30) {
    out.r_squared = 1.0;
  } else {
    double ss_res = 0.0;
    for (size_t i = 0; i < n; ++i) {
      double r = ys[i] - (out.intercept + out.slope * xs[i]);
      ss_res += r * r;
    }
    out.r_squared = 1.0 - ss_res / syy;
  }
  return out;
}

RateReport assess_rate(std::string name, std::vector<RateSample> samples,
                       const RateCriteria& criteria, double integrator_defect) {
  std::sort(samples.begin(), samples.end(),
            [](const RateSample& a, const RateSample& b) { return a.k < b.k; });
  RateReport rep;
  rep.name = std::move(name);
  rep.samples = samples;
  rep.integrator_defect = integrator_defect;

  double floor = std::max(kDefectFloor, criteria.exact_floor);
  std::vector<RateSample> usable;
  for (const auto& s : samples)
    if (s.defect > floor) usable.push_back(s);

  if (usable.empty()) {
    rep.verdict = "pass";
    rep.note = "exact";
    rep.slope = rep.intercept = std::nan("");
    rep.r_squared = std::nan("");
    return rep;
  }
  if (usable.size() < 3) {
    rep.verdict = "invalid";
    rep.note = "fewer than 3 samples above the defect floor";
    rep.slope = rep.intercept = std::nan("");
    rep.r_squared = std::nan("");
    return rep;
  }

  FitResult fit = fit_rate(usable);
  rep.fitted = true;
  rep.slope = fit.slope;
  rep.intercept = fit.intercept;
  rep.r_squared = fit.r_squared;

  double smallest = usable.front().defect;
  for (const auto& s : usable) smallest = std::min(smallest, s.defect);
  if (integrator_defect > 0.01 * smallest) {
    rep.verdict = "invalid";
    rep.note = "integrator error exceeds 1% of the smallest fitted defect";
    return rep;
  }

  bool ok = fit.slope <= criteria.slope_max && fit.slope >= criteria.slope_min &&
            fit.r_squared >= criteria.r2_min;
  rep.verdict = ok ? "pass" : "fail";
  if (usable.size() < samples.size()) rep.note = "some samples exact";
  return rep;
}

RateReport assess_absolute(std::string name, std::vector<RateSample> samples,
                           double bound, bool upper, double integrator_defect) {
  std::sort(samples.begin(), samples.end(),
            [](const RateSample& a, const RateSample& b) { return a.k < b.k; });
  RateReport rep;
  rep.name = std::move(name);
  rep.samples = samples;
  rep.integrator_defect = integrator_defect;
  rep.slope = rep.intercept = std::nan("");
  rep.r_squared = std::nan("");
  bool ok = true;
  for (const auto& s : samples)
    ok = ok && (upper ? s.defect <= bound : s.defect >= bound);
  rep.verdict = ok ? "pass" : "fail";
  rep.note = std::string(upper ? "max <= " : "min >= ") + std::to_string(bound);
  return rep;
}

}  // namespace fineq
