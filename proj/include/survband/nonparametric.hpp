#pragma once

#include "survband/bands.hpp"
#include "survband/types.hpp"

namespace survband {

// Product-limit estimate with Greenwood variance. Steps are located at the
// distinct event times; at a tied time events are processed before
// censorings, and evaluation between steps carries the last value forward.
struct KMEstimate {
  std::vector<double> event_times;    // distinct times with >= 1 event, ascending
  std::vector<double> survival;       // S(t_i) just after the step
  std::vector<double> greenwood_var;  // Greenwood variance at t_i
  std::vector<int> at_risk;           // risk-set size just before t_i
  std::vector<int> n_events;          // events at t_i
  std::size_t n = 0;                  // sample size
  double max_observed = 0.0;          // largest observed time, any status

  // Right-continuous step evaluation; S(t)=1 and var=0 before the first event.
  double survival_at(double t) const;
  double variance_at(double t) const;
};

KMEstimate kaplan_meier(const SurvivalSample& sample);

// Pointwise band for S1-S2 from two KM curves: estimate from the step
// functions, variance as the sum of the Greenwood variances, normal bounds as
// in the parametric construction. Grid points beyond the last observed time
// of either group are flagged unavailable (NaN columns).
ConfidenceBand km_difference_band(const KMEstimate& km1, const KMEstimate& km2,
                                  std::vector<double> grid, double alpha);

struct LogrankResult {
  double statistic = 0.0;  // chi-square, 1 df
  double p_value = 1.0;
};

// Two-group log-rank test. Requires at least one event overall.
LogrankResult logrank_test(const SurvivalSample& sample1, const SurvivalSample& sample2);

}  // namespace survband
