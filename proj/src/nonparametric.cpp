#include "survband/nonparametric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <stdexcept>

#include "survband/normal.hpp"

namespace survband {

namespace {

// (events, censorings) per distinct time, ascending.
std::map<double, std::pair<int, int>> tally(const SurvivalSample& s) {
  std::map<double, std::pair<int, int>> m;
  for (const auto& r : s.records) {
    auto& e = m[r.time];
    if (r.event)
      ++e.first;
    else
      ++e.second;
  }
  return m;
}

}  // namespace

double KMEstimate::survival_at(double t) const {
  auto it = std::upper_bound(event_times.begin(), event_times.end(), t);
  if (it == event_times.begin()) return 1.0;
  return survival[static_cast<std::size_t>(it - event_times.begin() - 1)];
}

double KMEstimate::variance_at(double t) const {
  auto it = std::upper_bound(event_times.begin(), event_times.end(), t);
  if (it == event_times.begin()) return 0.0;
  return greenwood_var[static_cast<std::size_t>(it - event_times.begin() - 1)];
}

KMEstimate kaplan_meier(const SurvivalSample& sample) {
  sample.validate();
  KMEstimate km;
  km.n = sample.size();
  for (const auto& r : sample.records) km.max_observed = std::max(km.max_observed, r.time);

  int at_risk = static_cast<int>(sample.size());
  double surv = 1.0;
  double gw_sum = 0.0;  // sum of d / (n (n - d))
  for (const auto& [time, counts] : tally(sample)) {
    const auto [d, c] = counts;
    if (d > 0) {
      surv *= 1.0 - static_cast<double>(d) / at_risk;
      if (at_risk > d)
        gw_sum += static_cast<double>(d) /
                  (static_cast<double>(at_risk) * (at_risk - d));
      km.event_times.push_back(time);
      km.survival.push_back(surv);
      km.greenwood_var.push_back(surv > 0.0 ? surv * surv * gw_sum : 0.0);
      km.at_risk.push_back(at_risk);
      km.n_events.push_back(d);
    }
    at_risk -= d + c;
  }
  return km;
}

ConfidenceBand km_difference_band(const KMEstimate& km1, const KMEstimate& km2,
                                  std::vector<double> grid, double alpha) {
  if (grid.empty()) throw std::invalid_argument("km_difference_band: empty grid");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("km_difference_band: alpha must be in (0,1)");

  ConfidenceBand band;
  band.target = BandTarget::survival_difference;
  band.method = BandMethod::asymptotic;
  band.alpha = alpha;
  band.grid = std::move(grid);
  const std::size_t m = band.grid.size();
  band.estimate.assign(m, 0.0);
  band.sigma.assign(m, 0.0);
  band.lower.assign(m, 0.0);
  band.upper.assign(m, 0.0);

  const double z = standard_normal_quantile(1.0 - alpha);
  const double nan = std::numeric_limits<double>::quiet_NaN();
  const double limit = std::min(km1.max_observed, km2.max_observed);
  for (std::size_t i = 0; i < m; ++i) {
    double t = band.grid[i];
    if (t > limit) {
      band.estimate[i] = band.sigma[i] = band.lower[i] = band.upper[i] = nan;
      continue;
    }
    band.estimate[i] = km1.survival_at(t) - km2.survival_at(t);
    band.sigma[i] = std::sqrt(km1.variance_at(t) + km2.variance_at(t));
    band.lower[i] = band.estimate[i] - z * band.sigma[i];
    band.upper[i] = band.estimate[i] + z * band.sigma[i];
  }
  return band;
}

LogrankResult logrank_test(const SurvivalSample& sample1, const SurvivalSample& sample2) {
  sample1.validate();
  sample2.validate();
  if (sample1.n_events() + sample2.n_events() == 0)
    throw std::invalid_argument("logrank_test: no events in either sample");

  auto m1 = tally(sample1);
  auto m2 = tally(sample2);
  std::vector<double> times;
  for (const auto& [t, e] : m1)
    if (e.first > 0) times.push_back(t);
  for (const auto& [t, e] : m2)
    if (e.first > 0) times.push_back(t);
  std::sort(times.begin(), times.end());
  times.erase(std::unique(times.begin(), times.end()), times.end());

  auto at_risk = [](const SurvivalSample& s, double t) {
    int k = 0;
    for (const auto& r : s.records) k += r.time >= t ? 1 : 0;
    return k;
  };

  double observed = 0.0, expected = 0.0, variance = 0.0;
  for (double t : times) {
    int n1 = at_risk(sample1, t), n2 = at_risk(sample2, t);
    int n = n1 + n2;
    int d1 = m1.count(t) ? m1[t].first : 0;
    int d2 = m2.count(t) ? m2[t].first : 0;
    int d = d1 + d2;
    if (n < 2 || d == 0) continue;
    double p1 = static_cast<double>(n1) / n;
    observed += d1;
    expected += d * p1;
    variance += d * p1 * (1.0 - p1) * (n - d) / (n - 1.0);
  }
  LogrankResult res;
  if (variance > 0.0) {
    res.statistic = (observed - expected) * (observed - expected) / variance;
    res.p_value = chi_squared_1df_sf(res.statistic);
  }
  return res;
}

}  // namespace survband
