// Independent test oracles: brute-force and closed-form routes kept separate
// from the library paths they check.
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "survband/distributions.hpp"
#include "survband/types.hpp"

namespace oracles {

// Central finite difference of a scalar function of Params, step
// 1e-5 * max(1, |theta_i|).
inline survband::Params fd_gradient(const std::function<double(const survband::Params&)>& f,
                                    const survband::Params& theta, double step_scale = 1e-5) {
  survband::Params g = theta;
  for (std::size_t i = 0; i < theta.size(); ++i) {
    double h = step_scale * std::max(1.0, std::abs(theta[i]));
    survband::Params tp = theta, tm = theta;
    tp[i] += h;
    tm[i] -= h;
    g[i] = (f(tp) - f(tm)) / (2.0 * h);
  }
  return g;
}

// Quantile by bisection on the cdf, independent of the closed forms.
inline double bisect_quantile(survband::Family fam, const survband::Params& theta,
                              double p) {
  double lo = 1e-12, hi = 1.0;
  auto cdf = [&](double t) { return survband::eval(fam, theta, t).cdf; };
  while (cdf(hi) < p) hi *= 2.0;
  for (int i = 0; i < 200; ++i) {
    double mid = 0.5 * (lo + hi);
    (cdf(mid) < p ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

// Closed-form MLE of a censored exponential model: rate = #events / sum(t).
inline double censored_exponential_mle(const survband::SurvivalSample& s) {
  double sum_t = 0.0;
  double events = 0.0;
  for (const auto& r : s.records) {
    sum_t += r.time;
    events += r.event ? 1.0 : 0.0;
  }
  return events / sum_t;
}

// Per-record brute-force log-likelihood via eval(), an independent route to
// the vectorized objective.
inline double per_record_loglik(const survband::SurvivalSample& s, survband::Family fam,
                                const survband::Params& theta) {
  double acc = 0.0;
  for (const auto& r : s.records) {
    auto cv = survband::eval(fam, theta, r.time);
    acc += r.event ? std::log(cv.pdf) : std::log(cv.survival);
  }
  return acc;
}

}  // namespace oracles
