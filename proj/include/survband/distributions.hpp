#pragma once

#include <optional>
#include <string_view>
#include <vector>

#include "survband/rng.hpp"
#include "survband/types.hpp"

namespace survband {

// Parametric event-time families. Two-parameter families use the order
// (shape, scale): shape dimensionless, scale in time units. The exponential
// has a single rate (1/time).
//
//   weibull       S(t) = exp{-(t/scale)^shape}
//   exponential   S(t) = exp{-rate * t}
//   log_logistic  S(t) = 1 / (1 + (t/scale)^shape)      (scale = median)
//   log_normal    S(t) = 1 - Phi(log(t/scale) / shape)  (scale = median)
enum class Family { weibull, exponential, log_logistic, log_normal };

inline constexpr Family kAllFamilies[] = {Family::weibull, Family::exponential,
                                          Family::log_logistic, Family::log_normal};

std::size_t n_params(Family f);
std::string_view family_name(Family f);
std::optional<Family> family_from_name(std::string_view name);

// All five curve values at one time point, mutually consistent:
// survival = 1 - cdf, pdf = hazard * survival, cum_hazard = -log survival.
struct CurveValues {
  double pdf = 0.0;
  double cdf = 0.0;
  double survival = 1.0;
  double hazard = 0.0;
  double cum_hazard = 0.0;
};

// Throws std::domain_error if theta has the wrong arity or leaves the
// positive domain.
void check_domain(Family f, const Params& theta);

CurveValues eval(Family f, const Params& theta, double t);

double survival(Family f, const Params& theta, double t);
double log_pdf(Family f, const Params& theta, double t);
double log_survival(Family f, const Params& theta, double t);
double log_hazard(Family f, const Params& theta, double t);

// Inverse cdf; F(quantile(p)) = p to 1e-10.
double quantile(Family f, const Params& theta, double p);

// n i.i.d. draws via the inverse-cdf transform; deterministic given the rng.
std::vector<double> sample(Family f, const Params& theta, std::size_t n, Rng& rng);

// dS/dtheta, one entry per parameter. Analytic for weibull, exponential and
// log_logistic; central finite differences with step 1e-5*max(1,|theta_i|)
// for log_normal.
Params grad_survival(Family f, const Params& theta, double t);

// d log h / dtheta; same analytic/finite-difference split as grad_survival.
// Throws numeric_error if the hazard vanishes at t.
Params grad_log_hazard(Family f, const Params& theta, double t);

// Central-difference step rule used wherever this library differentiates
// numerically with respect to a parameter.
inline double fd_step(double theta_i) {
  double a = theta_i < 0 ? -theta_i : theta_i;
  return 1e-5 * (a > 1.0 ? a : 1.0);
}

}  // namespace survband
