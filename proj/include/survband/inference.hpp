#pragma once

#include <limits>
#include <memory>
#include <optional>
#include <vector>

#include "survband/distributions.hpp"
#include "survband/types.hpp"

namespace survband {

// Symmetric observed-information matrix (negative Hessian of the event
// log-likelihood at theta_hat, in original parameter coordinates).
struct InfoMatrix {
  std::size_t n = 0;
  std::array<double, 4> a{};  // row-major, n*n entries used

  double at(std::size_t i, std::size_t j) const { return a[i * n + j]; }
  std::vector<double> dense() const {
    return std::vector<double>(a.begin(), a.begin() + n * n);
  }
};

struct FitOptions {
  std::optional<Params> start;
  int max_iter = 2000;
  // Convergence threshold on the log-likelihood gradient norm in
  // unconstrained log-parameter coordinates.
  double tol = 1e-3;
};

struct FitResult {
  Family family = Family::weibull;
  Params theta;
  double loglik = std::numeric_limits<double>::quiet_NaN();
  InfoMatrix observed_info;
  std::size_t n = 0;
  double aic = std::numeric_limits<double>::quiet_NaN();
  bool converged = false;
  // Set on censoring fits produced from samples with no censored records:
  // the rate is reported as 0 and no likelihood exists.
  bool degenerate = false;
  std::shared_ptr<const FitResult> censor_fit;
  std::string label;
};

// Event-model objective: sum over records of delta*log f + (1-delta)*log S.
// Returns -inf when the density vanishes at an event time.
double log_likelihood(const SurvivalSample& sample, Family family, const Params& theta);

// Censoring-model objective: sum of delta*log(1-G) + (1-delta)*log g.
double censoring_log_likelihood(const SurvivalSample& sample, Family family,
                                const Params& psi);

// Censored maximum likelihood for the event distribution. Simplex search over
// log-parameters followed by a Newton polish; observed information by
// symmetric differences in the original parametrization.
FitResult fit_mle(const SurvivalSample& sample, Family family, const FitOptions& opts = {});

// MLE of the censoring distribution (statuses flipped). Requires at least one
// censored record.
FitResult fit_censoring(const SurvivalSample& sample, Family family);

// Event fit with the censoring fit attached; a sample without censored
// records yields a degenerate censoring entry instead of an error so that
// bootstrap pipelines can continue.
FitResult fit_joint(const SurvivalSample& sample, Family event_family,
                    Family censoring_family, const FitOptions& opts = {});

// Fits each family and ranks by ascending AIC; ties broken by fewer
// parameters, then declaration order of the family tags. Fits that failed to
// converge sort last and keep converged=false.
std::vector<FitResult> select_model(const SurvivalSample& sample,
                                    const std::vector<Family>& families = {
                                        Family::weibull, Family::exponential,
                                        Family::log_logistic, Family::log_normal});

}  // namespace survband
