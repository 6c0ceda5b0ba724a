#pragma once

#include <optional>
#include <span>
#include <vector>

#include "survband/inference.hpp"
#include "survband/normal.hpp"
#include "survband/rng.hpp"

namespace survband {

enum class BandTarget { survival_difference, log_hazard_ratio };
enum class BandMethod { asymptotic, bootstrap, bootstrap_nonparametric };

std::string_view band_target_name(BandTarget t);
std::string_view band_method_name(BandMethod m);

// Pointwise confidence band: estimate(t) +- z_{1-alpha} * sigma(t) per grid
// point. alpha is the one-sided level of each bound; the band is the
// two-sided (1-2*alpha) region formed by the two one-sided bounds.
// Grid points a band cannot serve (nonparametric bands past the last
// observed time) carry NaN in all value columns.
struct ConfidenceBand {
  BandTarget target = BandTarget::survival_difference;
  BandMethod method = BandMethod::asymptotic;
  double alpha = 0.05;
  std::vector<double> grid, estimate, lower, upper, sigma;
};

// S_1(t) - S_2(t) evaluated at the fitted parameters.
double survival_difference(const FitResult& fit1, const FitResult& fit2, double t);
// log( h_1(t) / h_2(t) ) at the fitted parameters.
double log_hazard_ratio(const FitResult& fit1, const FitResult& fit2, double t);
double band_estimate(BandTarget target, const FitResult& fit1, const FitResult& fit2,
                     double t);

// Delta-method variance of the target at time t:
//   g_1' I_1^{-1} g_1 + g_2' I_2^{-1} g_2
// with the total-sample observed information (which already carries the 1/n
// scaling of the per-observation version). Throws numeric_error with a
// condition estimate when an information matrix is numerically singular.
double delta_variance(const FitResult& fit1, const FitResult& fit2, double t,
                      BandTarget target);

struct BootstrapOptions {
  int n_boot = 500;
  // Administrative cutoff of the originating design; simulated times are
  // additionally censored at t_max when set.
  std::optional<double> t_max;
  // Total draw budget is retry_factor * n_boot; replicates whose refit fails
  // are skipped and replaced by later draws.
  int retry_factor = 10;
  // For the nonparametric variant only: the original per-group samples to
  // resample from.
  const SurvivalSample* sample1 = nullptr;
  const SurvivalSample* sample2 = nullptr;
};

// Replicate target curves over a grid: row k holds the k-th bootstrap
// replicate evaluated at every grid point. Parametric resampling draws
// (y*, c*) from the fitted event and censoring models, refits the event
// model per group and evaluates the target. Requires censor_fit on both
// fits (a degenerate censoring fit means no random censoring).
std::vector<std::vector<double>> bootstrap_replicates(
    const FitResult& fit1, const FitResult& fit2, std::span<const double> grid,
    BandTarget target, const BootstrapOptions& opts, const Rng& rng,
    bool nonparametric = false);

// Same replicates evaluated for several targets at once (one set of refits);
// result[i] is the replicate matrix for targets[i].
std::vector<std::vector<std::vector<double>>> bootstrap_replicates_multi(
    const FitResult& fit1, const FitResult& fit2, std::span<const double> grid,
    std::span<const BandTarget> targets, const BootstrapOptions& opts, const Rng& rng,
    bool nonparametric = false);

// Sample variance of the replicate targets at one time point: simulate from
// the fitted models, refit, evaluate, take the variance over n_boot replicates.
double bootstrap_variance(const FitResult& fit1, const FitResult& fit2, double t,
                          BandTarget target, int n_boot, const Rng& rng,
                          const BootstrapOptions& opts = {});

ConfidenceBand pointwise_band(const FitResult& fit1, const FitResult& fit2,
                              std::vector<double> grid, BandTarget target,
                              BandMethod method, double alpha, const Rng& rng,
                              const BootstrapOptions& opts = {});

}  // namespace survband
