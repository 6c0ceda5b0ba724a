#include "survband/bands.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "survband/optim.hpp"

namespace survband {

std::string_view band_target_name(BandTarget t) {
  return t == BandTarget::survival_difference ? "survival_difference" : "log_hazard_ratio";
}

std::string_view band_method_name(BandMethod m) {
  switch (m) {
    case BandMethod::asymptotic: return "asymptotic";
    case BandMethod::bootstrap: return "bootstrap";
    case BandMethod::bootstrap_nonparametric: return "bootstrap_nonparametric";
  }
  return "?";
}

double survival_difference(const FitResult& fit1, const FitResult& fit2, double t) {
  return survival(fit1.family, fit1.theta, t) - survival(fit2.family, fit2.theta, t);
}

double log_hazard_ratio(const FitResult& fit1, const FitResult& fit2, double t) {
  return log_hazard(fit1.family, fit1.theta, t) - log_hazard(fit2.family, fit2.theta, t);
}

double band_estimate(BandTarget target, const FitResult& fit1, const FitResult& fit2,
                     double t) {
  return target == BandTarget::survival_difference ? survival_difference(fit1, fit2, t)
                                                   : log_hazard_ratio(fit1, fit2, t);
}

namespace {

double quad_form_inv(const FitResult& fit, const Params& g) {
  const std::size_t n = fit.observed_info.n;
  std::vector<double> b(n);
  for (std::size_t i = 0; i < n; ++i) b[i] = g[i];
  auto sol = detail::solve_sym(fit.observed_info.dense(), n, b);
  if (!sol.ok || sol.condition > 1e10)
    throw numeric_error("delta_variance: observed information is numerically singular",
                        sol.condition);
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) acc += g[i] * sol.x[i];
  return acc;
}

void require_converged(const FitResult& fit) {
  if (!fit.converged)
    throw numeric_error("confidence band requires a converged fit");
}

}  // namespace

double delta_variance(const FitResult& fit1, const FitResult& fit2, double t,
                      BandTarget target) {
  require_converged(fit1);
  require_converged(fit2);
  Params g1, g2;
  if (target == BandTarget::survival_difference) {
    g1 = grad_survival(fit1.family, fit1.theta, t);
    g2 = grad_survival(fit2.family, fit2.theta, t);
  } else {
    g1 = grad_log_hazard(fit1.family, fit1.theta, t);
    g2 = grad_log_hazard(fit2.family, fit2.theta, t);
  }
  return quad_form_inv(fit1, g1) + quad_form_inv(fit2, g2);
}

namespace {

// One parametric bootstrap group: survival times from the fitted event model,
// censoring times from the fitted censoring model, administrative cutoff on
// top when configured.
SurvivalSample simulate_group(const FitResult& fit, std::size_t n,
                              const std::optional<double>& t_max, Rng& rng) {
  const FitResult& cens = *fit.censor_fit;
  SurvivalSample out;
  out.label = fit.label;
  out.records.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    out.records[j].time = quantile(fit.family, fit.theta, rng.uniform01());
  for (std::size_t j = 0; j < n; ++j) {
    double c = cens.degenerate
                   ? std::numeric_limits<double>::infinity()
                   : quantile(cens.family, cens.theta, rng.uniform01());
    if (t_max) c = std::min(c, *t_max);
    double y = out.records[j].time;
    out.records[j].event = y <= c;
    out.records[j].time = std::min(y, c);
  }
  return out;
}

SurvivalSample resample_group(const SurvivalSample& s, Rng& rng) {
  SurvivalSample out;
  out.label = s.label;
  const std::size_t n = s.size();
  out.records.resize(n);
  for (std::size_t j = 0; j < n; ++j) {
    auto idx = static_cast<std::size_t>(rng.uniform01() * static_cast<double>(n));
    if (idx >= n) idx = n - 1;
    out.records[j] = s.records[idx];
  }
  return out;
}

}  // namespace

std::vector<std::vector<std::vector<double>>> bootstrap_replicates_multi(
    const FitResult& fit1, const FitResult& fit2, std::span<const double> grid,
    std::span<const BandTarget> targets, const BootstrapOptions& opts, const Rng& rng,
    bool nonparametric) {
  if (opts.n_boot < 2) throw std::invalid_argument("bootstrap: n_boot must be >= 2");
  if (targets.empty()) throw std::invalid_argument("bootstrap: no targets");
  if (!nonparametric && (!fit1.censor_fit || !fit2.censor_fit))
    throw std::invalid_argument("parametric bootstrap requires censoring fits");
  if (nonparametric && (!opts.sample1 || !opts.sample2))
    throw std::invalid_argument("nonparametric bootstrap requires the original samples");

  const long budget = static_cast<long>(opts.retry_factor) * opts.n_boot;
  std::vector<std::vector<std::vector<double>>> curves(targets.size());
  for (auto& c : curves) c.reserve(static_cast<std::size_t>(opts.n_boot));

  for (long attempt = 0; attempt < budget &&
                         curves[0].size() < static_cast<std::size_t>(opts.n_boot);
       ++attempt) {
    Rng r = rng.substream(static_cast<std::uint64_t>(attempt));
    try {
      SurvivalSample s1 = nonparametric
                              ? resample_group(*opts.sample1, r)
                              : simulate_group(fit1, fit1.n, opts.t_max, r);
      SurvivalSample s2 = nonparametric
                              ? resample_group(*opts.sample2, r)
                              : simulate_group(fit2, fit2.n, opts.t_max, r);
      if (s1.n_events() == 0 || s2.n_events() == 0) continue;
      FitOptions fo;
      fo.start = fit1.theta;
      FitResult r1 = fit_mle(s1, fit1.family, fo);
      fo.start = fit2.theta;
      FitResult r2 = fit_mle(s2, fit2.family, fo);
      if (!r1.converged || !r2.converged) continue;
      for (std::size_t ti = 0; ti < targets.size(); ++ti) {
        std::vector<double> row(grid.size());
        for (std::size_t i = 0; i < grid.size(); ++i)
          row[i] = band_estimate(targets[ti], r1, r2, grid[i]);
        curves[ti].push_back(std::move(row));
      }
    } catch (const std::exception&) {
      continue;
    }
  }
  if (curves[0].size() < static_cast<std::size_t>(opts.n_boot))
    throw numeric_error("bootstrap: retry budget exhausted before n_boot replicates");
  return curves;
}

std::vector<std::vector<double>> bootstrap_replicates(
    const FitResult& fit1, const FitResult& fit2, std::span<const double> grid,
    BandTarget target, const BootstrapOptions& opts, const Rng& rng,
    bool nonparametric) {
  const BandTarget targets[1] = {target};
  auto multi = bootstrap_replicates_multi(fit1, fit2, grid, targets, opts, rng,
                                          nonparametric);
  return std::move(multi[0]);
}

double bootstrap_variance(const FitResult& fit1, const FitResult& fit2, double t,
                          BandTarget target, int n_boot, const Rng& rng,
                          const BootstrapOptions& opts) {
  BootstrapOptions o = opts;
  o.n_boot = n_boot;
  const double grid[1] = {t};
  auto curves = bootstrap_replicates(fit1, fit2, grid, target, o, rng);
  double mean = 0.0;
  for (const auto& row : curves) mean += row[0];
  mean /= static_cast<double>(curves.size());
  double acc = 0.0;
  for (const auto& row : curves) acc += (row[0] - mean) * (row[0] - mean);
  return acc / static_cast<double>(curves.size() - 1);
}

ConfidenceBand pointwise_band(const FitResult& fit1, const FitResult& fit2,
                              std::vector<double> grid, BandTarget target,
                              BandMethod method, double alpha, const Rng& rng,
                              const BootstrapOptions& opts) {
  if (grid.empty()) throw std::invalid_argument("pointwise_band: empty grid");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("pointwise_band: alpha must be in (0,1)");
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (!(grid[i] > 0.0))
      throw std::invalid_argument("pointwise_band: grid times must be positive");
    if (i > 0 && !(grid[i] > grid[i - 1]))
      throw std::invalid_argument("pointwise_band: grid must be ascending");
  }
  require_converged(fit1);
  require_converged(fit2);

  ConfidenceBand band;
  band.target = target;
  band.method = method;
  band.alpha = alpha;
  band.grid = std::move(grid);
  const std::size_t m = band.grid.size();
  band.estimate.resize(m);
  band.sigma.resize(m);
  band.lower.resize(m);
  band.upper.resize(m);

  for (std::size_t i = 0; i < m; ++i)
    band.estimate[i] = band_estimate(target, fit1, fit2, band.grid[i]);

  if (method == BandMethod::asymptotic) {
    for (std::size_t i = 0; i < m; ++i)
      band.sigma[i] = std::sqrt(delta_variance(fit1, fit2, band.grid[i], target));
  } else {
    auto curves = bootstrap_replicates(fit1, fit2, band.grid, target, opts, rng,
                                       method == BandMethod::bootstrap_nonparametric);
    const double nb = static_cast<double>(curves.size());
    for (std::size_t i = 0; i < m; ++i) {
      double mean = 0.0;
      for (const auto& row : curves) mean += row[i];
      mean /= nb;
      double acc = 0.0;
      for (const auto& row : curves) acc += (row[i] - mean) * (row[i] - mean);
      band.sigma[i] = std::sqrt(acc / (nb - 1.0));
    }
  }

  const double z = standard_normal_quantile(1.0 - alpha);
  for (std::size_t i = 0; i < m; ++i) {
    band.lower[i] = band.estimate[i] - z * band.sigma[i];
    band.upper[i] = band.estimate[i] + z * band.sigma[i];
  }
  return band;
}

}  // namespace survband
