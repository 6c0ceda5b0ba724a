#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "survband/equivtest.hpp"

namespace survband {

struct CensoringSpec {
  enum class Kind { exponential, uniform } kind = Kind::exponential;
  double param = 0.1;  // rate, or upper bound of U(0, param)

  double draw(Rng& rng) const;
};

struct GroupTruth {
  Family family = Family::weibull;
  Params theta;
  CensoringSpec censoring;
};

// Generative truth for one simulation scenario: event model and censoring
// mechanism per group, administrative cutoff, evaluation grid, and the
// (possibly misspecified) family the study fits.
struct ScenarioConfig {
  std::string name;
  GroupTruth group1, group2;
  double t_max = 0.0;
  std::vector<double> grid;
  Family fit_family = Family::weibull;
  Family censoring_fit_family = Family::exponential;

  double true_survival(int group, double t) const;
  double true_difference(double t) const;      // S1 - S2
  double true_log_hazard_ratio(double t) const;
  double truth(BandTarget target, double t) const;
};

// Named configurations of the simulation study; scen1a/scen1b are Weibull
// pairs with exponential censoring and t_max = 9, scen2 is the log-logistic
// misspecification scenario with uniform censoring and t_max = 12.
ScenarioConfig scenario(const std::string& name);
std::vector<std::string> scenario_names();

// Per subject: y from the event family, c from the censoring mechanism
// truncated at t_max; observed (min(y,c'), 1{y <= c'}).
std::pair<SurvivalSample, SurvivalSample> generate_pair(const ScenarioConfig& config,
                                                        std::size_t n1, std::size_t n2,
                                                        Rng rng);

// Upper bound c of U(0,c) censoring such that P(censored) matches target_rate
// under the given event model and administrative cutoff; bisection against a
// numeric integral, absolute tolerance 0.005.
double calibrate_uniform_censoring(Family family, const Params& theta, double t_max,
                                   double target_rate);

// Exact censoring probability used by the calibration (numeric integral).
double uniform_censoring_probability(Family family, const Params& theta, double t_max,
                                     double c);

struct CoverageRow {
  double t = 0.0;
  BandTarget target = BandTarget::survival_difference;
  BandMethod method = BandMethod::asymptotic;
  double alpha = 0.05;
  double truth = 0.0;
  double cover_both = 0.0;   // truth inside [L,U]
  double cover_lower = 0.0;  // L <= truth
  double cover_upper = 0.0;  // truth <= U
  double mc_se = 0.0;        // binomial SE of cover_both
  int n_sim = 0;
};

struct CoverageStudy {
  std::string scenario;
  std::size_t n1 = 0, n2 = 0;
  int n_sim = 0, n_boot = 0;
  std::uint64_t seed = 0;
  int redraws = 0;  // simulation runs redrawn because a fit failed
  std::vector<CoverageRow> rows;
};

CoverageStudy coverage_study(const ScenarioConfig& config, std::size_t n1, std::size_t n2,
                             int n_sim, const std::vector<BandMethod>& methods,
                             const std::vector<BandTarget>& targets,
                             const std::vector<double>& alphas, int n_boot, Rng rng,
                             const std::optional<std::vector<double>>& grid_override = {},
                             int n_threads = 0);

// One test cell of a rejection study. ref_group selects the direction:
// the tested quantity is D = S_ref - S_other (or the log-HR analogue).
struct RejectionSpec {
  TestKind kind = TestKind::equivalence;
  BandTarget target = BandTarget::survival_difference;
  double t0 = 0.0;
  double margin = 0.1;
  int ref_group = 1;
  std::optional<std::pair<double, double>> interval;  // interval test when set
  int grid_n = 102;
};

struct RejectionRow {
  RejectionSpec spec;
  double truth = 0.0;    // true tested difference at t0 (or its interval max)
  bool under_null = false;
  double rate = 0.0;
  double mc_se = 0.0;
  int n_sim = 0;
};

struct RejectionStudy {
  std::string scenario;
  std::size_t n1 = 0, n2 = 0;
  int n_sim = 0, n_boot = 0;
  double alpha = 0.05;
  BandMethod method = BandMethod::asymptotic;
  std::uint64_t seed = 0;
  int redraws = 0;
  std::vector<RejectionRow> rows;
};

RejectionStudy rejection_study(const ScenarioConfig& config, std::size_t n1,
                               std::size_t n2, int n_sim,
                               const std::vector<RejectionSpec>& specs, double alpha,
                               BandMethod method, int n_boot, Rng rng,
                               int n_threads = 0);

}  // namespace survband
