#include "survband/simulation.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <stdexcept>
#include <thread>

namespace survband {

namespace {

std::vector<double> linspace(double a, double b, int n) {
  std::vector<double> g(static_cast<std::size_t>(n));
  const double step = (b - a) / static_cast<double>(n - 1);
  for (int i = 0; i < n; ++i) g[static_cast<std::size_t>(i)] = a + step * i;
  g.back() = b;
  return g;
}

// Uniform-censoring upper bounds for scen2, frozen from
// calibrate_uniform_censoring(log_logistic, theta, 12, 0.20) so the scenario
// is fully pinned; a regression test re-derives them from the 20% target.
constexpr double kScen2C1 = 26.075;
constexpr double kScen2C2 = 33.609;

}  // namespace

double CensoringSpec::draw(Rng& rng) const {
  double u = rng.uniform01();
  return kind == Kind::exponential ? -std::log1p(-u) / param : param * u;
}

double ScenarioConfig::true_survival(int group, double t) const {
  const GroupTruth& g = group == 1 ? group1 : group2;
  return survival(g.family, g.theta, t);
}

double ScenarioConfig::true_difference(double t) const {
  return true_survival(1, t) - true_survival(2, t);
}

double ScenarioConfig::true_log_hazard_ratio(double t) const {
  return log_hazard(group1.family, group1.theta, t) -
         log_hazard(group2.family, group2.theta, t);
}

double ScenarioConfig::truth(BandTarget target, double t) const {
  return target == BandTarget::survival_difference ? true_difference(t)
                                                   : true_log_hazard_ratio(t);
}

ScenarioConfig scenario(const std::string& name) {
  using K = CensoringSpec::Kind;
  ScenarioConfig c;
  c.name = name;
  if (name == "scen1a_null" || name == "scen1a_alt") {
    c.group1 = {Family::weibull, Params::of(1.5, 3.4), {K::exponential, 0.10}};
    // The event/censoring pairing printed in the source text gives ~34% and
    // ~16% censoring; the stated ~25% target holds with the rates swapped,
    // which is what the registry uses.
    if (name == "scen1a_null")
      c.group2 = {Family::weibull, Params::of(1.5, 4.9), {K::exponential, 0.05}};
    else
      c.group2 = {Family::weibull, Params::of(1.5, 3.7), {K::exponential, 0.09}};
    c.t_max = 9.0;
    c.grid = linspace(1.5, 6.0, 23);
  } else if (name == "scen1b_null" || name == "scen1b_alt") {
    c.group1 = {Family::weibull, Params::of(1.5, 3.4), {K::exponential, 0.10}};
    if (name == "scen1b_null")
      c.group2 = {Family::weibull, Params::of(2.0, 2.5), {K::exponential, 0.14}};
    else
      c.group2 = {Family::weibull, Params::of(2.0, 3.4), {K::exponential, 0.10}};
    c.t_max = 9.0;
    c.grid = linspace(1.5, 4.0, 14);
  } else if (name == "scen2") {
    c.group1 = {Family::log_logistic, Params::of(1.5, 2.6), {K::uniform, kScen2C1}};
    c.group2 = {Family::log_logistic, Params::of(2.1, 3.9), {K::uniform, kScen2C2}};
    c.t_max = 12.0;
    c.grid = linspace(1.0, 5.0, 21);
  } else {
    throw std::invalid_argument("unknown scenario: " + name);
  }
  return c;
}

std::vector<std::string> scenario_names() {
  return {"scen1a_null", "scen1a_alt", "scen1b_null", "scen1b_alt", "scen2"};
}

namespace {

SurvivalSample generate_group(const GroupTruth& g, std::size_t n, double t_max,
                              Rng& rng, const std::string& label) {
  SurvivalSample s;
  s.label = label;
  s.records.resize(n);
  for (std::size_t j = 0; j < n; ++j)
    s.records[j].time = quantile(g.family, g.theta, rng.uniform01());
  for (std::size_t j = 0; j < n; ++j) {
    double c = std::min(g.censoring.draw(rng), t_max);
    double y = s.records[j].time;
    s.records[j].event = y <= c;
    s.records[j].time = std::min(y, c);
  }
  return s;
}

}  // namespace

std::pair<SurvivalSample, SurvivalSample> generate_pair(const ScenarioConfig& config,
                                                        std::size_t n1, std::size_t n2,
                                                        Rng rng) {
  if (n1 < 1 || n2 < 1) throw std::invalid_argument("generate_pair: n must be >= 1");
  SurvivalSample s1 = generate_group(config.group1, n1, config.t_max, rng, "group1");
  SurvivalSample s2 = generate_group(config.group2, n2, config.t_max, rng, "group2");
  return {std::move(s1), std::move(s2)};
}

double uniform_censoring_probability(Family family, const Params& theta, double t_max,
                                     double c) {
  // P(censored) = E[ S_Y(min(C, t_max)) ], C ~ U(0, c). Composite Simpson on
  // [0, min(c, t_max)] plus the flat part beyond t_max.
  const double upper = std::min(c, t_max);
  const int n = 2000;  // even
  const double h = upper / n;
  // S(0+) = 1 for every family here.
  double acc = 1.0 + survival(family, theta, upper);
  for (int i = 1; i < n; ++i)
    acc += (i % 2 == 1 ? 4.0 : 2.0) * survival(family, theta, i * h);
  double integral = acc * h / 3.0;
  double p = integral / c;
  if (c > t_max) p += (1.0 - t_max / c) * survival(family, theta, t_max);
  return p;
}

double calibrate_uniform_censoring(Family family, const Params& theta, double t_max,
                                   double target_rate) {
  if (!(target_rate > 0.0 && target_rate < 1.0))
    throw std::invalid_argument("calibrate_uniform_censoring: rate must be in (0,1)");
  const double floor_rate = survival(family, theta, t_max);
  if (target_rate <= floor_rate)
    throw numeric_error("calibrate_uniform_censoring: target below the administrative floor");

  double lo = 1e-6, hi = 1.0;
  while (uniform_censoring_probability(family, theta, t_max, hi) > target_rate) {
    hi *= 2.0;
    if (hi > 1e9)
      throw numeric_error("calibrate_uniform_censoring: target unattainable");
  }
  // P is monotone decreasing in c; bisect until the rate is within 0.005.
  for (int it = 0; it < 200; ++it) {
    double mid = 0.5 * (lo + hi);
    double p = uniform_censoring_probability(family, theta, t_max, mid);
    if (std::abs(p - target_rate) < 0.0005 && it > 20) return mid;
    if (p > target_rate)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-9 * hi) break;
  }
  return 0.5 * (lo + hi);
}

namespace {

void parallel_runs(int n_runs, int n_threads, const std::function<void(int)>& body) {
  unsigned hw = std::thread::hardware_concurrency();
  int nt = n_threads > 0 ? n_threads : static_cast<int>(hw ? hw : 1);
  nt = std::min<int>(nt, n_runs);
  if (nt <= 1) {
    for (int k = 0; k < n_runs; ++k) body(k);
    return;
  }
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nt));
  for (int w = 0; w < nt; ++w)
    pool.emplace_back([&] {
      for (int k = next.fetch_add(1); k < n_runs; k = next.fetch_add(1)) body(k);
    });
  for (auto& th : pool) th.join();
}

struct FittedPair {
  FitResult f1, f2;
  bool ok = false;
};

FittedPair fit_run(const ScenarioConfig& config, std::size_t n1, std::size_t n2,
                   Rng rng, bool with_censoring) {
  FittedPair fp;
  try {
    auto [s1, s2] = generate_pair(config, n1, n2, rng);
    if (with_censoring) {
      fp.f1 = fit_joint(s1, config.fit_family, config.censoring_fit_family);
      fp.f2 = fit_joint(s2, config.fit_family, config.censoring_fit_family);
    } else {
      fp.f1 = fit_mle(s1, config.fit_family);
      fp.f2 = fit_mle(s2, config.fit_family);
    }
    fp.ok = fp.f1.converged && fp.f2.converged;
  } catch (const std::exception&) {
    fp.ok = false;
  }
  return fp;
}

// Executes n_sim simulation runs with deterministic redraws: run k uses
// substream k; failed slots are refilled from reserve substreams n_sim+j in
// ascending slot order, independent of thread scheduling.
template <class PerRun>
int run_simulations(int n_sim, Rng& rng, int n_threads, const PerRun& per_run) {
  std::vector<char> done(static_cast<std::size_t>(n_sim), 0);
  int redraws = 0;
  int reserve = 0;
  const int budget = 10 * n_sim;
  while (true) {
    std::vector<int> todo;
    for (int k = 0; k < n_sim; ++k)
      if (!done[static_cast<std::size_t>(k)]) todo.push_back(k);
    if (todo.empty()) break;

    std::vector<std::uint64_t> streams(todo.size());
    for (std::size_t i = 0; i < todo.size(); ++i) {
      bool first = reserve == 0 && redraws == 0;
      streams[i] = first ? static_cast<std::uint64_t>(todo[i])
                         : static_cast<std::uint64_t>(n_sim + reserve++);
    }
    std::vector<char> ok(todo.size(), 0);
    parallel_runs(static_cast<int>(todo.size()), n_threads, [&](int i) {
      ok[static_cast<std::size_t>(i)] =
          per_run(todo[static_cast<std::size_t>(i)],
                  rng.substream(streams[static_cast<std::size_t>(i)]))
              ? 1
              : 0;
    });
    for (std::size_t i = 0; i < todo.size(); ++i) {
      if (ok[i])
        done[static_cast<std::size_t>(todo[i])] = 1;
      else
        ++redraws;
    }
    if (n_sim + reserve + static_cast<int>(todo.size()) > budget)
      throw numeric_error("simulation: redraw budget exhausted");
  }
  return redraws;
}

}  // namespace

CoverageStudy coverage_study(const ScenarioConfig& config, std::size_t n1, std::size_t n2,
                             int n_sim, const std::vector<BandMethod>& methods,
                             const std::vector<BandTarget>& targets,
                             const std::vector<double>& alphas, int n_boot, Rng rng,
                             const std::optional<std::vector<double>>& grid_override,
                             int n_threads) {
  if (n_sim < 1) throw std::invalid_argument("coverage_study: n_sim must be >= 1");
  if (methods.empty() || targets.empty() || alphas.empty())
    throw std::invalid_argument("coverage_study: methods, targets, alphas required");

  const std::vector<double>& grid = grid_override ? *grid_override : config.grid;
  const std::size_t np = grid.size();
  const bool needs_boot =
      std::find(methods.begin(), methods.end(), BandMethod::bootstrap) != methods.end();

  CoverageStudy study;
  study.scenario = config.name;
  study.n1 = n1;
  study.n2 = n2;
  study.n_sim = n_sim;
  study.n_boot = n_boot;
  study.seed = rng.seed();

  // Per run and (method, target, point): estimate and sigma. Coverage for
  // every alpha afterwards from the same pass.
  const std::size_t n_mt = methods.size() * targets.size();
  std::vector<double> est(static_cast<std::size_t>(n_sim) * n_mt * np);
  std::vector<double> sig(est.size());

  auto per_run = [&](int k, Rng run_rng) -> bool {
    FittedPair fp = fit_run(config, n1, n2, run_rng.substream(0), needs_boot);
    if (!fp.ok) return false;
    try {
      std::size_t mt = 0;
      for (BandMethod method : methods) {
        // One set of bootstrap refits serves every target and grid point.
        std::vector<std::vector<std::vector<double>>> reps;
        if (method != BandMethod::asymptotic) {
          BootstrapOptions bo;
          bo.n_boot = n_boot;
          bo.t_max = config.t_max;
          reps = bootstrap_replicates_multi(fp.f1, fp.f2, grid, targets, bo,
                                            run_rng.substream(1));
        }
        for (std::size_t ti = 0; ti < targets.size(); ++ti) {
          double* e = &est[(static_cast<std::size_t>(k) * n_mt + mt) * np];
          double* s = &sig[(static_cast<std::size_t>(k) * n_mt + mt) * np];
          for (std::size_t i = 0; i < np; ++i) {
            e[i] = band_estimate(targets[ti], fp.f1, fp.f2, grid[i]);
            if (method == BandMethod::asymptotic) {
              s[i] = std::sqrt(delta_variance(fp.f1, fp.f2, grid[i], targets[ti]));
            } else {
              const auto& rows = reps[ti];
              double mean = 0.0;
              for (const auto& row : rows) mean += row[i];
              mean /= static_cast<double>(rows.size());
              double acc = 0.0;
              for (const auto& row : rows) acc += (row[i] - mean) * (row[i] - mean);
              s[i] = std::sqrt(acc / static_cast<double>(rows.size() - 1));
            }
          }
          ++mt;
        }
      }
    } catch (const std::exception&) {
      return false;
    }
    return true;
  };

  study.redraws = run_simulations(n_sim, rng, n_threads, per_run);

  std::size_t mt = 0;
  for (BandMethod method : methods) {
    for (BandTarget target : targets) {
      for (std::size_t i = 0; i < np; ++i) {
        const double truth = config.truth(target, grid[i]);
        for (double alpha : alphas) {
          const double z = standard_normal_quantile(1.0 - alpha);
          int both = 0, lo = 0, hi = 0;
          for (int k = 0; k < n_sim; ++k) {
            const std::size_t base = (static_cast<std::size_t>(k) * n_mt + mt) * np + i;
            const double L = est[base] - z * sig[base];
            const double U = est[base] + z * sig[base];
            lo += L <= truth ? 1 : 0;
            hi += truth <= U ? 1 : 0;
            both += (L <= truth && truth <= U) ? 1 : 0;
          }
          CoverageRow row;
          row.t = grid[i];
          row.target = target;
          row.method = method;
          row.alpha = alpha;
          row.truth = truth;
          row.cover_both = static_cast<double>(both) / n_sim;
          row.cover_lower = static_cast<double>(lo) / n_sim;
          row.cover_upper = static_cast<double>(hi) / n_sim;
          row.mc_se = std::sqrt(row.cover_both * (1.0 - row.cover_both) / n_sim);
          row.n_sim = n_sim;
          study.rows.push_back(row);
        }
      }
      ++mt;
    }
  }
  return study;
}

RejectionStudy rejection_study(const ScenarioConfig& config, std::size_t n1,
                               std::size_t n2, int n_sim,
                               const std::vector<RejectionSpec>& specs, double alpha,
                               BandMethod method, int n_boot, Rng rng, int n_threads) {
  if (n_sim < 1) throw std::invalid_argument("rejection_study: n_sim must be >= 1");
  if (specs.empty()) throw std::invalid_argument("rejection_study: no test specs");

  RejectionStudy study;
  study.scenario = config.name;
  study.n1 = n1;
  study.n2 = n2;
  study.n_sim = n_sim;
  study.n_boot = n_boot;
  study.alpha = alpha;
  study.method = method;
  study.seed = rng.seed();

  const std::size_t ns = specs.size();
  std::vector<char> rejected(static_cast<std::size_t>(n_sim) * ns, 0);

  auto per_run = [&](int k, Rng run_rng) -> bool {
    FittedPair fp = fit_run(config, n1, n2, run_rng.substream(0),
                            method != BandMethod::asymptotic);
    if (!fp.ok) return false;
    try {
      for (std::size_t j = 0; j < ns; ++j) {
        const RejectionSpec& sp = specs[j];
        const FitResult& ref = sp.ref_group == 1 ? fp.f1 : fp.f2;
        const FitResult& other = sp.ref_group == 1 ? fp.f2 : fp.f1;
        Margin margin{sp.margin, sp.target};
        BootstrapOptions bo;
        bo.n_boot = n_boot;
        bo.t_max = config.t_max;
        Rng trng = run_rng.substream(1 + j);
        TestDecision d;
        if (sp.interval)
          d = interval_test(ref, other, sp.interval->first, sp.interval->second,
                            sp.grid_n, margin, alpha, sp.kind, method, trng, bo);
        else if (sp.kind == TestKind::equivalence)
          d = equivalence_test(ref, other, sp.t0, margin, alpha, method, trng, bo);
        else
          d = noninferiority_test(ref, other, sp.t0, margin, alpha, method, trng, bo);
        rejected[static_cast<std::size_t>(k) * ns + j] = d.reject ? 1 : 0;
      }
    } catch (const std::exception&) {
      return false;
    }
    return true;
  };

  study.redraws = run_simulations(n_sim, rng, n_threads, per_run);

  for (std::size_t j = 0; j < ns; ++j) {
    const RejectionSpec& sp = specs[j];
    RejectionRow row;
    row.spec = sp;
    auto truth_at = [&](double t) {
      double d1 = config.truth(sp.target, t);
      return sp.ref_group == 1 ? d1 : -d1;
    };
    if (sp.interval) {
      // Interval hypotheses are about the worst case over [t1,t2]: max D for
      // non-inferiority, max |D| for equivalence.
      double worst = -1e300;
      TimeSpec ts = TimeSpec::interval(sp.interval->first, sp.interval->second, sp.grid_n);
      for (double t : ts.grid()) {
        double v = truth_at(t);
        if (sp.kind == TestKind::equivalence) v = std::abs(v);
        worst = std::max(worst, v);
      }
      row.truth = worst;
    } else {
      row.truth = truth_at(sp.t0);
    }
    row.under_null = sp.kind == TestKind::noninferiority
                         ? row.truth >= sp.margin
                         : std::abs(row.truth) >= sp.margin;
    int count = 0;
    for (int k = 0; k < n_sim; ++k)
      count += rejected[static_cast<std::size_t>(k) * ns + j];
    row.rate = static_cast<double>(count) / n_sim;
    row.mc_se = std::sqrt(row.rate * (1.0 - row.rate) / n_sim);
    row.n_sim = n_sim;
    study.rows.push_back(row);
  }
  return study;
}

}  // namespace survband
