#include "survband/equivtest.hpp"

#include <algorithm>
#include <stdexcept>

namespace survband {

std::vector<double> TimeSpec::grid() const {
  if (grid_n < 1) throw std::invalid_argument("TimeSpec: grid_n must be >= 1");
  if (grid_n == 1 || t1 == t2) return {t1};
  if (!(t1 < t2)) throw std::invalid_argument("TimeSpec: need t1 < t2");
  std::vector<double> g(static_cast<std::size_t>(grid_n));
  const double step = (t2 - t1) / static_cast<double>(grid_n - 1);
  for (int i = 0; i < grid_n; ++i) g[static_cast<std::size_t>(i)] = t1 + step * i;
  g.back() = t2;
  return g;
}

std::string_view test_kind_name(TestKind k) {
  return k == TestKind::noninferiority ? "noninferiority" : "equivalence";
}

namespace {

TestDecision decide(const FitResult& fit_ref, const FitResult& fit_test,
                    const TimeSpec& time, const Margin& margin, double alpha,
                    TestKind kind, BandMethod method, const Rng& rng,
                    const BootstrapOptions& opts) {
  if (!(margin.value > 0.0)) throw std::invalid_argument("margin must be > 0");

  ConfidenceBand band = pointwise_band(fit_ref, fit_test, time.grid(), margin.target,
                                       method, alpha, rng, opts);

  TestDecision d;
  d.kind = kind;
  d.target = margin.target;
  d.method = method;
  d.margin = margin.value;
  d.alpha = alpha;
  d.time = time;
  d.ref_label = fit_ref.label;
  d.test_label = fit_test.label;

  std::size_t iu = 0, il = 0;
  for (std::size_t i = 1; i < band.grid.size(); ++i) {
    if (band.upper[i] > band.upper[iu]) iu = i;
    if (band.lower[i] < band.lower[il]) il = i;
  }
  d.upper_max = band.upper[iu];
  d.upper_argmax = band.grid[iu];
  d.lower_min = band.lower[il];
  d.lower_argmin = band.grid[il];

  d.reject = d.upper_max <= margin.value;
  if (kind == TestKind::equivalence)
    d.reject = d.reject && d.lower_min >= -margin.value;
  return d;
}

}  // namespace

TestDecision noninferiority_test(const FitResult& fit_ref, const FitResult& fit_test,
                                 double t0, const Margin& margin, double alpha,
                                 BandMethod method, const Rng& rng,
                                 const BootstrapOptions& opts) {
  return decide(fit_ref, fit_test, TimeSpec::point(t0), margin, alpha,
                TestKind::noninferiority, method, rng, opts);
}

TestDecision equivalence_test(const FitResult& fit_ref, const FitResult& fit_test,
                              double t0, const Margin& margin, double alpha,
                              BandMethod method, const Rng& rng,
                              const BootstrapOptions& opts) {
  return decide(fit_ref, fit_test, TimeSpec::point(t0), margin, alpha,
                TestKind::equivalence, method, rng, opts);
}

TestDecision interval_test(const FitResult& fit_ref, const FitResult& fit_test,
                           double t1, double t2, int grid_n, const Margin& margin,
                           double alpha, TestKind kind, BandMethod method,
                           const Rng& rng, const BootstrapOptions& opts) {
  if (grid_n < 2 && t1 != t2)
    throw std::invalid_argument("interval_test: grid_n must be >= 2");
  TimeSpec ts = (t1 == t2) ? TimeSpec::point(t1) : TimeSpec{t1, t2, grid_n};
  return decide(fit_ref, fit_test, ts, margin, alpha, kind, method, rng, opts);
}

}  // namespace survband
