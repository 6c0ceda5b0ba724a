#pragma once

#include <string>

#include "survband/bands.hpp"

namespace survband {

// Equivalence/non-inferiority margin: delta for the survival difference,
// epsilon for the log hazard ratio. Strictly positive.
struct Margin {
  double value = 0.1;
  BandTarget target = BandTarget::survival_difference;
};

// A single time point or an interval [t1,t2] evaluated on an inclusive
// equispaced grid.
struct TimeSpec {
  double t1 = 0.0, t2 = 0.0;
  int grid_n = 1;

  bool is_point() const { return grid_n == 1; }
  static TimeSpec point(double t0) { return {t0, t0, 1}; }
  // Default grid: 100 equispaced interior points plus both endpoints.
  static TimeSpec interval(double a, double b, int n = 102) { return {a, b, n}; }
  std::vector<double> grid() const;
};

enum class TestKind { noninferiority, equivalence };

std::string_view test_kind_name(TestKind k);

// The tested quantity is D(t) = target(ref) - target(test); "harm" means the
// reference exceeding the test treatment by at least the margin. Swap the
// fits to test the opposite direction.
struct TestDecision {
  TestKind kind = TestKind::noninferiority;
  BandTarget target = BandTarget::survival_difference;
  BandMethod method = BandMethod::asymptotic;
  double margin = 0.0;
  double alpha = 0.05;
  TimeSpec time;
  bool reject = false;
  // Extremal one-sided bounds over the evaluated grid and where they occur;
  // these are exactly the values the decision rule compares to the margin.
  double upper_max = 0.0, upper_argmax = 0.0;
  double lower_min = 0.0, lower_argmin = 0.0;
  std::string ref_label, test_label;
};

// Rejects "ref worse than test by >= margin" iff the one-sided (1-alpha)
// upper bound of D at t0 is <= margin.
TestDecision noninferiority_test(const FitResult& fit_ref, const FitResult& fit_test,
                                 double t0, const Margin& margin, double alpha,
                                 BandMethod method, const Rng& rng,
                                 const BootstrapOptions& opts = {});

// Intersection-union test: rejects iff U(t0) <= margin and L(t0) >= -margin,
// both one-sided at level 1-alpha.
TestDecision equivalence_test(const FitResult& fit_ref, const FitResult& fit_test,
                              double t0, const Margin& margin, double alpha,
                              BandMethod method, const Rng& rng,
                              const BootstrapOptions& opts = {});

// Interval versions: the decision applies the point rule to the extrema of
// the bounds over the grid.
TestDecision interval_test(const FitResult& fit_ref, const FitResult& fit_test,
                           double t1, double t2, int grid_n, const Margin& margin,
                           double alpha, TestKind kind, BandMethod method,
                           const Rng& rng, const BootstrapOptions& opts = {});

}  // namespace survband
