#include "survband/optim.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace survband {

SimplexResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                          const std::vector<double>& x0, const SimplexOptions& opts) {
  const std::size_t n = x0.size();
  if (n == 0) throw std::invalid_argument("nelder_mead: empty start point");

  std::vector<std::vector<double>> x(n + 1, x0);
  for (std::size_t i = 0; i < n; ++i) x[i + 1][i] += opts.initial_step;
  std::vector<double> fx(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fx[i] = f(x[i]);

  std::vector<std::size_t> idx(n + 1);
  std::iota(idx.begin(), idx.end(), std::size_t{0});

  std::vector<double> xc(n), xr(n), xe(n), xk(n);
  SimplexResult res;

  int it = 0;
  for (; it < opts.max_iter; ++it) {
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fx[a] < fx[b]; });
    const double fbest = fx[idx[0]], fworst = fx[idx[n]];
    // ftol acts relative to the function scale; an absolute criterion can sit
    // below the rounding granularity of large objective values.
    if (std::abs(fworst - fbest) <= opts.ftol * std::max(1.0, std::abs(fbest))) {
      res.converged = true;
      break;
    }

    for (std::size_t j = 0; j < n; ++j) xc[j] = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) xc[j] += x[idx[i]][j];
    for (std::size_t j = 0; j < n; ++j) xc[j] /= static_cast<double>(n);

    const std::vector<double>& xw = x[idx[n]];
    for (std::size_t j = 0; j < n; ++j) xr[j] = xc[j] + (xc[j] - xw[j]);
    double fr = f(xr);

    if (fr < fbest) {
      for (std::size_t j = 0; j < n; ++j) xe[j] = xc[j] + 2.0 * (xr[j] - xc[j]);
      double fe = f(xe);
      if (fe < fr) {
        x[idx[n]] = xe;
        fx[idx[n]] = fe;
      } else {
        x[idx[n]] = xr;
        fx[idx[n]] = fr;
      }
      continue;
    }
    if (fr < fx[idx[n - 1]]) {
      x[idx[n]] = xr;
      fx[idx[n]] = fr;
      continue;
    }

    // contraction, outside if the reflection improved on the worst point
    bool outside = fr < fx[idx[n]];
    const std::vector<double>& xbase = outside ? xr : xw;
    for (std::size_t j = 0; j < n; ++j) xk[j] = xc[j] + 0.5 * (xbase[j] - xc[j]);
    double fk = f(xk);
    if (fk < (outside ? fr : fx[idx[n]])) {
      x[idx[n]] = xk;
      fx[idx[n]] = fk;
      continue;
    }

    // shrink toward the best vertex
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t j = 0; j < n; ++j)
        x[idx[i]][j] = x[idx[0]][j] + 0.5 * (x[idx[i]][j] - x[idx[0]][j]);
      fx[idx[i]] = f(x[idx[i]]);
    }
  }

  std::size_t best = idx[0];
  for (std::size_t i = 0; i <= n; ++i)
    if (fx[i] < fx[best]) best = i;
  res.x = x[best];
  res.fx = fx[best];
  res.iterations = it;
  return res;
}

namespace detail {

std::vector<double> sym_eigenvalues(const std::vector<double>& a, std::size_t n) {
  if (n == 1) return {a[0]};
  if (n == 2) {
    double tr = a[0] + a[3];
    double det = a[0] * a[3] - a[1] * a[2];
    double disc = std::sqrt(std::max(0.0, 0.25 * tr * tr - det));
    return {0.5 * tr - disc, 0.5 * tr + disc};
  }
  throw std::invalid_argument("sym_eigenvalues: only n<=2 supported");
}

SymSolve solve_sym(const std::vector<double>& a, std::size_t n,
                   const std::vector<double>& b) {
  SymSolve out;
  auto ev = sym_eigenvalues(a, n);
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double e : ev) {
    lo = std::min(lo, std::abs(e));
    hi = std::max(hi, std::abs(e));
  }
  out.condition = lo > 0.0 ? hi / lo : std::numeric_limits<double>::infinity();
  if (lo == 0.0 || !std::isfinite(out.condition)) return out;

  out.x.resize(n);
  if (n == 1) {
    out.x[0] = b[0] / a[0];
  } else {
    double det = a[0] * a[3] - a[1] * a[2];
    out.x[0] = (a[3] * b[0] - a[1] * b[1]) / det;
    out.x[1] = (a[0] * b[1] - a[2] * b[0]) / det;
  }
  out.ok = true;
  return out;
}

}  // namespace detail

}  // namespace survband
