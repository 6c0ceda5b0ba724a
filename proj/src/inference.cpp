#include "survband/inference.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "survband/normal.hpp"
#include "survband/optim.hpp"

namespace survband {

namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

// Per-sample evaluation cache: times and log-times extracted once so the
// optimizer's inner loop is a single pass of exp/log1p per record.
struct LoglikCache {
  Family family;
  std::vector<double> t, logt;
  std::vector<unsigned char> ev;
  double sum_t = 0.0;
  double sum_logt_ev = 0.0;
  std::size_t n_ev = 0;

  LoglikCache(const SurvivalSample& s, Family f) : family(f) {
    t.reserve(s.size());
    logt.reserve(s.size());
    ev.reserve(s.size());
    for (const auto& r : s.records) {
      t.push_back(r.time);
      logt.push_back(std::log(r.time));
      ev.push_back(r.event ? 1 : 0);
      sum_t += r.time;
      if (r.event) {
        sum_logt_ev += logt.back();
        ++n_ev;
      }
    }
  }

  double operator()(const Params& th) const {
    const std::size_t n = t.size();
    const double nev = static_cast<double>(n_ev);
    switch (family) {
      case Family::exponential: {
        double psi = th[0];
        return nev * std::log(psi) - psi * sum_t;
      }
      case Family::weibull: {
        double k = th[0], loglam = std::log(th[1]);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) acc += std::exp(k * (logt[i] - loglam));
        return nev * (std::log(k) - loglam) +
               (k - 1.0) * (sum_logt_ev - nev * loglam) - acc;
      }
      case Family::log_logistic: {
        double b = th[0], loga = std::log(th[1]);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double u = std::exp(b * (logt[i] - loga));
          acc += (1.0 + ev[i]) * std::log1p(u);
        }
        return nev * (std::log(b) - loga) + (b - 1.0) * (sum_logt_ev - nev * loga) - acc;
      }
      case Family::log_normal: {
        double sig = th[0], logm = std::log(th[1]);
        double acc = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          double z = (logt[i] - logm) / sig;
          if (ev[i])
            acc += -0.5 * z * z - logt[i];
          else
            acc += normal_log_sf(z);
        }
        return acc - nev * (std::log(sig) + 0.9189385332046727417803297364056176);
      }
    }
    return kNegInf;
  }
};

double median_time(const SurvivalSample& s) {
  std::vector<double> v;
  v.reserve(s.size());
  for (const auto& r : s.records) v.push_back(r.time);
  std::size_t mid = v.size() / 2;
  std::nth_element(v.begin(), v.begin() + mid, v.end());
  return v[mid];
}

Params default_start(const SurvivalSample& s, Family f) {
  switch (f) {
    case Family::exponential: {
      double sum_t = 0.0;
      for (const auto& r : s.records) sum_t += r.time;
      return Params::of(static_cast<double>(s.n_events()) / sum_t);
    }
    case Family::weibull:
      return Params::of(1.0, median_time(s) / std::log(2.0));
    case Family::log_logistic:
    case Family::log_normal:
      return Params::of(1.0, median_time(s));
  }
  return {};
}

// Gradient of the log-likelihood with respect to log-parameters, by central
// differences. Used for the convergence check and the Newton polish.
std::vector<double> grad_logparam(const LoglikCache& ll, const std::vector<double>& u) {
  std::vector<double> g(u.size());
  auto eval_at = [&](const std::vector<double>& uu) {
    return ll(uu.size() == 1 ? Params::of(std::exp(uu[0]))
                             : Params::of(std::exp(uu[0]), std::exp(uu[1])));
  };
  for (std::size_t i = 0; i < u.size(); ++i) {
    double h = 1e-6 * std::max(1.0, std::abs(u[i]));
    std::vector<double> up = u, um = u;
    up[i] += h;
    um[i] -= h;
    g[i] = (eval_at(up) - eval_at(um)) / (2.0 * h);
  }
  return g;
}

Params params_from_log(const std::vector<double>& u) {
  return u.size() == 1 ? Params::of(std::exp(u[0]))
                       : Params::of(std::exp(u[0]), std::exp(u[1]));
}

InfoMatrix observed_information(const LoglikCache& ll, const Params& theta) {
  const std::size_t n = theta.size();
  InfoMatrix info;
  info.n = n;
  std::array<double, 2> h{};
  for (std::size_t i = 0; i < n; ++i) h[i] = 1e-4 * std::max(1.0, std::abs(theta[i]));
  const double f0 = ll(theta);
  for (std::size_t i = 0; i < n; ++i) {
    Params tp = theta, tm = theta;
    tp[i] += h[i];
    tm[i] -= h[i];
    info.a[i * n + i] = -(ll(tp) - 2.0 * f0 + ll(tm)) / (h[i] * h[i]);
  }
  if (n == 2) {
    Params tpp = theta, tpm = theta, tmp = theta, tmm = theta;
    tpp[0] += h[0]; tpp[1] += h[1];
    tpm[0] += h[0]; tpm[1] -= h[1];
    tmp[0] -= h[0]; tmp[1] += h[1];
    tmm[0] -= h[0]; tmm[1] -= h[1];
    double off = -(ll(tpp) - ll(tpm) - ll(tmp) + ll(tmm)) / (4.0 * h[0] * h[1]);
    info.a[1] = info.a[2] = off;
  }
  return info;
}

}  // namespace

double log_likelihood(const SurvivalSample& sample, Family family, const Params& theta) {
  sample.validate();
  check_domain(family, theta);
  double acc = 0.0;
  for (const auto& r : sample.records) {
    double term = r.event ? log_pdf(family, theta, r.time)
                          : log_survival(family, theta, r.time);
    if (!std::isfinite(term)) return kNegInf;
    acc += term;
  }
  return acc;
}

double censoring_log_likelihood(const SurvivalSample& sample, Family family,
                                const Params& psi) {
  return log_likelihood(sample.flipped(), family, psi);
}

FitResult fit_mle(const SurvivalSample& sample, Family family, const FitOptions& opts) {
  sample.validate();
  if (sample.n_events() == 0)
    throw std::invalid_argument("fit_mle: sample has no events");
  if (sample.size() < n_params(family))
    throw std::invalid_argument("fit_mle: fewer records than parameters");

  LoglikCache ll(sample, family);
  Params start = opts.start ? *opts.start : default_start(sample, family);
  check_domain(family, start);

  const std::size_t dim = n_params(family);
  std::vector<double> u0(dim);
  for (std::size_t i = 0; i < dim; ++i) u0[i] = std::log(start[i]);

  auto neg = [&](const std::vector<double>& u) {
    double v = ll(params_from_log(u));
    return std::isfinite(v) ? -v : 1e300;
  };

  SimplexOptions sopts;
  sopts.max_iter = opts.max_iter;
  sopts.initial_step = opts.start ? 0.25 : 0.5;
  SimplexResult sres = nelder_mead(neg, u0, sopts);

  // Newton polish in log-parameter space: a handful of damped steps with
  // finite-difference derivatives sharpens the simplex solution to the
  // gradient tolerance.
  std::vector<double> u = sres.x;
  double fu = -sres.fx;
  for (int iter = 0; iter < 12; ++iter) {
    std::vector<double> g = grad_logparam(ll, u);
    double gnorm = 0.0;
    for (double gi : g) gnorm += gi * gi;
    gnorm = std::sqrt(gnorm);
    if (gnorm < 0.25 * opts.tol) break;

    std::vector<double> H(dim * dim);
    const double f0 = ll(params_from_log(u));
    for (std::size_t i = 0; i < dim; ++i) {
      double h = 1e-4 * std::max(1.0, std::abs(u[i]));
      std::vector<double> up = u, um = u;
      up[i] += h;
      um[i] -= h;
      H[i * dim + i] = (ll(params_from_log(up)) - 2.0 * f0 + ll(params_from_log(um))) / (h * h);
    }
    if (dim == 2) {
      double h0 = 1e-4 * std::max(1.0, std::abs(u[0]));
      double h1 = 1e-4 * std::max(1.0, std::abs(u[1]));
      std::vector<double> upp = u, upm = u, ump = u, umm = u;
      upp[0] += h0; upp[1] += h1;
      upm[0] += h0; upm[1] -= h1;
      ump[0] -= h0; ump[1] += h1;
      umm[0] -= h0; umm[1] -= h1;
      double off = (ll(params_from_log(upp)) - ll(params_from_log(upm)) -
                    ll(params_from_log(ump)) + ll(params_from_log(umm))) /
                   (4.0 * h0 * h1);
      H[1] = H[2] = off;
    }
    // Newton step solves H s = -g; H should be negative definite here.
    std::vector<double> negg(dim);
    for (std::size_t i = 0; i < dim; ++i) negg[i] = -g[i];
    auto sol = detail::solve_sym(H, dim, negg);
    if (!sol.ok || sol.condition > 1e12) break;
    bool improved = false;
    double damp = 1.0;
    for (int bt = 0; bt < 6; ++bt) {
      std::vector<double> un = u;
      for (std::size_t i = 0; i < dim; ++i) un[i] += damp * sol.x[i];
      double fn = ll(params_from_log(un));
      if (std::isfinite(fn) && fn >= fu - 1e-13) {
        u = un;
        fu = fn;
        improved = true;
        break;
      }
      damp *= 0.5;
    }
    if (!improved) break;
  }

  FitResult res;
  res.family = family;
  res.theta = params_from_log(u);
  res.loglik = ll(res.theta);
  res.n = sample.size();
  res.aic = 2.0 * static_cast<double>(dim) - 2.0 * res.loglik;
  res.observed_info = observed_information(ll, res.theta);
  res.label = sample.label;

  std::vector<double> g = grad_logparam(ll, u);
  double gnorm = 0.0;
  for (double gi : g) gnorm += gi * gi;
  gnorm = std::sqrt(gnorm);
  auto ev = detail::sym_eigenvalues(res.observed_info.dense(), dim);
  bool pd = true;
  for (double e : ev) pd = pd && e > 0.0;
  // The honest optimality conditions: finite maximum, small gradient in the
  // unconstrained coordinates, positive-definite curvature.
  res.converged = std::isfinite(res.loglik) && gnorm < opts.tol && pd;
  return res;
}

FitResult fit_censoring(const SurvivalSample& sample, Family family) {
  if (sample.n_censored() == 0)
    throw std::invalid_argument("fit_censoring: sample has no censored records");
  FitResult res = fit_mle(sample.flipped(), family);
  res.label = sample.label;
  return res;
}

FitResult fit_joint(const SurvivalSample& sample, Family event_family,
                    Family censoring_family, const FitOptions& opts) {
  FitResult ev = fit_mle(sample, event_family, opts);
  FitResult cens;
  if (sample.n_censored() == 0) {
    cens.family = censoring_family;
    cens.theta = n_params(censoring_family) == 1 ? Params::of(0.0) : Params::of(0.0, 0.0);
    cens.n = sample.size();
    cens.degenerate = true;
    cens.label = sample.label;
  } else {
    cens = fit_censoring(sample, censoring_family);
  }
  ev.censor_fit = std::make_shared<const FitResult>(std::move(cens));
  return ev;
}

std::vector<FitResult> select_model(const SurvivalSample& sample,
                                    const std::vector<Family>& families) {
  if (families.empty()) throw std::invalid_argument("select_model: no families");
  std::vector<FitResult> fits;
  fits.reserve(families.size());
  for (Family f : families) fits.push_back(fit_mle(sample, f));
  auto tag_order = [](Family f) {
    for (std::size_t i = 0; i < std::size(kAllFamilies); ++i)
      if (kAllFamilies[i] == f) return i;
    return std::size(kAllFamilies);
  };
  std::stable_sort(fits.begin(), fits.end(), [&](const FitResult& a, const FitResult& b) {
    if (a.converged != b.converged) return a.converged;
    if (a.aic != b.aic) return a.aic < b.aic;
    if (a.theta.size() != b.theta.size()) return a.theta.size() < b.theta.size();
    return tag_order(a.family) < tag_order(b.family);
  });
  return fits;
}

}  // namespace survband
