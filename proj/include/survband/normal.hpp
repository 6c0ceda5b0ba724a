#pragma once

namespace survband {

// Standard normal density.
double normal_pdf(double x);

// Standard normal distribution function, Phi(x).
double normal_cdf(double x);

// log of the standard normal survival function, stable far in the tail.
double normal_log_sf(double x);

// Inverse of normal_cdf. Acklam's rational approximation polished with one
// Newton step on Phi; |Phi(z) - p| < 1e-12 over (0,1).
double standard_normal_quantile(double p);

// Survival function of the chi-square distribution with 1 degree of freedom.
double chi_squared_1df_sf(double x);

}  // namespace survband
