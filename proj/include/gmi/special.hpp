#pragma once

namespace gmi {

/// Standard normal CDF, absolute error below 1e-12.
double normal_cdf(double x);

/// Standard normal quantile on (0,1); normal_cdf(normal_quantile(q)) == q
/// to 1e-10. Bracketed bisection plus Newton polish, no rational magic
/// constants.
double normal_quantile(double q);

/// Chi-squared upper-tail probability P(X > x) for integer df >= 1,
/// i.e. the regularized upper incomplete gamma Q(df/2, x/2).
double chisq_sf(double x, int df);

}  // namespace gmi
