#include "gmi/special.hpp"

#include <cmath>

#include "gmi/errors.hpp"

namespace gmi {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;
constexpr double kEps = 1e-16;
constexpr double kTiny = 1e-300;
constexpr int kMaxIter = 1000;

// Lower regularized incomplete gamma P(a, x) by power series, valid and
// fast for x < a + 1.
double gamma_p_series(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int i = 0; i < kMaxIter; ++i) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::abs(term) < std::abs(sum) * kEps) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Upper regularized incomplete gamma Q(a, x) by modified Lentz continued
// fraction, for x >= a + 1.
double gamma_q_cf(double a, double x) {
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i <= kMaxIter; ++i) {
    const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < kEps) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

double normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

}  // namespace

double normal_cdf(double x) { return 0.5 * std::erfc(-x / kSqrt2); }

double normal_quantile(double q) {
  if (!(q > 0.0 && q < 1.0)) {
    throw DomainError("normal quantile is defined on (0,1)");
  }
  double lo = -40.0, hi = 40.0;
  for (int i = 0; i < 80; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (normal_cdf(mid) < q) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  double x = 0.5 * (lo + hi);
  for (int i = 0; i < 8; ++i) {
    const double pdf = normal_pdf(x);
    if (pdf <= 0.0) break;
    const double step = (normal_cdf(x) - q) / pdf;
    x -= step;
    if (std::abs(step) < 1e-15 * std::max(1.0, std::abs(x))) break;
  }
  return x;
}

double chisq_sf(double x, int df) {
  if (df < 1) {
    throw DomainError("chi-squared degrees of freedom must be >= 1");
  }
  if (!(x >= 0.0)) {
    throw DomainError("chi-squared statistic must be >= 0");
  }
  if (x == 0.0) return 1.0;
  const double a = 0.5 * static_cast<double>(df);
  const double s = 0.5 * x;
  // Series below the a+1 crossover (x < df + 2 in chi-squared scale),
  // continued fraction above it.
  if (s < a + 1.0) {
    return 1.0 - gamma_p_series(a, s);
  }
  return gamma_q_cf(a, s);
}

}  // namespace gmi
