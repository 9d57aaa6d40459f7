#include "wmload/distributions.hpp"

#include <algorithm>
#include <cmath>

#include "wmload/error.hpp"

namespace wmload {

namespace {

constexpr int kMaxFractionTerms = 500;
constexpr double kFractionEps = 1e-16;
constexpr double kTiny = 1e-300;

// Continued fraction for I_x(a, b) without the x^a (1-x)^b / (a B(a, b))
// prefactor; converges quickly for x < (a + 1) / (a + b + 2).
double beta_fraction(double a, double b, double x) {
  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxFractionTerms; ++m) {
    const double m2 = 2.0 * m;
    double aa = m * (b - m) * x / ((qam + m2) * (a + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    h *= d * c;
    aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
    d = 1.0 + aa * d;
    if (std::fabs(d) < kTiny) d = kTiny;
    c = 1.0 + aa / c;
    if (std::fabs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kFractionEps) {
      break;
    }
  }
  return h;
}

}  // namespace

double regularized_incomplete_beta(double a, double b, double x) {
  if (!(a > 0.0) || !(b > 0.0) || !std::isfinite(a) || !std::isfinite(b)) {
    throw DomainError("incomplete beta shape parameters must be positive");
  }
  if (!(x >= 0.0 && x <= 1.0)) {
    throw DomainError("incomplete beta argument must lie in [0, 1]");
  }
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double log_front = std::lgamma(a + b) - std::lgamma(a) - std::lgamma(b) +
                           a * std::log(x) + b * std::log1p(-x);
  const double front = std::exp(log_front);
  if (x < (a + 1.0) / (a + b + 2.0)) {
    return front * beta_fraction(a, b, x) / a;
  }
  return 1.0 - front * beta_fraction(b, a, 1.0 - x) / b;
}

double f_p_value(double f, int df1, int df2) {
  if (df1 < 1 || df2 < 1) {
    throw DomainError("F degrees of freedom must be >= 1");
  }
  if (std::isnan(f) || f < 0.0) {
    throw DomainError("F statistic must be non-negative");
  }
  if (std::isinf(f)) {
    return 0.0;
  }
  const double x = df2 / (df2 + df1 * f);
  return regularized_incomplete_beta(0.5 * df2, 0.5 * df1, x);
}

double t_p_value_two_sided(double t, int df) {
  if (df < 1) {
    throw DomainError("t degrees of freedom must be >= 1");
  }
  if (std::isnan(t)) {
    throw DomainError("t statistic is NaN");
  }
  if (std::isinf(t)) {
    return 0.0;
  }
  const double x = df / (df + t * t);
  return regularized_incomplete_beta(0.5 * df, 0.5, x);
}

TTestResult one_sample_test(std::span<const double> values, double mu0) {
  const std::size_t n = values.size();
  if (n < 2) {
    throw DomainError("one-sample test needs at least two values");
  }
  if (std::all_of(values.begin(), values.end(), [&](double v) { return v == values[0]; })) {
    throw DegenerateSample();
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(n);
  double ss = 0.0;
  for (double v : values) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / static_cast<double>(n - 1));
  if (!(sd > 0.0)) {
    throw DegenerateSample();
  }
  TTestResult r;
  r.mean = mean;
  r.sd = sd;
  r.df = static_cast<int>(n - 1);
  r.t = (mean - mu0) / (sd / std::sqrt(static_cast<double>(n)));
  r.p_two_sided = t_p_value_two_sided(r.t, r.df);
  return r;
}

}  // namespace wmload
