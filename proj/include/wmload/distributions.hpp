#pragma once

#include <span>

namespace wmload {

// Regularized incomplete beta I_x(a, b) by Lentz's continued fraction, using
// the symmetry I_x(a, b) = 1 - I_{1-x}(b, a) on the slow side of the mean.
// Throws DomainError for a <= 0, b <= 0 or x outside [0, 1].
double regularized_incomplete_beta(double a, double b, double x);

// Upper tail P(F > f) of the F(df1, df2) distribution,
// I_x(df2 / 2, df1 / 2) with x = df2 / (df2 + df1 f). f may be +inf.
double f_p_value(double f, int df1, int df2);

// Two-sided Student-t tail P(|T| > |t|) with df degrees of freedom.
double t_p_value_two_sided(double t, int df);

struct TTestResult {
  double t = 0.0;
  int df = 0;
  double p_two_sided = 1.0;
  double mean = 0.0;
  double sd = 0.0;  // sample sd, n - 1 denominator
};

// t = (mean - mu0) / (sd / sqrt(n)). Throws DomainError for fewer than two
// values and DegenerateSample when every value is equal.
TTestResult one_sample_test(std::span<const double> values, double mu0);

}  // namespace wmload
