// Distribution tails for OLS inference.
#pragma once

namespace netspect {

/// Regularized incomplete beta function I_x(a, b), continued-fraction
/// evaluation (Lentz), accurate to ~1e-14 for moderate a, b.
double incomplete_beta(double a, double b, double x);

/// Two-sided p-value of a t statistic with df degrees of freedom.
double t_pvalue_two_sided(double t, double df);

/// Upper-tail p-value of an F statistic with (df1, df2) degrees of freedom.
double f_pvalue(double f, double df1, double df2);

}  // namespace netspect
