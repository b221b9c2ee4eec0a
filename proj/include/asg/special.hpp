#pragma once

namespace asg {

// Standard normal CDF via the error-function primitive (max error a few ulp).
double normal_cdf(double x);

// Digamma / trigamma, asymptotic series with upward recurrence.
double digamma(double x);
double trigamma(double x);

// Regularized upper incomplete gamma Q(a, x) (series / continued fraction).
double gamma_q(double a, double x);

// Upper tail of the chi-square distribution with df degrees of freedom.
double chi_square_sf(double x, double df);

// Survival function of the asymptotic Kolmogorov distribution,
// Q(lambda) = 2 sum_{j>=1} (-1)^{j-1} exp(-2 j^2 lambda^2).
double kolmogorov_q(double lambda);

}  // namespace asg
