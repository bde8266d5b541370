#pragma once

namespace teachsim::stats {

// Regularized incomplete beta I_x(a, b), evaluated by the modified Lentz
// continued fraction; absolute accuracy better than 1e-10 over the ranges
// used here.
double regularized_incomplete_beta(double a, double b, double x);

// Regularized lower/upper incomplete gamma P(a, x) and Q(a, x) (series for
// x < a + 1, continued fraction otherwise).
double regularized_gamma_p(double a, double x);
double regularized_gamma_q(double a, double x);

// Two-sided tail probability of Student's t: I_{v/(v+t^2)}(v/2, 1/2).
double student_t_two_sided_p(double t, double df);

// Chi-square survival function Q(df/2, x/2).
double chi_square_sf(double x, double df);

}  // namespace teachsim::stats
