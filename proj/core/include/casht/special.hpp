#pragma once

namespace casht {

// log of the complete beta function B(a, b).
double log_beta(double a, double b);

// Regularized incomplete beta I_x(a, b), continued-fraction evaluation with
// the symmetry transform for x > a/(a+b). Accurate near endpoint
// singularities (a or b in (0,1)).
double regularized_beta(double x, double a, double b);

// Unnormalized incomplete beta B(x; a, b) = int_0^x u^(a-1) (1-u)^(b-1) du.
// Absolute accuracy 1e-10 over the supported domain. Throws
// std::domain_error for x outside [0,1] or non-positive a, b.
double incomplete_beta(double x, double a, double b);

}  // namespace casht
