#pragma once

#include <cstdint>

namespace metapac {

// All divergences are in nats.

// kl(p, q) between Bernoulli(p) and Bernoulli(q) with the 0*log(0/x) = 0
// convention. Returns +infinity when q is 0 or 1 and p differs; never throws
// for arguments inside [0,1]^2.
double kl_bernoulli(double p, double q);

// Largest q in [p, 1] with kl_bernoulli(p, q) <= c, located by bisection to
// absolute tolerance tol on q (200 iteration cap). c = 0 returns p; a huge
// budget saturates at 1.
double kl_bernoulli_inv_upper(double p, double c, double tol = 1e-10);

// D_gamma(a || b) = gamma*a - log(1 - b + b*e^gamma) for a, b in [0,1].
// Identically zero at gamma = 0; may be negative.
double d_gamma(double a, double b, double gamma);

// Certified upper bound on b from the premise D_{-1/lambda}(a || b) < C:
// returns (a + lambda*C) / (1 - 1/(2*lambda)). Requires lambda > 0.5.
double d_gamma_invert(double a, double C, double lambda);

// Gap bound sqrt(((n+m)/(n*m)) * B) implied by n*(a-b)^2 + m*(b-c)^2 <= B.
double combine_squares(std::int64_t n, std::int64_t m, double B);

}  // namespace metapac
