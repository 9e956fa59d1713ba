#include "core/divergence.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "core/errors.hpp"

namespace metapac {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

void require_unit(double x, const char* name) {
  if (!(x >= 0.0 && x <= 1.0))
    throw DomainError(std::string(name) + " must lie in [0,1], got " + std::to_string(x));
}
}  // namespace

double kl_bernoulli(double p, double q) {
  require_unit(p, "p");
  require_unit(q, "q");
  if (p == q) return 0.0;
  // q on the boundary with p != q: the divergence is infinite, reported as a
  // value so bound evaluators can propagate it.
  if (q <= 0.0 || q >= 1.0) return kInf;
  double acc = 0.0;
  if (p > 0.0) acc += p * std::log(p / q);
  if (p < 1.0) acc += (1.0 - p) * std::log((1.0 - p) / (1.0 - q));
  return acc < 0.0 ? 0.0 : acc;  // clamp tiny negative round-off
}

double kl_bernoulli_inv_upper(double p, double c, double tol) {
  require_unit(p, "p");
  if (!(c >= 0.0)) throw DomainError("budget c must be >= 0");
  if (!(tol > 0.0)) throw DomainError("tol must be > 0");
  if (c == 0.0 || p >= 1.0) return p;
  // kl(p, .) is increasing on [p, 1] and tends to +inf at 1, so the crossing
  // point is bracketed by [p, 1].
  double lo = p, hi = 1.0;
  for (int it = 0; it < 200 && hi - lo > tol; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (kl_bernoulli(p, mid) <= c)
      lo = mid;
    else
      hi = mid;
  }
  return lo;
}

double d_gamma(double a, double b, double gamma) {
  require_unit(a, "a");
  require_unit(b, "b");
  return gamma * a - std::log(1.0 - b + b * std::exp(gamma));
}

double d_gamma_invert(double a, double C, double lambda) {
  if (!(lambda > 0.5))
    throw DomainError("d_gamma_invert requires lambda > 0.5, got " + std::to_string(lambda));
  return (a + lambda * C) / (1.0 - 1.0 / (2.0 * lambda));
}

double combine_squares(std::int64_t n, std::int64_t m, double B) {
  if (n < 1 || m < 1) throw DomainError("combine_squares requires n, m >= 1");
  if (!(B >= 0.0)) throw DomainError("combine_squares requires B >= 0");
  const double nd = static_cast<double>(n), md = static_cast<double>(m);
  return std::sqrt((nd + md) / (nd * md) * B);
}

}  // namespace metapac
