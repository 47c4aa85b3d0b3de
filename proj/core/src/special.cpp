#include "casht/special.hpp"

#include <cmath>
#include <stdexcept>

namespace casht {

namespace {

// Continued fraction for the regularized incomplete beta (modified Lentz).
// Converges for x below roughly (a+1)/(a+b+2); callers stay under a/(a+b),
// which is inside that region on both sides of the symmetry split.
double betacf(double a, double b, double x) {
  constexpr int kMaxIter = 400;
  constexpr double kEps = 1e-16;
  constexpr double kTiny = 1e-300;

  const double qab = a + b;
  const double qap = a + 1.0;
  const double qam = a - 1.0;
  double c = 1.0;
  double d = 1.0 - qab * x / qap;
  if (std::fabs(d) < kTiny) d = kTiny;
  d = 1.0 / d;
  double h = d;
  for (int m = 1; m <= kMaxIter; ++m) {
    const int m2 = 2 * m;
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
    if (std::fabs(del - 1.0) < kEps) break;
  }
  return h;
}

void check_domain(double x, double a, double b) {
  if (!(x >= 0.0 && x <= 1.0))
    throw std::domain_error("incomplete_beta: x must lie in [0,1]");
  if (!(a > 0.0) || !(b > 0.0))
    throw std::domain_error("incomplete_beta: a and b must be positive");
}

}  // namespace

double log_beta(double a, double b) {
  return std::lgamma(a) + std::lgamma(b) - std::lgamma(a + b);
}

double regularized_beta(double x, double a, double b) {
  check_domain(x, a, b);
  if (x == 0.0) return 0.0;
  if (x == 1.0) return 1.0;
  const double front =
      std::exp(a * std::log(x) + b * std::log1p(-x) - log_beta(a, b));
  if (x <= a / (a + b)) {
    return front * betacf(a, b, x) / a;
  }
  return 1.0 - front * betacf(b, a, 1.0 - x) / b;
}

double incomplete_beta(double x, double a, double b) {
  check_domain(x, a, b);
  return regularized_beta(x, a, b) * std::exp(log_beta(a, b));
}

}  // namespace casht
