// Test-side oracles, independent of the library implementation paths they
// check: quadrature for incomplete-beta and truncated-mean values, a simplex
// grid search for small ratio games, and small statistics helpers.
#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <stdexcept>
#include <vector>

namespace oracle {

inline double simpson_rec(const std::function<double(double)>& f, double a,
                          double b, double fa, double fm, double fb,
                          double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return simpson_rec(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         simpson_rec(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

inline double integrate(const std::function<double(double)>& f, double a,
                        double b, double eps = 1e-12) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return simpson_rec(f, a, b, fa, fm, fb, whole, eps, 50);
}

// B(x; a, b) = int_0^x u^(a-1) (1-u)^(b-1) du by adaptive quadrature with
// endpoint-singularity substitutions: t = u^a below 1/2 and s = (1-u)^b
// above, so both integrands are bounded.
inline double incomplete_beta(double x, double a, double b,
                              double eps = 1e-12) {
  if (x < 0.0 || x > 1.0) throw std::domain_error("oracle beta: x");
  if (a <= 0.0 || b <= 0.0) throw std::domain_error("oracle beta: a,b");
  auto lower = [&](double y) {  // int_0^y, y <= 1/2
    auto g = [&](double t) {
      if (t <= 0.0) return 0.0;
      return std::pow(1.0 - std::pow(t, 1.0 / a), b - 1.0);
    };
    return integrate(g, 0.0, std::pow(y, a), eps) / a;
  };
  if (x <= 0.5) return lower(x);
  // int_{1/2}^{x} u^(a-1)(1-u)^(b-1) du = (1/b) int_{(1-x)^b}^{(1/2)^b}
  // (1 - s^(1/b))^(a-1) ds
  auto g = [&](double s) {
    if (s <= 0.0) return 1.0;  // (1 - 0)^(a-1)
    return std::pow(1.0 - std::pow(s, 1.0 / b), a - 1.0);
  };
  const double upper =
      integrate(g, std::pow(1.0 - x, b), std::pow(0.5, b), eps) / b;
  return lower(0.5) + upper;
}

// Brute-force ratio game over the probability simplex (2 or 3 actions):
// maximize min_j (w . d_j) / (w . costs) on a grid of the given step.
struct GridGameResult {
  std::vector<double> weights;
  double value = 0.0;
};

inline double min_ratio(const std::vector<std::vector<double>>& rows,
                        const std::vector<double>& costs,
                        const std::vector<double>& w) {
  double wc = 0.0;
  for (std::size_t a = 0; a < w.size(); ++a) wc += w[a] * costs[a];
  double worst = std::numeric_limits<double>::infinity();
  for (const auto& row : rows) {
    double wd = 0.0;
    for (std::size_t a = 0; a < w.size(); ++a) wd += w[a] * row[a];
    worst = std::min(worst, wd / wc);
  }
  return worst;
}

inline GridGameResult grid_ratio_game(
    const std::vector<std::vector<double>>& rows,
    const std::vector<double>& costs, double step = 1e-3) {
  const std::size_t actions = costs.size();
  if (actions != 2 && actions != 3)
    throw std::invalid_argument("grid oracle supports 2 or 3 actions");
  GridGameResult best;
  best.value = -1.0;
  const int n = static_cast<int>(std::lround(1.0 / step));
  for (int i = 0; i <= n; ++i) {
    if (actions == 2) {
      const std::vector<double> w = {i * step, 1.0 - i * step};
      const double v = min_ratio(rows, costs, w);
      if (v > best.value) {
        best.value = v;
        best.weights = w;
      }
    } else {
      for (int j = 0; i + j <= n; ++j) {
        const std::vector<double> w = {i * step, j * step,
                                       1.0 - (i + j) * step};
        const double v = min_ratio(rows, costs, w);
        if (v > best.value) {
          best.value = v;
          best.weights = w;
        }
      }
    }
  }
  return best;
}

// Kolmogorov-Smirnov sup distance of a sample against a CDF.
inline double ks_statistic(std::vector<double> sample,
                           const std::function<double(double)>& cdf) {
  std::sort(sample.begin(), sample.end());
  const double n = static_cast<double>(sample.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sample.size(); ++i) {
    const double f = cdf(sample[i]);
    d = std::max(d, std::fabs(f - (static_cast<double>(i) + 1.0) / n));
    d = std::max(d, std::fabs(f - static_cast<double>(i) / n));
  }
  return d;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

inline LinearFit least_squares(const std::vector<double>& x,
                               const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
    syy += y[i] * y[i];
  }
  LinearFit fit;
  fit.slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double e = y[i] - (fit.slope * x[i] + fit.intercept);
    ss_res += e * e;
  }
  const double ss_tot = syy - sy * sy / n;
  fit.r_squared = ss_tot > 0.0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

}  // namespace oracle
