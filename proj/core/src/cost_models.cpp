#include "casht/cost_models.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "casht/errors.hpp"
#include "casht/special.hpp"

namespace casht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log(x^m / m!)
inline double erlang_log_term(double x, int m) {
  if (m == 0) return 0.0;
  return m * std::log(x) - std::lgamma(m + 1.0);
}

// log of S_n(x) = sum_{m=0}^{n} x^m / m!, evaluated stably for any x.
double erlang_log_partial_sum(double x, int n) {
  double max_lt = 0.0;
  for (int m = 1; m <= n; ++m) max_lt = std::max(max_lt, erlang_log_term(x, m));
  double acc = 0.0;
  for (int m = 0; m <= n; ++m) acc += std::exp(erlang_log_term(x, m) - max_lt);
  return max_lt + std::log(acc);
}

// Adaptive Simpson, used only for the LogLogistic truncated mean when the
// shape is below 1 (no incomplete-beta form there).
double adaptive_simpson(const std::function<double(double)>& f, double a,
                        double b, double fa, double fm, double fb, double whole,
                        double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m);
  const double rm = 0.5 * (m + b);
  const double flm = f(lm);
  const double frm = f(rm);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::fabs(left + right - whole) <= 15.0 * eps)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * eps, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * eps, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double eps) {
  if (a == b) return 0.0;
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, eps, 48);
}

}  // namespace

CostModel::CostModel(CostFamily family, std::vector<double> params, int shape)
    : family_(family), params_(std::move(params)), shape_(shape) {}

CostModel CostModel::exponential(double rate) {
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("exponential: rate must be positive");
  return CostModel(CostFamily::exponential, {rate}, 0);
}

CostModel CostModel::erlang(int shape, double rate) {
  if (shape < 1) throw std::invalid_argument("erlang: shape must be >= 1");
  if (!(rate > 0.0) || !std::isfinite(rate))
    throw std::invalid_argument("erlang: rate must be positive");
  return CostModel(CostFamily::erlang, {static_cast<double>(shape), rate},
                   shape);
}

CostModel CostModel::hyperexponential(double p, double rate_a, double rate_b) {
  if (!(p > 0.0 && p < 1.0))
    throw std::invalid_argument("hyperexponential: p must lie in (0,1)");
  if (!(rate_a > 0.0) || !(rate_b > 0.0) || !std::isfinite(rate_a) ||
      !std::isfinite(rate_b))
    throw std::invalid_argument("hyperexponential: rates must be positive");
  if (rate_a == rate_b)
    throw std::invalid_argument(
        "hyperexponential: rates must differ (equal rates collapse to "
        "exponential)");
  return CostModel(CostFamily::hyperexponential, {p, rate_a, rate_b}, 0);
}

CostModel CostModel::pareto(double x_min, double alpha) {
  if (!(x_min > 0.0) || !std::isfinite(x_min))
    throw std::invalid_argument("pareto: x_min must be positive");
  if (!(alpha > 0.0) || !std::isfinite(alpha))
    throw std::invalid_argument("pareto: alpha must be positive");
  return CostModel(CostFamily::pareto, {x_min, alpha}, 0);
}

CostModel CostModel::log_logistic(double scale, double shape) {
  if (!(scale > 0.0) || !std::isfinite(scale))
    throw std::invalid_argument("log_logistic: scale must be positive");
  if (!(shape > 0.0) || !std::isfinite(shape))
    throw std::invalid_argument("log_logistic: shape must be positive");
  return CostModel(CostFamily::log_logistic, {scale, shape}, 0);
}

double CostModel::survival(double t) const {
  if (t < 0.0) return 1.0;
  switch (family_) {
    case CostFamily::exponential:
      return std::exp(-params_[0] * t);
    case CostFamily::erlang: {
      const double x = params_[1] * t;
      if (x == 0.0) return 1.0;
      const double lg = erlang_log_partial_sum(x, shape_ - 1) - x;
      return std::exp(lg);
    }
    case CostFamily::hyperexponential:
      return params_[0] * std::exp(-params_[1] * t) +
             (1.0 - params_[0]) * std::exp(-params_[2] * t);
    case CostFamily::pareto:
      if (t <= params_[0]) return 1.0;
      return std::exp(params_[1] * std::log(params_[0] / t));
    case CostFamily::log_logistic:
      if (t == 0.0) return 1.0;
      return 1.0 / (1.0 + std::pow(t / params_[0], params_[1]));
  }
  return 0.0;
}

double CostModel::cdf(double t) const {
  if (t <= 0.0) return 0.0;
  switch (family_) {
    case CostFamily::exponential:
      return -std::expm1(-params_[0] * t);
    case CostFamily::erlang: {
      const double x = params_[1] * t;
      const int k = shape_;
      if (x < static_cast<double>(k) + 1.0) {
        // Tail series e^{-x} sum_{n>=k} x^n/n!, no cancellation at small x.
        double term = std::exp(erlang_log_term(x, k) - x);
        double sum = term;
        for (int n = k + 1; n < k + 500; ++n) {
          term *= x / n;
          sum += term;
          if (term < sum * 1e-18) break;
        }
        return sum;
      }
      return 1.0 - survival(t);
    }
    case CostFamily::hyperexponential:
      return -params_[0] * std::expm1(-params_[1] * t) -
             (1.0 - params_[0]) * std::expm1(-params_[2] * t);
    case CostFamily::pareto:
      if (t <= params_[0]) return 0.0;
      return -std::expm1(params_[1] * std::log(params_[0] / t));
    case CostFamily::log_logistic:
      return 1.0 / (1.0 + std::pow(t / params_[0], -params_[1]));
  }
  return 0.0;
}

double CostModel::mean() const {
  switch (family_) {
    case CostFamily::exponential:
      return 1.0 / params_[0];
    case CostFamily::erlang:
      return shape_ / params_[1];
    case CostFamily::hyperexponential:
      return params_[0] / params_[1] + (1.0 - params_[0]) / params_[2];
    case CostFamily::pareto:
      if (params_[1] <= 1.0) return kInf;
      return params_[1] * params_[0] / (params_[1] - 1.0);
    case CostFamily::log_logistic: {
      const double beta = params_[1];
      if (beta <= 1.0) return kInf;
      const double x = std::numbers::pi / beta;
      return params_[0] * x / std::sin(x);
    }
  }
  return kInf;
}

double CostModel::truncated_mean(double deadline) const {
  if (!(deadline > 0.0))
    throw std::invalid_argument("truncated_mean: deadline must be positive");
  const double T = deadline;
  if (T == kInf) return mean();
  switch (family_) {
    case CostFamily::exponential:
      return -std::expm1(-params_[0] * T) / params_[0];
    case CostFamily::erlang: {
      // E[min{C,T}] = k/rate - e^{-x}/rate * sum_{m=0}^{k-1} (k-m) x^m/m!
      const double rate = params_[1];
      const double x = rate * T;
      const int k = shape_;
      if (x > 745.0) return mean();  // survival underflows; limit is exact
      double max_lt = 0.0;
      for (int m = 1; m < k; ++m)
        max_lt = std::max(max_lt, erlang_log_term(x, m));
      double acc = 0.0;
      for (int m = 0; m < k; ++m)
        acc += (k - m) * std::exp(erlang_log_term(x, m) - max_lt);
      return (k - std::exp(max_lt - x) * acc) / rate;
    }
    case CostFamily::hyperexponential:
      return -params_[0] * std::expm1(-params_[1] * T) / params_[1] -
             (1.0 - params_[0]) * std::expm1(-params_[2] * T) / params_[2];
    case CostFamily::pareto: {
      const double x_min = params_[0];
      const double alpha = params_[1];
      if (T <= x_min) return T;
      if (alpha == 1.0) return x_min * (1.0 + std::log(T / x_min));
      return x_min - x_min / (alpha - 1.0) *
                         std::expm1((alpha - 1.0) * std::log(x_min / T));
    }
    case CostFamily::log_logistic: {
      const double alpha = params_[0];
      const double beta = params_[1];
      if (beta > 1.0) {
        const double a = 1.0 / beta;
        const double b = 1.0 - 1.0 / beta;
        const double F = cdf(T);
        const double S = survival(T);
        if (F <= 0.5)
          return alpha / beta * incomplete_beta(F, a, b);
        return alpha / beta *
               (std::exp(log_beta(a, b)) - incomplete_beta(S, b, a));
      }
      if (beta == 1.0) return alpha * std::log1p(T / alpha);
      // shape < 1: substitute z = (t/alpha)^beta; the transformed integrand
      // (alpha/beta) z^{1/beta-1} / (1+z) is smooth at 0.
      const double r = std::pow(T / alpha, beta);
      const double e = 1.0 / beta - 1.0;
      auto g = [&](double z) {
        return z <= 0.0 ? 0.0 : std::pow(z, e) / (1.0 + z);
      };
      return alpha / beta * integrate(g, 0.0, r, 1e-12 * std::max(1.0, r));
    }
  }
  return 0.0;
}

double CostModel::overshoot(double deadline) const {
  if (!(deadline > 0.0))
    throw std::invalid_argument("overshoot: deadline must be positive");
  const double T = deadline;
  const double S = survival(T);
  if (S <= 0.0)
    throw ZeroMassError("overshoot: P(C > T) = 0 at the given deadline");
  switch (family_) {
    case CostFamily::exponential:
      return 1.0 / params_[0];
    case CostFamily::erlang: {
      const double rate = params_[1];
      const double x = rate * T;
      const int k = shape_;
      // Beyond e^{-x} underflow the conditional tail is exponential.
      if (x > 700.0) return 1.0 / rate;
      const double ratio = std::exp(erlang_log_partial_sum(x, k) -
                                    erlang_log_partial_sum(x, k - 1));
      return k / rate * ratio - T;
    }
    case CostFamily::hyperexponential: {
      const double p = params_[0];
      const double a = params_[1];
      const double b = params_[2];
      const double eta = 1.0 / (1.0 + (1.0 - p) / p * std::exp((a - b) * T));
      return eta / a + (1.0 - eta) / b;
    }
    case CostFamily::pareto: {
      const double alpha = params_[1];
      if (T <= params_[0]) {
        const double m = mean();
        return m == kInf ? kInf : m - T;
      }
      // C | C > T ~ Pareto(T, alpha)
      if (alpha <= 1.0) return kInf;
      return T / (alpha - 1.0);
    }
    case CostFamily::log_logistic: {
      const double alpha = params_[0];
      const double beta = params_[1];
      if (beta <= 1.0) return kInf;
      // mean - truncated_mean = (alpha/beta) B(S(T); 1-1/beta, 1/beta)
      return alpha / beta *
             incomplete_beta(S, 1.0 - 1.0 / beta, 1.0 / beta) / S;
    }
  }
  return kInf;
}

double CostModel::kappa(double deadline) const {
  if (!(deadline > 0.0))
    throw std::invalid_argument("kappa: deadline must be positive");
  const double T = deadline;
  if (T == kInf) return mean();
  const double F = cdf(T);
  if (F <= 0.0)
    throw ZeroMassError("kappa: F(T) = 0 at the given deadline");
  if (family_ == CostFamily::pareto && params_[1] > 1.0) {
    // Reduced form x_min/(alpha-1) (alpha tau^alpha - tau)/(tau^alpha - 1).
    const double x_min = params_[0];
    const double alpha = params_[1];
    const double tau = T / x_min;
    const double ta = std::pow(tau, alpha);
    return x_min / (alpha - 1.0) * (alpha * ta - tau) / (ta - 1.0);
  }
  return truncated_mean(T) / F;
}

double CostModel::median() const {
  switch (family_) {
    case CostFamily::exponential:
      return std::numbers::ln2 / params_[0];
    case CostFamily::pareto:
      return params_[0] * std::pow(2.0, 1.0 / params_[1]);
    case CostFamily::log_logistic:
      return params_[0];
    case CostFamily::erlang:
    case CostFamily::hyperexponential: {
      double hi = grid_scale();
      while (cdf(hi) < 0.5) hi *= 2.0;
      double lo = 0.0;
      for (int i = 0; i < 200 && hi - lo > 1e-12 * hi; ++i) {
        const double mid = 0.5 * (lo + hi);
        (cdf(mid) < 0.5 ? lo : hi) = mid;
      }
      return 0.5 * (lo + hi);
    }
  }
  return 0.0;
}

double CostModel::grid_scale() const {
  switch (family_) {
    case CostFamily::exponential:
      return 1.0 / params_[0];
    case CostFamily::erlang:
      return shape_ / params_[1];
    case CostFamily::hyperexponential:
      return mean();
    case CostFamily::pareto:
      return params_[1] > 1.0 ? mean() : 10.0 * params_[0];
    case CostFamily::log_logistic:
      return params_[0];
  }
  return 1.0;
}

double CostModel::sample(RandomStream& stream) const {
  switch (family_) {
    case CostFamily::exponential:
      return stream.exponential(params_[0]);
    case CostFamily::erlang: {
      double s = 0.0;
      for (int i = 0; i < shape_; ++i) s += stream.exponential(params_[1]);
      return s;
    }
    case CostFamily::hyperexponential:
      return stream.uniform01() < params_[0]
                 ? stream.exponential(params_[1])
                 : stream.exponential(params_[2]);
    case CostFamily::pareto:
      return params_[0] * std::pow(stream.uniform_open01(), -1.0 / params_[1]);
    case CostFamily::log_logistic: {
      const double u = stream.uniform_open01();
      return params_[0] * std::pow(u / (1.0 - u), 1.0 / params_[1]);
    }
  }
  return 0.0;
}

std::string CostModel::name() const {
  switch (family_) {
    case CostFamily::exponential:
      return "exponential";
    case CostFamily::erlang:
      return "erlang";
    case CostFamily::hyperexponential:
      return "hyperexponential";
    case CostFamily::pareto:
      return "pareto";
    case CostFamily::log_logistic:
      return "loglogistic";
  }
  return "?";
}

std::string CostModel::params_string() const {
  std::string out;
  char buf[40];
  for (std::size_t i = 0; i < params_.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g", params_[i]);
    if (i) out += ' ';
    out += buf;
  }
  return out;
}

CostModel make_cost_model(const std::string& family,
                          const std::vector<double>& params) {
  auto need = [&](std::size_t n) {
    if (params.size() != n)
      throw std::invalid_argument("make_cost_model: " + family + " expects " +
                                  std::to_string(n) + " parameters");
  };
  if (family == "exponential") {
    need(1);
    return CostModel::exponential(params[0]);
  }
  if (family == "erlang") {
    need(2);
    const double k = params[0];
    if (k != std::floor(k))
      throw std::invalid_argument("make_cost_model: erlang shape must be an integer");
    return CostModel::erlang(static_cast<int>(k), params[1]);
  }
  if (family == "hyperexponential" || family == "hyperexponential2") {
    need(3);
    return CostModel::hyperexponential(params[0], params[1], params[2]);
  }
  if (family == "pareto") {
    need(2);
    return CostModel::pareto(params[0], params[1]);
  }
  if (family == "loglogistic" || family == "log_logistic") {
    need(2);
    return CostModel::log_logistic(params[0], params[1]);
  }
  throw std::invalid_argument("make_cost_model: unknown family '" + family +
                              "'");
}

KappaEstimate kappa_mc_oracle(const CostModel& model, double deadline,
                              std::size_t n, RandomStream& stream) {
  if (n < 1000)
    throw std::invalid_argument("kappa_mc_oracle: need at least 1000 samples");
  if (!(model.cdf(deadline) > 0.0))
    throw ZeroMassError("kappa_mc_oracle: F(T) = 0 at the given deadline");
  double sx = 0.0, sy = 0.0, sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double c = model.sample(stream);
    const double x = std::min(c, deadline);
    const double y = c <= deadline ? 1.0 : 0.0;
    sx += x;
    sy += y;
    sxx += x * x;
    syy += y * y;
    sxy += x * y;
  }
  KappaEstimate out;
  out.samples = n;
  if (sy == 0.0) {
    out.all_censored = true;
    out.estimate = std::numeric_limits<double>::quiet_NaN();
    out.std_error = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  const double nd = static_cast<double>(n);
  const double mx = sx / nd;
  const double my = sy / nd;
  const double k = mx / my;
  const double vx = sxx / nd - mx * mx;
  const double vy = syy / nd - my * my;
  const double cxy = sxy / nd - mx * my;
  const double var = (vx - 2.0 * k * cxy + k * k * vy) / (my * my) / nd;
  out.estimate = k;
  out.std_error = std::sqrt(std::max(0.0, var));
  return out;
}

}  // namespace casht
