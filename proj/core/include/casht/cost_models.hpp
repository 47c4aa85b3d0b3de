#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "casht/random.hpp"

namespace casht {

enum class CostFamily {
  exponential,       // Exp(rate)
  erlang,            // Erlang(shape, rate)
  hyperexponential,  // two-fold mixture: Exp(rate_a) w.p. p, Exp(rate_b) else
  pareto,            // Pareto(x_min, alpha), support [x_min, inf)
  log_logistic,      // LogLogistic(scale alpha, shape beta)
};

// Parametric positive cost distribution with exact sampling and the closed
// forms used by per-action deadline analysis: CDF, mean, truncated mean
// E[min{C,T}], overshoot E[C-T | C>T], and the effective per-sample cost
// kappa(T) = E[min{C,T}] / F(T).
class CostModel {
 public:
  static CostModel exponential(double rate);
  static CostModel erlang(int shape, double rate);
  static CostModel hyperexponential(double p, double rate_a, double rate_b);
  static CostModel pareto(double x_min, double alpha);
  static CostModel log_logistic(double scale, double shape);

  CostFamily family() const { return family_; }
  const std::vector<double>& params() const { return params_; }
  int erlang_shape() const { return shape_; }

  double cdf(double t) const;
  double survival(double t) const;  // 1 - cdf, computed without cancellation
  // Closed-form mean; +infinity when divergent (Pareto alpha <= 1,
  // LogLogistic beta <= 1).
  double mean() const;
  double truncated_mean(double deadline) const;
  // E[C - T | C > T]; +infinity for heavy tails with divergent mean.
  // Throws ZeroMassError when P(C > T) = 0 (unreachable at finite T for
  // these families).
  double overshoot(double deadline) const;
  // kappa(T); throws ZeroMassError when F(T) = 0.
  double kappa(double deadline) const;
  double median() const;
  // Natural scale used for grid construction (mean when finite, else a
  // family-specific finite surrogate).
  double grid_scale() const;

  double sample(RandomStream& stream) const;

  std::string name() const;
  std::string params_string() const;

  bool operator==(const CostModel&) const = default;

 private:
  CostModel(CostFamily family, std::vector<double> params, int shape);

  CostFamily family_;
  std::vector<double> params_;
  int shape_ = 0;  // Erlang only
};

// Factory from text identifiers ("exponential", "erlang",
// "hyperexponential", "pareto", "loglogistic") and a parameter list in the
// order of the static constructors. Throws std::invalid_argument on unknown
// family or parameter-domain violations.
CostModel make_cost_model(const std::string& family,
                          const std::vector<double>& params);

struct KappaEstimate {
  double estimate = 0.0;
  double std_error = 0.0;
  std::size_t samples = 0;
  bool all_censored = false;  // no draw fell at or below the deadline
};

// Monte Carlo oracle for kappa: ratio estimator mean(min{C_i,T}) /
// mean(1{C_i <= T}) with a delta-method standard error.
KappaEstimate kappa_mc_oracle(const CostModel& model, double deadline,
                              std::size_t n, RandomStream& stream);

}  // namespace casht
