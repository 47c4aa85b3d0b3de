#include "casht/deadline_planner.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "casht/errors.hpp"
#include "casht/numerics.hpp"

namespace casht {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kNeutralTol = 1e-9;
}  // namespace

std::string to_string(DeadlineMode mode) {
  switch (mode) {
    case DeadlineMode::none:
      return "none";
    case DeadlineMode::fixed:
      return "fixed";
    case DeadlineMode::median:
      return "median";
    case DeadlineMode::optimal:
      return "optimal";
    case DeadlineMode::numeric:
      return "numeric";
  }
  return "?";
}

DeadlineMode deadline_mode_from_string(const std::string& s) {
  if (s == "none") return DeadlineMode::none;
  if (s == "fixed") return DeadlineMode::fixed;
  if (s == "median") return DeadlineMode::median;
  if (s == "optimal") return DeadlineMode::optimal;
  if (s == "numeric") return DeadlineMode::numeric;
  throw std::invalid_argument("unknown deadline mode '" + s + "'");
}

BenefitVerdict benefit_verdict(const CostModel& model, double deadline) {
  if (!(model.cdf(deadline) > 0.0))
    throw ZeroMassError("benefit_verdict: F(T) = 0 at the given deadline");
  const double m = model.mean();
  if (m == kInf) return {Benefit::improves, kInf};
  if (model.survival(deadline) <= 0.0) return {Benefit::neutral, 0.0};
  const double diff = model.overshoot(deadline) - m;
  if (diff > kNeutralTol) return {Benefit::improves, diff};
  if (diff < -kNeutralTol) return {Benefit::degrades, diff};
  return {Benefit::neutral, diff};
}

ParetoDeadline pareto_optimal_deadline(double x_min, double alpha) {
  if (!(x_min > 0.0)) throw std::invalid_argument("pareto deadline: x_min <= 0");
  if (!(alpha > 0.0)) throw std::invalid_argument("pareto deadline: alpha <= 0");
  const CostModel model = CostModel::pareto(x_min, alpha);

  auto stationarity = [alpha](double tau) {
    if (alpha == 1.0) return tau - std::log(tau) - 2.0;
    return (alpha - 1.0) * std::pow(tau, alpha) -
           alpha * alpha * std::pow(tau, alpha - 1.0) + 1.0;
  };

  // Bracket by doubling from just above the support boundary.
  double lo = 1.0 + 1e-9;
  double hi = 2.0;
  const double flo = stationarity(lo);
  while ((stationarity(hi) < 0.0) == (flo < 0.0)) {
    hi *= 2.0;
    if (hi > 1e12)
      throw std::runtime_error("pareto_optimal_deadline: no bracket found");
  }
  const double tau =
      find_root_bracketed({stationarity, lo, hi, 1e-9 * std::max(1.0, hi)});

  ParetoDeadline out;
  out.deadline = x_min * tau;
  out.kappa_star = model.kappa(out.deadline);
  out.mean_infinite = alpha <= 1.0;
  return out;
}

double loglogistic_median_deadline(double alpha, double beta) {
  if (!(alpha > 0.0) || !(beta > 0.0))
    throw std::invalid_argument("loglogistic deadline: parameters must be positive");
  return alpha;  // F(alpha) = 1/2
}

std::optional<NumericDeadline> numeric_optimal_deadline(const CostModel& model,
                                                        double lo, double hi,
                                                        double tol) {
  if (!(lo < hi))
    throw std::invalid_argument("numeric_optimal_deadline: invalid interval");
  if (!(model.cdf(lo) > 0.0))
    throw ZeroMassError("numeric_optimal_deadline: F(lo) = 0");

  double best_t;
  double best_k;
  if (model.family() == CostFamily::pareto) {
    // kappa is convex in T for Pareto.
    const auto r = minimize_convex_1d(
        [&](double t) { return model.kappa(t); }, lo, hi, tol);
    best_t = r.argmin;
    best_k = r.min_value;
  } else {
    constexpr int kGridPoints = 1024;
    const double llo = std::log(lo);
    const double lhi = std::log(hi);
    int best_i = 0;
    best_t = lo;
    best_k = model.kappa(lo);
    for (int i = 1; i < kGridPoints; ++i) {
      const double t =
          std::exp(llo + (lhi - llo) * i / double(kGridPoints - 1));
      const double k = model.kappa(t);
      if (k < best_k) {
        best_k = k;
        best_t = t;
        best_i = i;
      }
    }
    const double rl =
        std::exp(llo + (lhi - llo) * std::max(0, best_i - 1) / double(kGridPoints - 1));
    const double rh = std::exp(
        llo + (lhi - llo) * std::min(kGridPoints - 1, best_i + 1) / double(kGridPoints - 1));
    if (rl < rh) {
      const auto r = minimize_convex_1d(
          [&](double t) { return model.kappa(t); }, rl, rh, tol);
      if (r.min_value < best_k) {
        best_t = r.argmin;
        best_k = r.min_value;
      }
    }
  }

  const double m = model.mean();
  if (m != kInf && best_k >= m - tol) return std::nullopt;
  return NumericDeadline{best_t, best_k};
}

namespace {

// optimal-mode rule for one model.
double optimal_deadline_for(const CostModel& model) {
  switch (model.family()) {
    case CostFamily::pareto:
      return pareto_optimal_deadline(model.params()[0], model.params()[1])
          .deadline;
    case CostFamily::log_logistic: {
      const double beta = model.params()[1];
      // The median guarantee kappa(median) <= mean holds for shape <= 2;
      // beyond it the plan reverts to no deadline.
      if (beta <= 2.0)
        return loglogistic_median_deadline(model.params()[0], beta);
      return kInf;
    }
    default: {
      const double s = model.grid_scale();
      const auto nd = numeric_optimal_deadline(model, 0.01 * s, 100.0 * s, 1e-8);
      return nd ? nd->deadline : kInf;
    }
  }
}

}  // namespace

DeadlinePlan plan_deadlines(const std::vector<CostModel>& models,
                            DeadlineMode mode,
                            const std::vector<double>* fixed_values) {
  if ((mode == DeadlineMode::fixed) != (fixed_values != nullptr))
    throw std::invalid_argument(
        "plan_deadlines: fixed values must be supplied exactly when mode is "
        "fixed");
  if (fixed_values && fixed_values->size() != models.size())
    throw std::invalid_argument(
        "plan_deadlines: fixed value count does not match action count");

  DeadlinePlan plan;
  plan.mode = mode;
  plan.deadlines.reserve(models.size());
  plan.effective_costs.reserve(models.size());

  for (std::size_t a = 0; a < models.size(); ++a) {
    const CostModel& model = models[a];
    double T = kInf;
    try {
      switch (mode) {
        case DeadlineMode::none:
          T = kInf;
          break;
        case DeadlineMode::fixed:
          T = (*fixed_values)[a];
          break;
        case DeadlineMode::median:
          T = model.median();
          break;
        case DeadlineMode::optimal:
          T = optimal_deadline_for(model);
          break;
        case DeadlineMode::numeric: {
          const double s = model.grid_scale();
          const auto nd =
              numeric_optimal_deadline(model, 0.01 * s, 100.0 * s, 1e-8);
          T = nd ? nd->deadline : kInf;
          break;
        }
      }
      if (T != kInf && !(model.cdf(T) > 0.0))
        throw ZeroMassError("plan_deadlines: F(T) = 0 at the chosen deadline");
      plan.deadlines.push_back(T);
      plan.effective_costs.push_back(T == kInf ? model.mean() : model.kappa(T));
    } catch (const std::exception& e) {
      throw std::invalid_argument("plan_deadlines: action " +
                                  std::to_string(a) + ": " + e.what());
    }
  }
  return plan;
}

}  // namespace casht
