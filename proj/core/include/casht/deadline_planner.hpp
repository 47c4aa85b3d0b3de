#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casht/cost_models.hpp"

namespace casht {

enum class DeadlineMode { none, fixed, median, optimal, numeric };

std::string to_string(DeadlineMode mode);
DeadlineMode deadline_mode_from_string(const std::string& s);

enum class Benefit { improves, degrades, neutral };

// Overshoot criterion: a deadline at T improves the effective cost exactly
// when E[C-T | C>T] exceeds E[C]. Infinite-mean models always improve.
struct BenefitVerdict {
  Benefit verdict = Benefit::neutral;
  double overshoot_minus_mean = 0.0;
};

BenefitVerdict benefit_verdict(const CostModel& model, double deadline);

struct ParetoDeadline {
  double deadline = 0.0;      // T* = x_min * tau*
  double kappa_star = 0.0;    // kappa at T*
  bool mean_infinite = false; // alpha <= 1
};

// Minimizer of the Pareto effective cost: tau* solves
// (alpha-1) tau^alpha - alpha^2 tau^(alpha-1) + 1 = 0 on (1, inf); at
// alpha = 1 the stationarity condition degenerates to tau - log(tau) = 2.
ParetoDeadline pareto_optimal_deadline(double x_min, double alpha);

// Canonical Log-Logistic choice: the distribution median (= scale).
double loglogistic_median_deadline(double alpha, double beta);

struct NumericDeadline {
  double deadline = 0.0;
  double kappa_at_deadline = 0.0;
};

// Minimizes kappa over [lo, hi]: convex search for Pareto, otherwise a
// 1024-point log-spaced grid with golden-section refinement around the best
// cell. Returns nullopt when min kappa >= mean - tol (no improvement; the
// caller falls back to no deadline).
std::optional<NumericDeadline> numeric_optimal_deadline(const CostModel& model,
                                                        double lo, double hi,
                                                        double tol);

struct DeadlinePlan {
  std::vector<double> deadlines;        // +infinity means no deadline
  DeadlineMode mode = DeadlineMode::none;
  std::vector<double> effective_costs;  // kappa at the deadline (mean at inf)
};

// Per-action deadline policy:
//   none    -> all infinite
//   fixed   -> caller-supplied values (validated F(T) > 0)
//   median  -> family median
//   optimal -> Pareto root / LogLogistic median (shape <= 2) with a numeric
//              fallback for the remaining families
//   numeric -> numeric_optimal_deadline over the family grid range
DeadlinePlan plan_deadlines(const std::vector<CostModel>& models,
                            DeadlineMode mode,
                            const std::vector<double>* fixed_values = nullptr);

}  // namespace casht
