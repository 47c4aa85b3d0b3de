#pragma once

#include <functional>
#include <vector>

namespace casht {

// Bracketed root problem: objective changes sign over [lo, hi].
struct RootProblem {
  std::function<double(double)> objective;
  double lo = 0.0;
  double hi = 0.0;
  double tol = 1e-9;  // absolute tolerance on the argument
};

// Bisection. Deterministic; throws BracketError if the endpoint signs agree.
double find_root_bracketed(const RootProblem& problem);

struct MinimizeResult {
  double argmin = 0.0;
  double min_value = 0.0;
};

// Golden-section search for a convex (or unimodal) objective on [lo, hi].
// Returns the argmin within tol of the true minimizer.
MinimizeResult minimize_convex_1d(const std::function<double(double)>& objective,
                                  double lo, double hi, double tol);

// Worst-case information gain per expected cost over the action simplex:
// maximize over probability vectors w the value min_j (w . gain_rows[j]) /
// (w . costs).
struct RatioGame {
  std::vector<std::vector<double>> gain_rows;  // nonnegative, nats
  std::vector<double> costs;                   // strictly positive kappa
  double tol = 1e-6;                           // tolerance on the value
};

struct RatioGameSolution {
  std::vector<double> weights;  // probability vector over actions
  double value = 0.0;
};

// Bisection on the candidate value t; feasibility of t is non-negativity of
// the zero-sum matrix game with payoff d_j[a] - t * costs[a]. If some gain
// row is all-zero the value is 0 for every w; by convention a uniform weight
// vector with value 0 is returned instead of failing.
RatioGameSolution solve_ratio_game(const RatioGame& game);

// Exact value of the zero-sum game where the column player picks a mixed
// strategy over columns to maximize, and the row adversary picks a row:
// value = max_{w in simplex} min_j sum_a w[a] * payoff[j][a].
struct MatrixGameSolution {
  std::vector<double> column_strategy;
  double value = 0.0;
};

MatrixGameSolution solve_matrix_game(
    const std::vector<std::vector<double>>& payoff);

}  // namespace casht
