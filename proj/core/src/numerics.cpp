#include "casht/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <stdexcept>

#include "casht/errors.hpp"

namespace casht {

double find_root_bracketed(const RootProblem& problem) {
  if (!(problem.lo < problem.hi))
    throw std::invalid_argument("find_root_bracketed: lo must be < hi");
  if (!(problem.tol > 0.0))
    throw std::invalid_argument("find_root_bracketed: tol must be positive");
  double lo = problem.lo;
  double hi = problem.hi;
  double flo = problem.objective(lo);
  double fhi = problem.objective(hi);
  if (flo == 0.0) return lo;
  if (fhi == 0.0) return hi;
  if ((flo < 0.0) == (fhi < 0.0))
    throw BracketError("find_root_bracketed: endpoint signs agree");
  while (hi - lo > problem.tol) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // bracket below double resolution
    const double fm = problem.objective(mid);
    if (fm == 0.0) return mid;
    if ((fm < 0.0) == (flo < 0.0)) {
      lo = mid;
      flo = fm;
    } else {
      hi = mid;
    }
  }
  return 0.5 * (lo + hi);
}

MinimizeResult minimize_convex_1d(const std::function<double(double)>& objective,
                                  double lo, double hi, double tol) {
  if (!(lo < hi))
    throw std::invalid_argument("minimize_convex_1d: invalid interval");
  if (!(tol > 0.0))
    throw std::invalid_argument("minimize_convex_1d: tol must be positive");
  // Golden-section search; convexity makes the bracket contraction valid.
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = lo, b = hi;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = objective(c);
  double fd = objective(d);
  while (b - a > tol) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = objective(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = objective(d);
    }
    if (c >= d) break;  // interval below double resolution
  }
  const double x = 0.5 * (a + b);
  return {x, objective(x)};
}

namespace {

constexpr double kPivotEps = 1e-11;
constexpr double kCostEps = 1e-10;

}  // namespace

MatrixGameSolution solve_matrix_game(
    const std::vector<std::vector<double>>& payoff) {
  const std::size_t rows = payoff.size();
  if (rows == 0)
    throw std::invalid_argument("solve_matrix_game: need at least one row");
  const std::size_t cols = payoff.front().size();
  if (cols == 0)
    throw std::invalid_argument("solve_matrix_game: need at least one column");
  for (const auto& r : payoff)
    if (r.size() != cols)
      throw std::invalid_argument("solve_matrix_game: ragged payoff matrix");

  if (cols == 1) {
    double v = payoff[0][0];
    for (const auto& r : payoff) v = std::min(v, r[0]);
    return {{1.0}, v};
  }

  // Shift all entries positive, then solve the packing LP
  //   max 1'y  s.t.  sum_j M'[j][a] y_j <= 1 for each column a,  y >= 0
  // by primal simplex from the all-slack basis. Strong duality gives the
  // game value 1/(1'y*) - shift, and the optimal column strategy is read
  // off the slack reduced costs.
  double lo = payoff[0][0];
  double hi = payoff[0][0];
  for (const auto& r : payoff)
    for (double v : r) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  const double shift = 1.0 - lo;

  const std::size_t nvar = rows + cols;  // y variables then slacks
  // Tableau: cols constraint rows plus an objective row; last column is RHS.
  std::vector<std::vector<double>> tab(cols + 1,
                                       std::vector<double>(nvar + 1, 0.0));
  for (std::size_t a = 0; a < cols; ++a) {
    for (std::size_t j = 0; j < rows; ++j) tab[a][j] = payoff[j][a] + shift;
    tab[a][rows + a] = 1.0;
    tab[a][nvar] = 1.0;
  }
  // Objective row holds z_j - c_j (c = 1 for y variables).
  for (std::size_t j = 0; j < rows; ++j) tab[cols][j] = -1.0;

  std::vector<std::size_t> basis(cols);
  for (std::size_t a = 0; a < cols; ++a) basis[a] = rows + a;

  const std::size_t max_iters = 50 * (nvar + cols) + 200;
  std::size_t iter = 0;
  while (true) {
    if (++iter > max_iters)
      throw std::runtime_error("solve_matrix_game: simplex iteration guard");
    const bool bland = iter > max_iters / 2;

    // Entering column.
    std::size_t enter = nvar;
    double best = -kCostEps;
    for (std::size_t j = 0; j < nvar; ++j) {
      const double rc = tab[cols][j];
      if (rc < best) {
        best = rc;
        enter = j;
        if (bland) break;
      }
    }
    if (enter == nvar) break;  // optimal

    // Ratio test.
    std::size_t leave = cols;
    double best_ratio = std::numeric_limits<double>::infinity();
    for (std::size_t r = 0; r < cols; ++r) {
      const double coef = tab[r][enter];
      if (coef > kPivotEps) {
        const double ratio = tab[r][nvar] / coef;
        if (ratio < best_ratio - 1e-15 ||
            (bland && ratio <= best_ratio && leave != cols &&
             basis[r] < basis[leave])) {
          best_ratio = ratio;
          leave = r;
        }
      }
    }
    if (leave == cols)
      throw std::runtime_error("solve_matrix_game: unbounded packing LP");

    // Pivot.
    const double piv = tab[leave][enter];
    for (std::size_t j = 0; j <= nvar; ++j) tab[leave][j] /= piv;
    for (std::size_t r = 0; r <= cols; ++r) {
      if (r == leave) continue;
      const double f = tab[r][enter];
      if (f == 0.0) continue;
      for (std::size_t j = 0; j <= nvar; ++j) tab[r][j] -= f * tab[leave][j];
    }
    basis[leave] = enter;
  }

  const double packed = tab[cols][nvar];  // 1'y* = 1'x* by duality
  MatrixGameSolution out;
  out.column_strategy.assign(cols, 0.0);
  double total = 0.0;
  for (std::size_t a = 0; a < cols; ++a) {
    const double xa = std::max(0.0, tab[cols][rows + a]);
    out.column_strategy[a] = xa;
    total += xa;
  }
  if (!(total > 0.0) || !(packed > 0.0))
    throw std::runtime_error("solve_matrix_game: degenerate optimum");
  for (double& w : out.column_strategy) w /= total;
  out.value = 1.0 / packed - shift;
  return out;
}

namespace {

void validate_ratio_game(const RatioGame& game) {
  if (game.gain_rows.empty())
    throw std::invalid_argument("solve_ratio_game: need at least one gain row");
  const std::size_t actions = game.costs.size();
  if (actions == 0)
    throw std::invalid_argument("solve_ratio_game: need at least one action");
  for (double k : game.costs)
    if (!(k > 0.0) || !std::isfinite(k))
      throw std::invalid_argument(
          "solve_ratio_game: costs must be finite and strictly positive");
  for (const auto& row : game.gain_rows) {
    if (row.size() != actions)
      throw std::invalid_argument(
          "solve_ratio_game: gain row length mismatch with costs");
    for (double d : row)
      if (d < 0.0 || !std::isfinite(d))
        throw std::invalid_argument(
            "solve_ratio_game: gains must be finite and nonnegative");
  }
  if (!(game.tol > 0.0))
    throw std::invalid_argument("solve_ratio_game: tol must be positive");
}

}  // namespace

RatioGameSolution solve_ratio_game(const RatioGame& game) {
  validate_ratio_game(game);
  const std::size_t actions = game.costs.size();

  for (const auto& row : game.gain_rows) {
    bool all_zero = true;
    for (double d : row)
      if (d > 0.0) {
        all_zero = false;
        break;
      }
    if (all_zero) {
      // Documented convention: an all-zero constraint row pins the value
      // at 0 for every weight vector.
      return {std::vector<double>(actions, 1.0 / static_cast<double>(actions)),
              0.0};
    }
  }

  double hi = 0.0;
  for (const auto& row : game.gain_rows)
    for (std::size_t a = 0; a < actions; ++a)
      hi = std::max(hi, row[a] / game.costs[a]);

  auto payoff_at = [&](double t) {
    std::vector<std::vector<double>> m(game.gain_rows.size(),
                                       std::vector<double>(actions));
    for (std::size_t j = 0; j < game.gain_rows.size(); ++j)
      for (std::size_t a = 0; a < actions; ++a)
        m[j][a] = game.gain_rows[j][a] - t * game.costs[a];
    return m;
  };

  double lo = 0.0;
  std::vector<double> weights =
      solve_matrix_game(payoff_at(0.0)).column_strategy;
  while (hi - lo > game.tol) {
    const double mid = 0.5 * (lo + hi);
    const MatrixGameSolution sol = solve_matrix_game(payoff_at(mid));
    if (sol.value >= 0.0) {
      lo = mid;
      weights = sol.column_strategy;
    } else {
      hi = mid;
    }
  }

  // Certify the achieved value of the returned weights.
  double wk = 0.0;
  for (std::size_t a = 0; a < actions; ++a) wk += weights[a] * game.costs[a];
  double achieved = std::numeric_limits<double>::infinity();
  for (const auto& row : game.gain_rows) {
    double wd = 0.0;
    for (std::size_t a = 0; a < actions; ++a) wd += weights[a] * row[a];
    achieved = std::min(achieved, wd / wk);
  }
  return {std::move(weights), achieved};
}

}  // namespace casht
