#include <doctest.h>

#include <cmath>
#include <numbers>

#include "casht/errors.hpp"
#include "casht/numerics.hpp"
#include "casht/random.hpp"
#include "casht/special.hpp"
#include "oracles.hpp"

using namespace casht;

TEST_SUITE("numerics") {

TEST_CASE("incomplete beta: pinned values") {
  // Uniform integrand.
  CHECK(incomplete_beta(0.5, 1.0, 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  // Complete B(1/2, 1/2) = pi.
  CHECK(incomplete_beta(1.0, 0.5, 0.5) ==
        doctest::Approx(std::numbers::pi).epsilon(1e-12));
  // Quadrature oracle value (also cross-checked at 1e-8 by the oracle call
  // below); the b parameter sits on the singular side used by the
  // log-logistic forms.
  CHECK(incomplete_beta(0.5, 2.0 / 3.0, 1.0 / 3.0) ==
        doctest::Approx(1.120652183674272).epsilon(1e-10));
  CHECK(std::fabs(incomplete_beta(0.5, 2.0 / 3.0, 1.0 / 3.0) -
                  oracle::incomplete_beta(0.5, 2.0 / 3.0, 1.0 / 3.0)) < 1e-8);
}

TEST_CASE("incomplete beta: domain errors") {
  CHECK_THROWS_AS(incomplete_beta(-0.1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(incomplete_beta(1.1, 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(incomplete_beta(0.5, 0.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(incomplete_beta(0.5, 1.0, -2.0), std::domain_error);
}

TEST_CASE("incomplete beta: nondecreasing in x and complete-beta identity") {
  for (double a : {0.3, 0.7, 1.0, 1.7, 3.0}) {
    for (double b : {0.3, 0.7, 1.0, 1.7, 3.0}) {
      double prev = 0.0;
      for (int i = 1; i <= 40; ++i) {
        const double x = i / 40.0;
        const double v = incomplete_beta(x, a, b);
        CHECK(v >= prev);
        prev = v;
      }
      const double complete = std::exp(std::lgamma(a) + std::lgamma(b) -
                                       std::lgamma(a + b));
      CHECK(incomplete_beta(1.0, a, b) ==
            doctest::Approx(complete).epsilon(1e-9));
    }
  }
}

TEST_CASE("incomplete beta: quadrature agreement on the singular range") {
  for (double beta : {1.1, 1.5, 2.0, 2.5}) {
    const double a = 1.0 / beta;
    const double b = 1.0 - 1.0 / beta;
    for (double x : {0.05, 0.3, 0.5, 0.8, 0.97}) {
      CHECK(std::fabs(incomplete_beta(x, a, b) -
                      oracle::incomplete_beta(x, a, b)) < 1e-8);
    }
  }
}

TEST_CASE("bracketed root: pinned examples") {
  // Optimal Pareto deadline stationarity at alpha = 3/2 (tau form).
  const double tau = find_root_bracketed(
      {[](double t) {
         return 0.5 * std::pow(t, 1.5) - 2.25 * std::sqrt(t) + 1.0;
       },
       1.0, 16.0, 1e-10});
  CHECK(tau == doctest::Approx(3.41825).epsilon(1e-5));
  CHECK(tau == doctest::Approx(3.4182465066839259).epsilon(1e-9));

  CHECK(find_root_bracketed({[](double x) { return x - 1.0; }, 0.0, 2.0,
                             1e-12}) == doctest::Approx(1.0).epsilon(1e-11));

  const double quad = find_root_bracketed(
      {[](double t) { return t * t - 4.0 * t + 1.0; }, 1.0, 16.0, 1e-12});
  CHECK(quad == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-11));
}

TEST_CASE("bracketed root: sign change stays within tol of the result") {
  auto f = [](double x) { return std::cos(x) - x; };
  const double tol = 1e-9;
  const double r = find_root_bracketed({f, 0.0, 2.0, tol});
  CHECK(f(r - tol) * f(r + tol) < 0.0);
}

TEST_CASE("bracketed root: agreeing endpoint signs are rejected") {
  CHECK_THROWS_AS(
      find_root_bracketed({[](double x) { return x * x + 1.0; }, -1.0, 1.0,
                           1e-9}),
      BracketError);
  CHECK_THROWS_AS(find_root_bracketed({[](double x) { return x; }, 1.0, 0.5,
                                       1e-9}),
                  std::invalid_argument);
}

TEST_CASE("convex minimization") {
  const auto quad = minimize_convex_1d(
      [](double x) { return (x - 2.0) * (x - 2.0); }, 0.0, 5.0, 1e-9);
  CHECK(quad.argmin == doctest::Approx(2.0).epsilon(1e-7));
  CHECK(quad.min_value == doctest::Approx(0.0).epsilon(1e-12));

  const auto kink =
      minimize_convex_1d([](double x) { return std::fabs(x); }, -1.0, 3.0,
                         1e-9);
  CHECK(kink.argmin == doctest::Approx(0.0).epsilon(1e-7));
  CHECK(kink.min_value == doctest::Approx(0.0).epsilon(1e-8));

  CHECK_THROWS_AS(minimize_convex_1d([](double x) { return x; }, 1.0, 1.0,
                                     1e-9),
                  std::invalid_argument);
}

TEST_CASE("matrix game: known small games") {
  // Matching pennies: value 0, uniform strategy.
  const auto pennies = solve_matrix_game({{1.0, -1.0}, {-1.0, 1.0}});
  CHECK(pennies.value == doctest::Approx(0.0).epsilon(1e-9));
  CHECK(pennies.column_strategy[0] == doctest::Approx(0.5).epsilon(1e-9));

  // Dominant column.
  const auto dom = solve_matrix_game({{3.0, 1.0}, {4.0, 2.0}});
  CHECK(dom.value == doctest::Approx(3.0).epsilon(1e-9));
  CHECK(dom.column_strategy[0] == doctest::Approx(1.0).epsilon(1e-9));

  // 2-row game against the graphical solution: rows (2,0), (0,1):
  // max_w min(2w, 1-w) -> w = 1/3, value 2/3.
  const auto mixed = solve_matrix_game({{2.0, 0.0}, {0.0, 1.0}});
  CHECK(mixed.value == doctest::Approx(2.0 / 3.0).epsilon(1e-9));
  CHECK(mixed.column_strategy[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("ratio game: pinned examples") {
  {
    const auto sol = solve_ratio_game({{{2.0, 1.0}}, {1.0, 1.0}, 1e-8});
    CHECK(sol.value == doctest::Approx(2.0).epsilon(1e-6));
    CHECK(sol.weights[0] == doctest::Approx(1.0).epsilon(1e-6));
  }
  {
    const auto sol =
        solve_ratio_game({{{1.0, 0.0}, {0.0, 1.0}}, {1.0, 1.0}, 1e-8});
    CHECK(sol.value == doctest::Approx(0.5).epsilon(1e-6));
    CHECK(sol.weights[0] == doctest::Approx(0.5).epsilon(1e-4));
  }
  {
    const auto sol =
        solve_ratio_game({{{2.0, 0.0}, {0.0, 1.0}}, {1.0, 1.0}, 1e-8});
    CHECK(sol.value == doctest::Approx(2.0 / 3.0).epsilon(1e-6));
    CHECK(sol.weights[0] == doctest::Approx(1.0 / 3.0).epsilon(1e-4));
    CHECK(sol.weights[1] == doctest::Approx(2.0 / 3.0).epsilon(1e-4));
  }
}

TEST_CASE("ratio game: all-zero row convention") {
  const auto sol =
      solve_ratio_game({{{1.0, 2.0}, {0.0, 0.0}}, {1.0, 1.0}, 1e-8});
  CHECK(sol.value == 0.0);
  CHECK(sol.weights[0] == doctest::Approx(0.5));
  CHECK(sol.weights[1] == doctest::Approx(0.5));
}

TEST_CASE("ratio game: invariants against the grid oracle") {
  RandomStream rng = rng_stream(7, 0);
  for (int trial = 0; trial < 25; ++trial) {
    const int actions = trial % 2 == 0 ? 2 : 3;
    const int rows = 1 + static_cast<int>(rng.below(4));
    std::vector<std::vector<double>> d(rows, std::vector<double>(actions));
    std::vector<double> costs(actions);
    bool any_zero_row = false;
    for (auto& row : d) {
      bool nonzero = false;
      for (double& v : row) {
        v = rng.uniform01() < 0.2 ? 0.0 : rng.uniform(0.1, 20.0);
        nonzero = nonzero || v > 0.0;
      }
      any_zero_row = any_zero_row || !nonzero;
    }
    if (any_zero_row) continue;
    for (double& k : costs) k = rng.uniform(0.2, 5.0);

    const double tol = 1e-6;
    const auto sol = solve_ratio_game({d, costs, tol});
    // Weights form a distribution.
    double sum = 0.0;
    for (double w : sol.weights) {
      CHECK(w >= -1e-12);
      sum += w;
    }
    CHECK(sum == doctest::Approx(1.0).epsilon(1e-9));
    // The reported value is achieved by the reported weights.
    CHECK(oracle::min_ratio(d, costs, sol.weights) >= sol.value - tol);
    // And matches the brute-force optimum.
    const auto brute = oracle::grid_ratio_game(d, costs, 1e-3);
    CHECK(std::fabs(sol.value - brute.value) <=
          2.0 * tol + 2e-3 * std::max(1.0, brute.value));
  }
}

TEST_CASE("ratio game: cost scaling leaves the support, scales the value") {
  const std::vector<std::vector<double>> d = {{3.0, 0.5, 0.0},
                                              {0.0, 1.0, 2.0},
                                              {1.0, 0.0, 1.5}};
  const std::vector<double> costs = {1.0, 2.0, 0.5};
  const auto base = solve_ratio_game({d, costs, 1e-8});
  for (double c : {0.5, 2.0, 10.0}) {
    std::vector<double> scaled = costs;
    for (double& k : scaled) k *= c;
    const auto sol = solve_ratio_game({d, scaled, 1e-8});
    CHECK(sol.value == doctest::Approx(base.value / c).epsilon(1e-4));
    for (std::size_t a = 0; a < costs.size(); ++a) {
      const bool in_base = base.weights[a] > 1e-6;
      const bool in_scaled = sol.weights[a] > 1e-6;
      CHECK(in_base == in_scaled);
    }
  }
}

TEST_CASE("rng: determinism and substream separation") {
  RandomStream a = rng_stream(42, 0);
  RandomStream b = rng_stream(42, 0);
  for (int i = 0; i < 1000; ++i) CHECK(a.next_u64() == b.next_u64());

  RandomStream c = rng_stream(42, 0);
  RandomStream d = rng_stream(42, 1);
  CHECK(c.next_u64() != d.next_u64());

  RandomStream e = rng_stream(43, 0);
  RandomStream f = rng_stream(42, 0);
  CHECK(e.next_u64() != f.next_u64());
}

TEST_CASE("rng: uniform draws pass a KS check at the 1% level") {
  RandomStream rng = rng_stream(42, 7);
  const std::size_t n = 100000;
  std::vector<double> sample(n);
  for (double& x : sample) x = rng.uniform01();
  const double d =
      oracle::ks_statistic(sample, [](double x) { return x; });
  CHECK(d < 1.63 / std::sqrt(static_cast<double>(n)));
}

TEST_CASE("rng: normal moments") {
  RandomStream rng = rng_stream(11, 3);
  const int n = 200000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    s += x;
    s2 += x * x;
  }
  CHECK(s / n == doctest::Approx(0.0).epsilon(0.01));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
}

}  // TEST_SUITE
