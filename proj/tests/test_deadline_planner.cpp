#include <doctest.h>

#include <cmath>
#include <limits>

#include "casht/deadline_planner.hpp"
#include "casht/errors.hpp"
#include "casht/random.hpp"

using namespace casht;

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TEST_SUITE("deadline_planner") {

TEST_CASE("benefit verdict pinned cases") {
  CHECK(benefit_verdict(CostModel::exponential(1.0), 2.0).verdict ==
        Benefit::neutral);
  CHECK(benefit_verdict(CostModel::pareto(1.0, 1.5), 2.0).verdict ==
        Benefit::improves);
  const auto erlang = benefit_verdict(CostModel::erlang(2, 1.0), 1.0);
  CHECK(erlang.verdict == Benefit::degrades);
  CHECK(erlang.overshoot_minus_mean == doctest::Approx(-0.5));
  // Infinite mean: improves by convention, with an infinite margin.
  const auto heavy = benefit_verdict(CostModel::pareto(1.0, 0.8), 5.0);
  CHECK(heavy.verdict == Benefit::improves);
  CHECK(heavy.overshoot_minus_mean == kInf);
  CHECK_THROWS_AS(benefit_verdict(CostModel::pareto(1.0, 1.5), 0.5),
                  ZeroMassError);
}

TEST_CASE("benefit verdict agrees with the kappa side on grids") {
  for (const CostModel& m :
       {CostModel::erlang(3, 0.5), CostModel::hyperexponential(0.4, 0.5, 2.0),
        CostModel::pareto(2.0, 1.4), CostModel::log_logistic(3.0, 1.6)}) {
    if (m.mean() == kInf) continue;
    const double s = m.grid_scale();
    for (int i = 0; i < 40; ++i) {
      const double t = 0.02 * s * std::pow(5000.0, i / 39.0);
      if (!(m.cdf(t) > 0.0) || !(m.survival(t) > 1e-12)) continue;
      const double diff = m.kappa(t) - m.mean();
      const auto v = benefit_verdict(m, t);
      if (diff < -1e-8) CHECK(v.verdict == Benefit::improves);
      if (diff > 1e-8) CHECK(v.verdict == Benefit::degrades);
    }
  }
}

TEST_CASE("pareto optimal deadline pinned values") {
  const auto a15 = pareto_optimal_deadline(1.0, 1.5);
  CHECK(a15.deadline == doctest::Approx(3.41825).epsilon(3e-4));
  CHECK(a15.deadline == doctest::Approx(3.4182465066839259).epsilon(1e-9));
  CHECK(a15.kappa_star == doctest::Approx(2.2788310044559506).epsilon(1e-9));
  CHECK_FALSE(a15.mean_infinite);

  const auto a2 = pareto_optimal_deadline(1.0, 2.0);
  CHECK(a2.deadline == doctest::Approx(2.0 + std::sqrt(3.0)).epsilon(1e-9));

  const auto scaled = pareto_optimal_deadline(2.0, 1.5);
  CHECK(scaled.deadline == doctest::Approx(2.0 * a15.deadline).epsilon(1e-9));
}

TEST_CASE("pareto optimal deadline: stationarity and scale equivariance") {
  for (double alpha : {1.1, 1.5, 2.0, 3.0}) {
    const auto base = pareto_optimal_deadline(1.0, alpha);
    const double tau = base.deadline;
    const double residual = (alpha - 1.0) * std::pow(tau, alpha) -
                            alpha * alpha * std::pow(tau, alpha - 1.0) + 1.0;
    CHECK(std::fabs(residual) <= 1e-6);
    for (double c : {0.5, 2.0, 10.0}) {
      const auto scaled = pareto_optimal_deadline(c, alpha);
      CHECK(scaled.deadline ==
            doctest::Approx(c * base.deadline).epsilon(1e-9));
    }
  }
}

TEST_CASE("pareto optimal deadline: global optimality against random T") {
  const auto opt = pareto_optimal_deadline(1.0, 1.5);
  const CostModel m = CostModel::pareto(1.0, 1.5);
  RandomStream rng = rng_stream(3, 0);
  for (int i = 0; i < 1000; ++i) {
    const double t = 1.0 + rng.uniform01() * 99.0;
    if (!(m.cdf(t) > 0.0)) continue;
    CHECK(m.kappa(t) >= opt.kappa_star - 1e-9);
  }
}

TEST_CASE("pareto optimal deadline with infinite mean still solves") {
  const auto at1 = pareto_optimal_deadline(1.0, 1.0);
  CHECK(at1.mean_infinite);
  // Stationarity for the alpha = 1 form: tau - log(tau) = 2.
  const double tau = at1.deadline;
  CHECK(tau - std::log(tau) == doctest::Approx(2.0).epsilon(1e-9));

  const auto heavy = pareto_optimal_deadline(1.0, 0.8);
  CHECK(heavy.mean_infinite);
  const CostModel m = CostModel::pareto(1.0, 0.8);
  // Interior minimum: both neighbors sit above.
  CHECK(m.kappa(heavy.deadline * 1.05) >= heavy.kappa_star);
  CHECK(m.kappa(heavy.deadline * 0.95) >= heavy.kappa_star);
}

TEST_CASE("loglogistic median deadline and its guarantee boundary") {
  CHECK(loglogistic_median_deadline(4.0, 1.5) == 4.0);
  {
    const CostModel m = CostModel::log_logistic(1.0, 2.0);
    CHECK(loglogistic_median_deadline(1.0, 2.0) == 1.0);
    CHECK(m.kappa(1.0) <= m.mean() + 1e-9);
  }
  {
    const CostModel m = CostModel::log_logistic(4.0, 2.5);
    CHECK(loglogistic_median_deadline(4.0, 2.5) == 4.0);
    CHECK(m.kappa(4.0) > m.mean());
  }
}

TEST_CASE("numeric optimal deadline") {
  {
    const auto nd =
        numeric_optimal_deadline(CostModel::pareto(1.0, 1.5), 1.01, 100.0, 1e-8);
    REQUIRE(nd.has_value());
    CHECK(nd->deadline == doctest::Approx(3.41825).epsilon(1e-3));
  }
  CHECK_FALSE(numeric_optimal_deadline(CostModel::exponential(1.0), 0.1, 10.0,
                                       1e-8)
                  .has_value());
  CHECK_FALSE(numeric_optimal_deadline(CostModel::erlang(2, 1.0), 0.1, 20.0,
                                       1e-8)
                  .has_value());
  {
    // Hyperexponential effective cost sits below the mean everywhere.
    const CostModel m = CostModel::hyperexponential(0.3, 1.0, 4.0);
    const auto nd = numeric_optimal_deadline(m, 0.01, 50.0, 1e-8);
    REQUIRE(nd.has_value());
    CHECK(nd->kappa_at_deadline < m.mean());
  }
  CHECK_THROWS_AS(numeric_optimal_deadline(CostModel::exponential(1.0), 5.0,
                                           1.0, 1e-8),
                  std::invalid_argument);
  CHECK_THROWS_AS(numeric_optimal_deadline(CostModel::pareto(1.0, 1.5), 0.5,
                                           10.0, 1e-8),
                  ZeroMassError);
}

TEST_CASE("loglogistic numeric search finds the interior minimum") {
  // The effective cost dips below the median value at an interior point and
  // rises toward the mean afterwards, so the numeric mode picks an interior
  // deadline rather than an endpoint.
  const CostModel m = CostModel::log_logistic(4.0, 1.5);
  const auto nd = numeric_optimal_deadline(m, 0.04, 400.0, 1e-8);
  REQUIRE(nd.has_value());
  CHECK(nd->deadline > 1.0);
  CHECK(nd->deadline < 10.0);
  CHECK(nd->kappa_at_deadline <= m.kappa(4.0) + 1e-9);
  CHECK(nd->kappa_at_deadline < m.mean());
}

TEST_CASE("plan: mode none uses means") {
  const std::vector<CostModel> models = {CostModel::pareto(1.0, 1.5),
                                         CostModel::exponential(2.0)};
  const DeadlinePlan plan = plan_deadlines(models, DeadlineMode::none);
  CHECK(plan.deadlines[0] == kInf);
  CHECK(plan.deadlines[1] == kInf);
  CHECK(plan.effective_costs[0] == doctest::Approx(3.0));
  CHECK(plan.effective_costs[1] == doctest::Approx(0.5));
}

TEST_CASE("plan: optimal mode per family") {
  const std::vector<CostModel> models = {
      CostModel::pareto(1.0, 1.5), CostModel::pareto(2.0, 2.0),
      CostModel::log_logistic(4.0, 1.5), CostModel::erlang(2, 1.0)};
  const DeadlinePlan plan = plan_deadlines(models, DeadlineMode::optimal);
  CHECK(plan.deadlines[0] == doctest::Approx(3.4182465066839259).epsilon(1e-9));
  CHECK(plan.deadlines[1] ==
        doctest::Approx(2.0 * (2.0 + std::sqrt(3.0))).epsilon(1e-9));
  CHECK(plan.deadlines[2] == 4.0);
  CHECK(plan.deadlines[3] == kInf);  // deadlines cannot help an Erlang cost
  CHECK(plan.effective_costs[2] ==
        doctest::Approx(5.9768116462627869).epsilon(1e-9));
  CHECK(plan.effective_costs[3] == doctest::Approx(2.0));
  // Shape beyond the median guarantee reverts to no deadline.
  const DeadlinePlan heavy_tail =
      plan_deadlines({CostModel::log_logistic(4.0, 2.5)}, DeadlineMode::optimal);
  CHECK(heavy_tail.deadlines[0] == kInf);
}

TEST_CASE("plan: median mode is total across families") {
  const std::vector<CostModel> models = {
      CostModel::exponential(2.0),      CostModel::erlang(2, 1.0),
      CostModel::hyperexponential(0.3, 1.0, 4.0), CostModel::pareto(1.0, 1.5),
      CostModel::log_logistic(4.0, 1.5)};
  const DeadlinePlan plan = plan_deadlines(models, DeadlineMode::median);
  CHECK(plan.deadlines[0] == doctest::Approx(std::log(2.0) / 2.0));
  CHECK(plan.deadlines[1] == doctest::Approx(1.6783469900166606).epsilon(1e-9));
  CHECK(plan.deadlines[3] == doctest::Approx(std::pow(2.0, 1.0 / 1.5)));
  CHECK(plan.deadlines[4] == 4.0);
  for (std::size_t a = 0; a < models.size(); ++a) {
    CHECK(models[a].cdf(plan.deadlines[a]) == doctest::Approx(0.5).epsilon(1e-9));
    CHECK(plan.effective_costs[a] ==
          doctest::Approx(models[a].kappa(plan.deadlines[a])));
  }
}

TEST_CASE("plan: fixed mode validates inputs") {
  const std::vector<CostModel> models = {CostModel::pareto(1.0, 1.5)};
  const std::vector<double> good = {2.0};
  const DeadlinePlan plan = plan_deadlines(models, DeadlineMode::fixed, &good);
  CHECK(plan.deadlines[0] == 2.0);

  const std::vector<double> below_support = {0.5};
  CHECK_THROWS_AS(plan_deadlines(models, DeadlineMode::fixed, &below_support),
                  std::invalid_argument);
  CHECK_THROWS_AS(plan_deadlines(models, DeadlineMode::fixed, nullptr),
                  std::invalid_argument);
  CHECK_THROWS_AS(plan_deadlines(models, DeadlineMode::none, &good),
                  std::invalid_argument);
}

}  // TEST_SUITE
