#include "casht/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "casht/errors.hpp"
#include "casht/special.hpp"

namespace casht {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

const char* verdict_name(Benefit b) {
  switch (b) {
    case Benefit::improves:
      return "improves";
    case Benefit::degrades:
      return "degrades";
    case Benefit::neutral:
      return "neutral";
  }
  return "?";
}

}  // namespace

ResolvedScenario resolve(const Scenario& scenario) {
  scenario.validate();
  RandomStream instance_stream = rng_stream(scenario.instance_seed, 0);
  ObservationModel obs = generate_benchmark_instance(
      scenario.hypotheses, scenario.actions, instance_stream);

  std::vector<CostModel> costs;
  costs.reserve(static_cast<std::size_t>(scenario.actions));
  if (scenario.cost_rule == "explicit") {
    costs = scenario.explicit_costs;
  } else {
    // Hyperparameters are drawn once and stay fixed for the whole scenario.
    RandomStream hyper = rng_stream(scenario.instance_seed, 1);
    for (int a = 0; a < scenario.actions; ++a) {
      if (scenario.cost_rule == "pareto") {
        const double x_min =
            scenario.pareto_xmin_lo +
            (scenario.pareto_xmin_hi - scenario.pareto_xmin_lo) *
                hyper.uniform_open01();
        const double alpha =
            scenario.pareto_alpha_lo +
            (scenario.pareto_alpha_hi - scenario.pareto_alpha_lo) *
                hyper.uniform_open01();
        costs.push_back(CostModel::pareto(x_min, alpha));
      } else {
        const double alpha =
            scenario.loglogistic_alpha_lo +
            (scenario.loglogistic_alpha_hi - scenario.loglogistic_alpha_lo) *
                hyper.uniform_open01();
        costs.push_back(CostModel::log_logistic(alpha, alpha));
      }
    }
  }

  DeadlinePlan planned =
      plan_deadlines(costs, scenario.deadline,
                     scenario.deadline == DeadlineMode::fixed
                         ? &scenario.fixed_deadlines
                         : nullptr);
  return {std::move(obs), std::move(costs), std::move(planned)};
}

std::string scenario_manifest(const Scenario& scenario,
                              const ResolvedScenario& resolved) {
  Scenario pinned = scenario;
  pinned.cost_rule = "explicit";
  pinned.explicit_costs = resolved.costs;
  return serialize_config(pinned);
}

std::vector<double> log_grid(double lo, double hi, int points) {
  if (!(lo > 0.0) || !(lo < hi) || points < 2)
    throw std::invalid_argument("log_grid: need 0 < lo < hi and points >= 2");
  std::vector<double> out(static_cast<std::size_t>(points));
  const double llo = std::log(lo);
  const double lhi = std::log(hi);
  for (int i = 0; i < points; ++i)
    out[static_cast<std::size_t>(i)] =
        std::exp(llo + (lhi - llo) * i / double(points - 1));
  return out;
}

std::vector<double> linear_grid(double lo, double hi, int points) {
  if (!(lo < hi) || points < 2)
    throw std::invalid_argument("linear_grid: need lo < hi and points >= 2");
  std::vector<double> out(static_cast<std::size_t>(points));
  for (int i = 0; i < points; ++i)
    out[static_cast<std::size_t>(i)] = lo + (hi - lo) * i / double(points - 1);
  return out;
}

void write_kappa_curve(std::ostream& out, const CostModel& model,
                       const std::vector<double>& grid) {
  out << "family,params,T,kappa,mean,overshoot,verdict\n";
  const double m = model.mean();
  for (double t : grid) {
    out << model.name() << ',' << model.params_string() << ',' << fmt(t) << ',';
    if (model.cdf(t) > 0.0) {
      out << fmt(model.kappa(t)) << ',' << fmt(m) << ','
          << fmt(model.overshoot(t)) << ','
          << verdict_name(benefit_verdict(model, t).verdict);
    } else {
      out << ',' << fmt(m) << ",,zero_mass";
    }
    out << '\n';
  }
}

namespace {

void append_batch_row(std::string& csv, const Scenario& scenario,
                      PolicyKind policy, double delta,
                      const std::string& arm_name, const BatchSummary& s) {
  double avg_n = 0.0, avg_eff = 0.0, avg_cancel = 0.0;
  for (double x : s.mean_n) avg_n += x;
  for (double x : s.mean_n_eff) avg_eff += x;
  for (double x : s.mean_n_cancel) avg_cancel += x;
  csv += to_string(policy);
  csv += ',' + scenario.cost_rule;
  csv += ',' + arm_name;
  csv += ',' + fmt(delta);
  csv += ',' + std::to_string(scenario.trials);
  csv += ',' + fmt(s.avg_total_cost);
  csv += ',' + fmt(s.total_cost_std_error);
  csv += ',' + fmt(s.empirical_error);
  csv += ',' + fmt(avg_n);
  csv += ',' + fmt(avg_eff);
  csv += ',' + fmt(avg_cancel);
  csv += ',' + std::to_string(s.censored);
  csv += '\n';
}

}  // namespace

ScenarioFiles run_scenario(const Scenario& scenario,
                           const std::filesystem::path& outdir, int jobs) {
  const ResolvedScenario resolved = resolve(scenario);
  const DeadlinePlan baseline =
      plan_deadlines(resolved.costs, DeadlineMode::none);

  std::string csv =
      "policy,cost_family,deadline_mode,delta,trials,avg_total_cost,stderr,"
      "empirical_error,avg_N,avg_N_eff,avg_N_cancel,censored_count\n";

  for (PolicyKind policy : scenario.policies) {
    for (double delta : scenario.deltas) {
      for (int arm = 0; arm < 2; ++arm) {
        if (arm == 1 && scenario.deadline == DeadlineMode::none) continue;
        const DeadlinePlan& plan = arm == 0 ? baseline : resolved.planned;
        EngineSetup setup;
        setup.observation = &resolved.observation;
        setup.costs = &resolved.costs;
        setup.plan = plan;
        setup.policy.kind = policy;
        setup.policy.delta = delta;
        setup.policy.rho_tilde = scenario.rho_tilde;
        setup.policy.game_tol = scenario.game_tol;
        setup.policy.effective_costs = plan.effective_costs;
        setup.timing = scenario.timing;
        setup.max_steps = scenario.max_steps;
        const BatchResult result =
            run_batch(setup, scenario.trials, scenario.seed, jobs);
        append_batch_row(csv, scenario, policy, delta,
                         arm == 0 ? "none" : to_string(scenario.deadline),
                         result.summary);
      }
    }
  }

  std::filesystem::create_directories(outdir);
  ScenarioFiles files{outdir / "results.csv", outdir / "manifest.txt"};
  {
    std::ofstream out(files.results, std::ios::binary);
    out << csv;
  }
  {
    std::ofstream out(files.manifest, std::ios::binary);
    out << scenario_manifest(scenario, resolved);
  }
  return files;
}

namespace {

void write_figure_pareto_crossing(std::ostream& out) {
  // kappa vs mean for Pareto(1, 3/2); the curve crosses the mean at
  // T = alpha x_min and attains its minimum at the stationarity root.
  const CostModel model = CostModel::pareto(1.0, 1.5);
  const auto opt = pareto_optimal_deadline(1.0, 1.5);
  std::vector<double> grid = linear_grid(1.1, 10.0, 179);  // step 0.05
  grid.push_back(opt.deadline);
  std::sort(grid.begin(), grid.end());
  out << "family,params,T,kappa,mean,overshoot,verdict,is_optimum\n";
  for (double t : grid) {
    out << model.name() << ',' << model.params_string() << ',' << fmt(t) << ','
        << fmt(model.kappa(t)) << ',' << fmt(model.mean()) << ','
        << fmt(model.overshoot(t)) << ','
        << verdict_name(benefit_verdict(model, t).verdict) << ','
        << (t == opt.deadline ? 1 : 0) << '\n';
  }
}

void write_figure_loglogistic(std::ostream& out) {
  // kappa vs mean for LogLogistic(4, 3/2) with the median marked.
  const CostModel model = CostModel::log_logistic(4.0, 1.5);
  const double median = loglogistic_median_deadline(4.0, 1.5);
  std::vector<double> grid = linear_grid(0.05, 12.0, 240);  // step 0.05
  out << "family,params,T,kappa,mean,overshoot,verdict,is_median\n";
  for (double t : grid) {
    out << model.name() << ',' << model.params_string() << ',' << fmt(t) << ','
        << fmt(model.kappa(t)) << ',' << fmt(model.mean()) << ','
        << fmt(model.overshoot(t)) << ','
        << verdict_name(benefit_verdict(model, t).verdict) << ','
        << (t == median ? 1 : 0) << '\n';
  }
}

void write_figure_erlang(std::ostream& out) {
  // Conditional remaining cost vs mean for Erlang(2,1) on [0,2]; the curves
  // coincide only at T = 0.
  const CostModel model = CostModel::erlang(2, 1.0);
  out << "family,params,T,overshoot,mean\n";
  for (double t : linear_grid(0.0, 2.0, 201)) {
    const double o = t == 0.0 ? model.mean() : model.overshoot(t);
    out << model.name() << ',' << model.params_string() << ',' << fmt(t) << ','
        << fmt(o) << ',' << fmt(model.mean()) << '\n';
  }
}

void write_figure_beta_inequality(std::ostream& out) {
  // (2/beta) B(1/2; 1/beta, 1-1/beta) against B(1; 1-1/beta, 1+1/beta) for
  // beta in (1,3]; the curves cross exactly at beta = 2.
  out << "beta,median_deadline_side,mean_side\n";
  for (double b : linear_grid(1.01, 3.0, 200)) {
    const double lhs =
        2.0 / b * incomplete_beta(0.5, 1.0 / b, 1.0 - 1.0 / b);
    const double rhs = incomplete_beta(1.0, 1.0 - 1.0 / b, 1.0 + 1.0 / b);
    out << fmt(b) << ',' << fmt(lhs) << ',' << fmt(rhs) << '\n';
  }
}

}  // namespace

void write_figure(int id, std::ostream& out) {
  switch (id) {
    case 2:
      write_figure_pareto_crossing(out);
      return;
    case 3:
      write_figure_loglogistic(out);
      return;
    case 6:
      write_figure_erlang(out);
      return;
    case 7:
      write_figure_beta_inequality(out);
      return;
    default:
      throw std::invalid_argument(
          "write_figure: id must be one of 2, 3, 6, 7 (4 and 5 are scenario "
          "runs)");
  }
}

Scenario loglogistic_benchmark_scenario(bool full_scale) {
  Scenario s;
  s.cost_rule = "loglogistic";
  s.loglogistic_alpha_lo = 1.0;
  s.loglogistic_alpha_hi = 2.0;
  s.deadline = DeadlineMode::median;  // T_a = scale_a
  if (full_scale) {
    s.hypotheses = 32;
    s.actions = 16;
    s.trials = 50000;
  }
  return s;
}

Scenario pareto_benchmark_scenario(bool full_scale) {
  Scenario s;
  s.cost_rule = "pareto";
  s.pareto_xmin_lo = 2.0;
  s.pareto_xmin_hi = 3.0;
  s.pareto_alpha_lo = 1.1;
  s.pareto_alpha_hi = 2.0;
  s.deadline = DeadlineMode::optimal;
  if (full_scale) {
    s.hypotheses = 32;
    s.actions = 16;
    s.trials = 50000;
  }
  return s;
}

ScenarioFiles run_figure_scenario(int id, const std::filesystem::path& outdir,
                                  bool full_scale, int jobs) {
  if (id == 4) return run_scenario(loglogistic_benchmark_scenario(full_scale),
                                   outdir, jobs);
  if (id == 5)
    return run_scenario(pareto_benchmark_scenario(full_scale), outdir, jobs);
  throw std::invalid_argument("run_figure_scenario: id must be 4 or 5");
}

namespace {

struct SuiteResult {
  bool ok = true;
  std::string detail;

  void fail(const std::string& d) {
    if (ok) detail = d;
    ok = false;
  }
};

void print_suite(std::ostream& out, const std::string& name,
                 const SuiteResult& r, bool& all_ok) {
  out << (r.ok ? "[PASS] " : "[FAIL] ") << name;
  if (!r.ok) out << ": " << r.detail;
  out << '\n';
  all_ok = all_ok && r.ok;
}

std::vector<CostModel> property_models() {
  return {
      CostModel::exponential(1.0),
      CostModel::exponential(2.5),
      CostModel::erlang(2, 1.0),
      CostModel::erlang(3, 0.5),
      CostModel::erlang(5, 2.0),
      CostModel::hyperexponential(0.3, 1.0, 4.0),
      CostModel::hyperexponential(0.7, 0.2, 2.0),
      CostModel::pareto(1.0, 1.5),
      CostModel::pareto(2.0, 1.1),
      CostModel::pareto(0.5, 3.0),
      CostModel::log_logistic(4.0, 1.5),
      CostModel::log_logistic(1.0, 2.0),
      CostModel::log_logistic(2.0, 1.2),
  };
}

}  // namespace

bool run_property_suites(std::ostream& out) {
  bool all_ok = true;

  {  // Truncated-mean decomposition against mean and overshoot.
    SuiteResult r;
    for (const CostModel& m : property_models()) {
      if (m.mean() == kInf) continue;
      const double s = m.grid_scale();
      for (double t : log_grid(0.01 * s, 100.0 * s, 40)) {
        if (!(m.survival(t) > 0.0)) continue;
        const double lhs = m.truncated_mean(t);
        const double rhs = m.mean() - m.overshoot(t) * m.survival(t);
        if (std::fabs(lhs - rhs) > 1e-8 * std::max(1.0, m.mean()))
          r.fail(m.name() + " " + m.params_string() + " at T=" + fmt(t) +
                 ": " + fmt(lhs) + " vs " + fmt(rhs));
      }
    }
    print_suite(out, "truncated mean decomposition", r, all_ok);
  }

  {  // Erlang: overshoot below the mean everywhere, so deadlines degrade.
    SuiteResult r;
    for (int k : {2, 3, 5})
      for (double rate : {0.5, 1.0, 2.0}) {
        const CostModel m = CostModel::erlang(k, rate);
        for (double t : log_grid(0.01 * k / rate, 20.0 / rate, 40)) {
          if (!(m.overshoot(t) < m.mean()))
            r.fail("erlang k=" + std::to_string(k) + " rate=" + fmt(rate) +
                   " at T=" + fmt(t));
          if (!(m.kappa(t) > m.mean()))
            r.fail("erlang kappa k=" + std::to_string(k) + " T=" + fmt(t));
        }
      }
    print_suite(out, "erlang overshoot below mean", r, all_ok);
  }

  {  // Hyperexponential: overshoot above the mean everywhere.
    SuiteResult r;
    for (double p : {0.2, 0.5, 0.8})
      for (double a : {0.5, 1.0, 3.0})
        for (double b : {0.1, 2.0, 8.0}) {
          if (a == b) continue;
          const CostModel m = CostModel::hyperexponential(p, a, b);
          for (double t : log_grid(0.01 * m.mean(), 100.0 * m.mean(), 40)) {
            if (!(m.overshoot(t) > m.mean()))
              r.fail("hyperexponential p=" + fmt(p) + " a=" + fmt(a) +
                     " b=" + fmt(b) + " at T=" + fmt(t));
            // Strict comparison only while the kappa-mean gap, which scales
            // with the survival mass, is resolvable in doubles.
            if (m.survival(t) > 1e-12) {
              if (!(m.kappa(t) < m.mean()))
                r.fail("hyperexponential kappa at T=" + fmt(t));
            } else if (!(m.kappa(t) <= m.mean())) {
              r.fail("hyperexponential kappa (saturated) at T=" + fmt(t));
            }
          }
        }
    print_suite(out, "hyperexponential overshoot above mean", r, all_ok);
  }

  {  // Exponential: kappa coincides with the mean (memorylessness).
    SuiteResult r;
    for (double rate : {0.25, 1.0, 4.0}) {
      const CostModel m = CostModel::exponential(rate);
      for (double t : log_grid(0.01 / rate, 100.0 / rate, 40))
        if (std::fabs(m.kappa(t) - m.mean()) > 1e-9)
          r.fail("exponential rate=" + fmt(rate) + " at T=" + fmt(t));
    }
    print_suite(out, "exponential kappa equals mean", r, all_ok);
  }

  {  // Pareto: kappa crosses the mean exactly at T = alpha x_min.
    SuiteResult r;
    for (double x_min : {0.5, 1.0, 2.5})
      for (double alpha : {1.2, 1.5, 2.0, 3.0}) {
        const CostModel m = CostModel::pareto(x_min, alpha);
        const double threshold = alpha * x_min;
        for (double t : log_grid(1.02 * x_min, 100.0 * x_min, 60)) {
          const double sign = m.kappa(t) - m.mean();
          if (t < threshold * (1.0 - 1e-9) && !(sign > 0.0))
            r.fail("pareto below threshold: x=" + fmt(x_min) +
                   " a=" + fmt(alpha) + " T=" + fmt(t));
          if (t > threshold * (1.0 + 1e-9) && !(sign < 0.0))
            r.fail("pareto above threshold: x=" + fmt(x_min) +
                   " a=" + fmt(alpha) + " T=" + fmt(t));
        }
        if (std::fabs(m.kappa(threshold) - m.mean()) > 1e-6 * m.mean())
          r.fail("pareto at threshold: x=" + fmt(x_min) + " a=" + fmt(alpha));
      }
    print_suite(out, "pareto mean crossing at alpha * x_min", r, all_ok);
  }

  {  // Benefit verdict agrees with the sign of kappa - mean.
    SuiteResult r;
    for (const CostModel& m : property_models()) {
      const double s = m.grid_scale();
      for (double t : log_grid(0.02 * s, 100.0 * s, 40)) {
        if (!(m.cdf(t) > 0.0) || !(m.survival(t) > 0.0)) continue;
        const BenefitVerdict v = benefit_verdict(m, t);
        const double mean = m.mean();
        if (mean == kInf) {
          if (v.verdict != Benefit::improves) r.fail("infinite mean verdict");
          continue;
        }
        const double diff = m.kappa(t) - mean;
        if (diff < -1e-8 && v.verdict != Benefit::improves)
          r.fail(m.name() + " improves mismatch at T=" + fmt(t));
        if (diff > 1e-8 && v.verdict != Benefit::degrades)
          r.fail(m.name() + " degrades mismatch at T=" + fmt(t));
      }
    }
    print_suite(out, "overshoot criterion matches kappa side", r, all_ok);
  }

  {  // Log-logistic median rule: helps for shape <= 2, reverses beyond.
    SuiteResult r;
    for (double beta : {1.1, 1.3, 1.5, 1.7, 1.9, 2.0}) {
      const CostModel m = CostModel::log_logistic(4.0, beta);
      if (!(m.kappa(4.0) <= m.mean() + 1e-9))
        r.fail("median rule beta=" + fmt(beta));
    }
    const CostModel reversed = CostModel::log_logistic(4.0, 2.5);
    if (!(reversed.kappa(4.0) > reversed.mean()))
      r.fail("median rule fails to reverse at beta=2.5");
    print_suite(out, "loglogistic median rule boundary at shape 2", r, all_ok);
  }

  {  // Log-logistic kappa shape: interior minimum, rising beyond it.
    SuiteResult r;
    for (double beta : {1.1, 1.5, 2.0}) {
      const CostModel m = CostModel::log_logistic(4.0, beta);
      const auto nd = numeric_optimal_deadline(m, 0.04, 400.0, 1e-8);
      if (!nd) {
        r.fail("no interior improvement found for beta=" + fmt(beta));
        continue;
      }
      if (!(nd->kappa_at_deadline <= m.kappa(4.0) + 1e-9))
        r.fail("interior minimum above median kappa, beta=" + fmt(beta));
      double prev = -kInf;
      bool rising = true;
      for (double t : log_grid(2.0 * nd->deadline, 400.0, 30)) {
        const double k = m.kappa(t);
        rising = rising && k > prev;
        prev = k;
      }
      if (!rising) r.fail("kappa not increasing beyond the minimum");
    }
    print_suite(out, "loglogistic kappa has an interior minimum", r, all_ok);
  }

  {  // Pareto optimal deadline: stationarity and global optimality.
    SuiteResult r;
    for (double x_min : {0.5, 1.0, 2.0})
      for (double alpha : {1.1, 1.5, 2.0, 2.5}) {
        const auto opt = pareto_optimal_deadline(x_min, alpha);
        const double tau = opt.deadline / x_min;
        const double res = (alpha - 1.0) * std::pow(tau, alpha) -
                           alpha * alpha * std::pow(tau, alpha - 1.0) + 1.0;
        if (std::fabs(res) > 1e-6)
          r.fail("stationarity residual " + fmt(res) + " at alpha=" +
                 fmt(alpha));
        const CostModel m = CostModel::pareto(x_min, alpha);
        for (double t : log_grid(1.01 * x_min, 100.0 * x_min, 50))
          if (m.kappa(t) < opt.kappa_star - 1e-9)
            r.fail("non-global optimum at alpha=" + fmt(alpha));
      }
    print_suite(out, "pareto deadline stationarity and optimality", r, all_ok);
  }

  return all_ok;
}

}  // namespace casht
