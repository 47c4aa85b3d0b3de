#include "casht/engine.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <thread>

#include "casht/errors.hpp"

namespace casht {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

std::string to_string(Timing timing) {
  return timing == Timing::ex_ante ? "ex_ante" : "ex_post";
}

Timing timing_from_string(const std::string& s) {
  if (s == "ex_ante") return Timing::ex_ante;
  if (s == "ex_post") return Timing::ex_post;
  throw std::invalid_argument("unknown timing '" + s + "'");
}

std::string TrialRecord::to_csv_row() const {
  char buf[64];
  std::string out;
  out += std::to_string(true_hypothesis) + ',' + std::to_string(declared);
  std::snprintf(buf, sizeof buf, ",%.17g", total_cost);
  out += buf;
  auto append = [&](const std::vector<std::int64_t>& v) {
    for (std::int64_t x : v) out += ',' + std::to_string(x);
  };
  append(n_started);
  append(n_effective);
  append(n_canceled);
  out += ',' + std::to_string(steps);
  out += correct ? ",1" : ",0";
  out += censored ? ",1" : ",0";
  return out;
}

PolicyRuntime::PolicyRuntime(const EngineSetup& setup) : setup_(setup) {
  if (!setup_.observation || !setup_.costs)
    throw std::invalid_argument("PolicyRuntime: missing model pointers");
  const int acts = setup_.observation->action_count();
  if (static_cast<int>(setup_.costs->size()) != acts)
    throw std::invalid_argument(
        "PolicyRuntime: cost model count does not match action count");
  if (setup_.max_steps < 1)
    throw std::invalid_argument("PolicyRuntime: max_steps must be >= 1");

  if (setup_.timing == Timing::ex_ante) {
    if (static_cast<int>(setup_.plan.deadlines.size()) != acts)
      throw std::invalid_argument(
          "PolicyRuntime: plan size does not match action count");
    for (int a = 0; a < acts; ++a) {
      const double T = setup_.plan.deadlines[a];
      if (T != kInf && !((*setup_.costs)[a].cdf(T) > 0.0))
        throw std::invalid_argument(
            "PolicyRuntime: plan deadline with zero acceptance mass on action " +
            std::to_string(a));
    }
    policy_costs_ = setup_.plan.effective_costs;
  } else {
    // Ex-post: aborting is impossible, so policies price actions at their
    // mean cost regardless of any nominal plan.
    policy_costs_.reserve(acts);
    for (const CostModel& m : *setup_.costs) policy_costs_.push_back(m.mean());
  }

  PolicyConfig check = setup_.policy;
  check.effective_costs = policy_costs_;
  check.validate(acts);

  const ObservationModel& obs = *setup_.observation;
  const int h = obs.hypothesis_count();
  if (setup_.policy.kind == PolicyKind::ca_chernoff ||
      setup_.policy.kind == PolicyKind::ca_nj1) {
    chernoff_weights_.resize(h);
    for (int i = 0; i < h; ++i) {
      try {
        chernoff_weights_[i] = chernoff_action_weights(
            obs, i, policy_costs_, setup_.policy.game_tol);
      } catch (const DegenerateGameError&) {
        chernoff_weights_[i].assign(acts, 1.0 / acts);
      }
    }
  }
  if (setup_.policy.kind == PolicyKind::ca_nj1) {
    exploration_weights_ =
        nj1_exploration_weights(obs, policy_costs_, setup_.policy.game_tol);
  }
}

namespace {

int draw_categorical(const std::vector<double>& weights, RandomStream& rng) {
  const double u = rng.uniform01();
  double acc = 0.0;
  for (std::size_t a = 0; a < weights.size(); ++a) {
    acc += weights[a];
    if (u < acc) return static_cast<int>(a);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace

TrialRecord PolicyRuntime::run_trial(int true_hypothesis,
                                     RandomStream& stream) const {
  const ObservationModel& obs = *setup_.observation;
  const std::vector<CostModel>& costs = *setup_.costs;
  const int h = obs.hypothesis_count();
  const int acts = obs.action_count();
  if (true_hypothesis < 0 || true_hypothesis >= h)
    throw std::out_of_range("run_trial: true hypothesis out of range");

  TrialRecord rec;
  rec.true_hypothesis = true_hypothesis;
  rec.n_started.assign(acts, 0);
  rec.n_effective.assign(acts, 0);
  rec.n_canceled.assign(acts, 0);

  const bool ex_ante = setup_.timing == Timing::ex_ante;
  const PolicyKind kind = setup_.policy.kind;

  Belief belief(h);
  std::optional<PhiDeltaState> stage;
  if (kind == PolicyKind::ca_phidelta)
    stage.emplace(obs, policy_costs_, setup_.policy.delta);

  std::optional<int> declared;
  while (rec.steps < setup_.max_steps) {
    int action;
    if (kind == PolicyKind::ca_phidelta) {
      action = stage->stage_action();
    } else if (kind == PolicyKind::ca_nj1 &&
               belief.max_posterior() <= setup_.policy.rho_tilde) {
      action = draw_categorical(exploration_weights_, stream);
    } else {
      action = draw_categorical(chernoff_weights_[belief.argmax()], stream);
    }

    ++rec.steps;
    ++rec.n_started[action];

    const double cost = costs[action].sample(stream);
    std::optional<double> outcome;
    if (ex_ante && cost > setup_.plan.deadlines[action]) {
      rec.total_cost += setup_.plan.deadlines[action];
      ++rec.n_canceled[action];
      // aborted: no sample
    } else {
      rec.total_cost += cost;
      ++rec.n_effective[action];
      outcome = obs.sample(true_hypothesis, action, stream);
    }

    if (kind == PolicyKind::ca_phidelta) {
      stage->update(obs, policy_costs_, action, outcome);
      if (stage->done()) {
        declared = stage->declared();
        break;
      }
    } else {
      if (outcome.has_value()) belief.update(obs, action, *outcome);
      declared = chernoff_stop(belief, setup_.policy.delta);
      if (declared.has_value()) break;
    }
  }

  if (declared.has_value()) {
    rec.declared = *declared;
    rec.correct = rec.declared == true_hypothesis;
  } else {
    rec.censored = true;
  }
  return rec;
}

TrialRecord run_trial(const EngineSetup& setup, int true_hypothesis,
                      RandomStream& stream) {
  return PolicyRuntime(setup).run_trial(true_hypothesis, stream);
}

BatchSummary summarize(const std::vector<TrialRecord>& records,
                       const EngineSetup& setup) {
  const int acts = setup.observation->action_count();
  BatchSummary s;
  s.trials = static_cast<std::int64_t>(records.size());
  s.mean_n.assign(acts, 0.0);
  s.mean_n_eff.assign(acts, 0.0);
  s.mean_n_cancel.assign(acts, 0.0);
  s.wald_ratio.assign(acts, std::numeric_limits<double>::quiet_NaN());

  std::int64_t completed = 0;
  std::int64_t errors = 0;
  double sum_cost = 0.0;
  double sum_cost2 = 0.0;
  for (const TrialRecord& r : records) {
    if (r.censored) {
      ++s.censored;
      continue;
    }
    ++completed;
    sum_cost += r.total_cost;
    sum_cost2 += r.total_cost * r.total_cost;
    if (!r.correct) ++errors;
    for (int a = 0; a < acts; ++a) {
      s.mean_n[a] += static_cast<double>(r.n_started[a]);
      s.mean_n_eff[a] += static_cast<double>(r.n_effective[a]);
      s.mean_n_cancel[a] += static_cast<double>(r.n_canceled[a]);
    }
  }
  if (completed > 0) {
    const double n = static_cast<double>(completed);
    s.avg_total_cost = sum_cost / n;
    const double var =
        std::max(0.0, sum_cost2 / n - s.avg_total_cost * s.avg_total_cost);
    s.total_cost_std_error = std::sqrt(var / n);
    s.empirical_error = static_cast<double>(errors) / n;
    for (int a = 0; a < acts; ++a) {
      s.mean_n[a] /= n;
      s.mean_n_eff[a] /= n;
      s.mean_n_cancel[a] /= n;
      if (s.mean_n_eff[a] > 0.0) {
        const double T = setup.timing == Timing::ex_ante
                             ? setup.plan.deadlines[a]
                             : kInf;
        const double F = T == kInf ? 1.0 : (*setup.costs)[a].cdf(T);
        s.wald_ratio[a] = s.mean_n[a] / (s.mean_n_eff[a] / F);
      }
    }
  }
  return s;
}

BatchResult run_batch(const EngineSetup& setup, std::int64_t trials,
                      std::uint64_t seed, int max_parallelism,
                      ThetaMode theta_mode) {
  if (trials < 1) throw std::invalid_argument("run_batch: trials must be >= 1");
  const PolicyRuntime runtime(setup);
  const int h = setup.observation->hypothesis_count();

  BatchResult out;
  out.records.resize(static_cast<std::size_t>(trials));

  auto worker = [&](std::int64_t begin, std::int64_t end) {
    for (std::int64_t t = begin; t < end; ++t) {
      RandomStream stream = rng_stream(seed, static_cast<std::uint64_t>(t));
      int theta;
      if (theta_mode == ThetaMode::redraw) {
        theta = static_cast<int>(stream.below(static_cast<std::uint64_t>(h)));
      } else {
        theta = static_cast<int>(t % h);
      }
      out.records[static_cast<std::size_t>(t)] =
          runtime.run_trial(theta, stream);
    }
  };

  const int jobs = std::max(1, std::min<int>(max_parallelism,
                                             static_cast<int>(trials)));
  if (jobs == 1) {
    worker(0, trials);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(jobs));
    const std::int64_t chunk = (trials + jobs - 1) / jobs;
    for (int j = 0; j < jobs; ++j) {
      const std::int64_t begin = j * chunk;
      const std::int64_t end = std::min(trials, begin + chunk);
      if (begin >= end) break;
      pool.emplace_back(worker, begin, end);
    }
    for (auto& th : pool) th.join();
  }

  out.summary = summarize(out.records, setup);
  return out;
}

WaldReport wald_consistency(const BatchSummary& summary,
                            const DeadlinePlan& plan,
                            const std::vector<CostModel>& costs) {
  WaldReport report;
  for (std::size_t a = 0; a < costs.size(); ++a) {
    if (!(summary.mean_n_eff[a] > 0.0)) continue;
    WaldReport::Row row;
    row.action = static_cast<int>(a);
    const double T = plan.deadlines[a];
    row.cdf_at_deadline = T == kInf ? 1.0 : costs[a].cdf(T);
    row.mean_n = summary.mean_n[a];
    row.mean_n_eff = summary.mean_n_eff[a];
    row.mean_n_cancel = summary.mean_n_cancel[a];
    row.predicted_n = row.mean_n_eff / row.cdf_at_deadline;
    row.predicted_cancel = row.mean_n_eff * (1.0 / row.cdf_at_deadline - 1.0);
    row.rel_dev_n = std::fabs(row.mean_n - row.predicted_n) /
                    std::max(row.predicted_n, 1e-300);
    row.rel_dev_cancel =
        row.predicted_cancel == 0.0
            ? (row.mean_n_cancel == 0.0 ? 0.0
                                        : std::numeric_limits<double>::infinity())
            : std::fabs(row.mean_n_cancel - row.predicted_cancel) /
                  row.predicted_cancel;
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace casht
