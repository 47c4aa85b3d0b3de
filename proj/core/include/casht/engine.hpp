#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "casht/cost_models.hpp"
#include "casht/deadline_planner.hpp"
#include "casht/observation.hpp"
#include "casht/policies.hpp"

namespace casht {

// Cost-revelation timing: ex_ante reveals the realized cost before the
// sample (aborting at the deadline is possible); ex_post reveals it after
// (deadlines have no operational effect).
enum class Timing { ex_ante, ex_post };

std::string to_string(Timing timing);
Timing timing_from_string(const std::string& s);

enum class ThetaMode { redraw, sweep };

struct TrialRecord {
  int true_hypothesis = 0;
  int declared = -1;
  double total_cost = 0.0;
  std::vector<std::int64_t> n_started;    // N_a
  std::vector<std::int64_t> n_effective;  // N_eff^a
  std::vector<std::int64_t> n_canceled;   // N_cancel^a
  std::int64_t steps = 0;
  bool correct = false;
  bool censored = false;  // hit the step guard before stopping

  bool operator==(const TrialRecord&) const = default;
  // Canonical textual form (17 significant digits); used for byte-identity
  // checks.
  std::string to_csv_row() const;
};

struct BatchSummary {
  std::int64_t trials = 0;
  std::int64_t censored = 0;  // excluded from every average below
  double avg_total_cost = 0.0;
  double total_cost_std_error = 0.0;
  double empirical_error = 0.0;
  std::vector<double> mean_n;
  std::vector<double> mean_n_eff;
  std::vector<double> mean_n_cancel;
  // mean N_a / (mean N_eff_a / F_a(T_a)); NaN when mean N_eff_a = 0.
  std::vector<double> wald_ratio;
};

struct EngineSetup {
  const ObservationModel* observation = nullptr;
  const std::vector<CostModel>* costs = nullptr;
  DeadlinePlan plan;
  PolicyConfig policy;
  Timing timing = Timing::ex_ante;
  std::int64_t max_steps = 1'000'000;
};

// Immutable per-arm context: validates the setup and precomputes the ratio
// game solutions (they depend only on the model and the effective costs, not
// on per-sample data). Safe for concurrent read across trial threads.
class PolicyRuntime {
 public:
  explicit PolicyRuntime(const EngineSetup& setup);

  const EngineSetup& setup() const { return setup_; }
  const std::vector<double>& policy_costs() const { return policy_costs_; }

  TrialRecord run_trial(int true_hypothesis, RandomStream& stream) const;

 private:
  EngineSetup setup_;
  std::vector<double> policy_costs_;  // plan kappa (ex-ante) or means (ex-post)
  std::vector<std::vector<double>> chernoff_weights_;  // per believed
  std::vector<double> exploration_weights_;            // NJ1 only
};

TrialRecord run_trial(const EngineSetup& setup, int true_hypothesis,
                      RandomStream& stream);

struct BatchResult {
  std::vector<TrialRecord> records;
  BatchSummary summary;
};

// Trial t draws from rng_stream(seed, t); the true hypothesis is redrawn
// uniformly per trial (or swept as t mod H). Aggregation is performed in
// trial order after all workers finish, so results are identical for any
// parallelism degree.
BatchResult run_batch(const EngineSetup& setup, std::int64_t trials,
                      std::uint64_t seed, int max_parallelism = 1,
                      ThetaMode theta_mode = ThetaMode::redraw);

BatchSummary summarize(const std::vector<TrialRecord>& records,
                       const EngineSetup& setup);

struct WaldReport {
  struct Row {
    int action = 0;
    double cdf_at_deadline = 0.0;
    double mean_n = 0.0;
    double mean_n_eff = 0.0;
    double mean_n_cancel = 0.0;
    double predicted_n = 0.0;       // mean N_eff / F(T)
    double predicted_cancel = 0.0;  // mean N_eff (1/F(T) - 1)
    double rel_dev_n = 0.0;
    double rel_dev_cancel = 0.0;
  };
  std::vector<Row> rows;
};

// Checks the deadline-inflation identities on an ex-ante batch: for every
// action with effective samples, N_a should match N_eff_a / F(T_a) and
// N_cancel_a should match N_eff_a (1/F(T_a) - 1).
WaldReport wald_consistency(const BatchSummary& summary,
                            const DeadlinePlan& plan,
                            const std::vector<CostModel>& costs);

}  // namespace casht
