#pragma once

#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "casht/cost_models.hpp"
#include "casht/deadline_planner.hpp"
#include "casht/engine.hpp"
#include "casht/policies.hpp"

namespace casht {

// A named experiment: benchmark instance size and seeds, policies and error
// targets, the per-action cost specification (a one-time hyper-draw rule or
// an explicit list), and the deadline mode for the planned arm.
struct Scenario {
  int hypotheses = 8;
  int actions = 4;
  std::uint64_t instance_seed = 1;  // benchmark instance + hyper-draws
  std::uint64_t seed = 1;           // trial substreams
  std::int64_t trials = 2000;
  Timing timing = Timing::ex_ante;
  DeadlineMode deadline = DeadlineMode::optimal;
  std::vector<double> fixed_deadlines;  // iff deadline == fixed
  std::vector<PolicyKind> policies = {PolicyKind::ca_chernoff,
                                      PolicyKind::ca_nj1,
                                      PolicyKind::ca_phidelta};
  std::vector<double> deltas = {1e-1, 1e-2, 1e-3, 1e-4};
  double rho_tilde = 0.75;
  double game_tol = 1e-6;
  std::int64_t max_steps = 1'000'000;

  // "pareto": x_min,a ~ Unif(xmin range), alpha_a ~ Unif(alpha range)
  // "loglogistic": scale_a = shape_a ~ Unif(alpha range)
  // "explicit": cost.action.K entries
  std::string cost_rule = "pareto";
  double pareto_xmin_lo = 2.0, pareto_xmin_hi = 3.0;
  double pareto_alpha_lo = 1.1, pareto_alpha_hi = 2.0;
  double loglogistic_alpha_lo = 1.0, loglogistic_alpha_hi = 2.0;
  std::vector<CostModel> explicit_costs;

  std::string output_dir;  // empty: resolved by the CLI

  bool operator==(const Scenario&) const = default;

  void validate() const;  // throws ConfigError naming the offending key
};

// Flat "key = value" text, one pair per line, '#' comments, dotted keys.
// Unknown keys are errors. When explicit_keys is non-null it receives the
// set of keys present in the text.
Scenario load_config(const std::string& text,
                     std::set<std::string>* explicit_keys = nullptr);

// Canonical serialization; load_config(serialize_config(s)) == s.
std::string serialize_config(const Scenario& scenario);

}  // namespace casht
