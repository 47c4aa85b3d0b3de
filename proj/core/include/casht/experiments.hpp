#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "casht/scenario.hpp"

namespace casht {

// A scenario with its one-time draws materialized: the benchmark instance,
// the per-action cost models, and the planned deadline arm.
struct ResolvedScenario {
  ObservationModel observation;
  std::vector<CostModel> costs;
  DeadlinePlan planned;
};

ResolvedScenario resolve(const Scenario& scenario);

// Resolved replay manifest: the scenario serialized with the hyper-draw rule
// replaced by the drawn per-action models. Feeding it back through simulate
// reproduces every output byte for byte.
std::string scenario_manifest(const Scenario& scenario,
                              const ResolvedScenario& resolved);

std::vector<double> log_grid(double lo, double hi, int points);
std::vector<double> linear_grid(double lo, double hi, int points);

// CSV columns: family,params,T,kappa,mean,overshoot,verdict. Points with
// F(T) = 0 leave the kappa and overshoot cells empty.
void write_kappa_curve(std::ostream& out, const CostModel& model,
                       const std::vector<double>& grid);

struct ScenarioFiles {
  std::filesystem::path results;
  std::filesystem::path manifest;
};

// Runs every (policy, delta, deadline arm) batch and writes results.csv and
// manifest.txt under outdir. The baseline arm has no deadlines; the planned
// arm uses the scenario's deadline mode (skipped when that mode is none).
ScenarioFiles run_scenario(const Scenario& scenario,
                           const std::filesystem::path& outdir, int jobs);

// Figure data series (ids 2, 3, 6, 7).
void write_figure(int id, std::ostream& out);

// Figure 4 (log-logistic costs) and 5 (Pareto costs) are scenario runs.
Scenario loglogistic_benchmark_scenario(bool full_scale);
Scenario pareto_benchmark_scenario(bool full_scale);
ScenarioFiles run_figure_scenario(int id, const std::filesystem::path& outdir,
                                  bool full_scale, int jobs);

// Closed-form property suites (overshoot criteria, crossing behavior,
// decomposition identity, optimal-deadline stationarity); prints one line
// per suite, returns false if any fails.
bool run_property_suites(std::ostream& out);

}  // namespace casht
