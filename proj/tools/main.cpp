// casht - cost-aware sequential hypothesis testing with per-action deadlines.
//
// Subcommands:
//   kappa     effective-cost curve for one cost model over a deadline grid
//   deadline  per-action deadline plan for one or more cost models
//   verify    closed-form property suites (nonzero exit on failure)
//   simulate  run a scenario config; emits results.csv and manifest.txt
//   figure    data series behind the paper-style figures

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "casht/experiments.hpp"

namespace {

std::filesystem::path default_output_dir(const std::string& cli_value) {
  if (!cli_value.empty()) return cli_value;
  if (const char* env = std::getenv("CASHT_OUTPUT_DIR")) return env;
  return ".";
}

casht::CostModel model_from_args(const std::string& family,
                                 const std::vector<double>& params) {
  return casht::make_cost_model(family, params);
}

void write_to(const std::string& path, const std::string& content) {
  if (path.empty() || path == "-") {
    std::cout << content;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file " + path);
  out << content;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"cost-aware sequential hypothesis testing under random "
               "per-action costs with abortable actions"};
  app.require_subcommand(1);

  // --- kappa ---------------------------------------------------------------
  std::string kappa_family = "pareto";
  std::vector<double> kappa_params = {1.0, 1.5};
  double kappa_tmin = 0.0, kappa_tmax = 0.0;
  int kappa_points = 100;
  std::string kappa_out;
  auto* kappa = app.add_subcommand(
      "kappa", "emit the effective-cost curve kappa(T) as CSV");
  kappa->add_option("--family", kappa_family,
                    "exponential | erlang | hyperexponential | pareto | "
                    "loglogistic");
  kappa->add_option("--params", kappa_params, "family parameters")->expected(-1);
  kappa->add_option("--tmin", kappa_tmin, "grid start (default 0.01 * scale)");
  kappa->add_option("--tmax", kappa_tmax, "grid end (default 100 * scale)");
  kappa->add_option("--points", kappa_points, "grid size (log-spaced)");
  kappa->add_option("--out", kappa_out, "output file ('-' for stdout)");

  // --- deadline ------------------------------------------------------------
  std::string dl_mode = "optimal";
  std::vector<std::string> dl_models;
  std::vector<double> dl_fixed;
  auto* deadline = app.add_subcommand(
      "deadline", "plan per-action deadlines and effective costs");
  deadline->add_option("--mode", dl_mode, "none | fixed | median | optimal | numeric");
  deadline
      ->add_option("--model", dl_models,
                   "cost model spec, e.g. 'pareto 1 1.5' (repeatable)")
      ->required()
      ->expected(-1);
  deadline->add_option("--fixed", dl_fixed, "deadlines for mode=fixed")
      ->expected(-1);

  // --- verify ---------------------------------------------------------------
  auto* verify = app.add_subcommand(
      "verify", "run the closed-form property suites; nonzero exit on failure");

  // --- simulate --------------------------------------------------------------
  std::string sim_config;
  std::string sim_out;
  std::uint64_t sim_seed = 0;
  bool sim_seed_set = false;
  bool sim_full_scale = false;
  int sim_jobs = 1;
  auto* simulate = app.add_subcommand("simulate", "run a scenario config");
  simulate->add_option("--config", sim_config, "config file (key = value lines)")
      ->required();
  simulate->add_option("--seed", sim_seed, "override the trial seed")
      ->each([&](const std::string&) { sim_seed_set = true; });
  simulate->add_option("--out", sim_out, "output directory");
  simulate->add_flag("--full-scale", sim_full_scale,
                     "default to the full-size instance (H=32, 16 actions, "
                     "50000 trials) where the config does not say otherwise");
  simulate->add_option("--jobs", sim_jobs, "worker threads (results identical "
                                           "for any value)");

  // --- figure ----------------------------------------------------------------
  int fig_id = 0;
  std::string fig_out;
  bool fig_full_scale = false;
  int fig_jobs = 1;
  auto* figure = app.add_subcommand("figure", "emit figure data series");
  figure->add_option("--id", fig_id, "2, 3, 4, 5, 6 or 7")->required();
  figure->add_option("--out", fig_out,
                     "output file for ids 2/3/6/7, directory for 4/5");
  figure->add_flag("--full-scale", fig_full_scale,
                   "ids 4/5: full-size instance instead of desk scale");
  figure->add_option("--jobs", fig_jobs, "worker threads for ids 4/5");

  CLI11_PARSE(app, argc, argv);

  try {
    if (kappa->parsed()) {
      const casht::CostModel model = model_from_args(kappa_family, kappa_params);
      const double scale = model.grid_scale();
      double lo = kappa_tmin > 0.0 ? kappa_tmin : 0.01 * scale;
      double hi = kappa_tmax > 0.0 ? kappa_tmax : 100.0 * scale;
      std::ostringstream out;
      casht::write_kappa_curve(out, model,
                               casht::log_grid(lo, hi, kappa_points));
      write_to(kappa_out, out.str());
      return 0;
    }

    if (deadline->parsed()) {
      std::vector<casht::CostModel> models;
      for (const std::string& spec : dl_models) {
        std::istringstream ss(spec);
        std::string family;
        ss >> family;
        std::vector<double> params;
        double x;
        while (ss >> x) params.push_back(x);
        models.push_back(casht::make_cost_model(family, params));
      }
      const casht::DeadlineMode mode = casht::deadline_mode_from_string(dl_mode);
      const casht::DeadlinePlan plan = casht::plan_deadlines(
          models, mode,
          mode == casht::DeadlineMode::fixed ? &dl_fixed : nullptr);
      std::cout << "action,family,params,deadline,effective_cost,mean\n";
      for (std::size_t a = 0; a < models.size(); ++a) {
        char buf[160];
        std::snprintf(buf, sizeof buf, "%zu,%s,%s,%.17g,%.17g,%.17g\n", a,
                      models[a].name().c_str(),
                      models[a].params_string().c_str(), plan.deadlines[a],
                      plan.effective_costs[a], models[a].mean());
        std::cout << buf;
      }
      return 0;
    }

    if (verify->parsed()) {
      return casht::run_property_suites(std::cout) ? 0 : 1;
    }

    if (simulate->parsed()) {
      std::ifstream in(sim_config);
      if (!in) throw std::runtime_error("cannot open config " + sim_config);
      std::stringstream buffer;
      buffer << in.rdbuf();
      std::set<std::string> keys;
      casht::Scenario scenario = casht::load_config(buffer.str(), &keys);
      if (sim_full_scale) {
        if (!keys.count("hypotheses")) scenario.hypotheses = 32;
        if (!keys.count("actions")) scenario.actions = 16;
        if (!keys.count("trials")) scenario.trials = 50000;
        scenario.validate();
      }
      if (sim_seed_set) scenario.seed = sim_seed;
      const std::filesystem::path outdir = default_output_dir(
          !sim_out.empty() ? sim_out : scenario.output_dir);
      const auto files = casht::run_scenario(scenario, outdir, sim_jobs);
      std::cout << "wrote " << files.results.string() << '\n'
                << "wrote " << files.manifest.string() << '\n';
      return 0;
    }

    if (figure->parsed()) {
      if (fig_id == 4 || fig_id == 5) {
        const std::filesystem::path outdir = default_output_dir(fig_out);
        const auto files =
            casht::run_figure_scenario(fig_id, outdir, fig_full_scale, fig_jobs);
        std::cout << "wrote " << files.results.string() << '\n'
                  << "wrote " << files.manifest.string() << '\n';
        return 0;
      }
      std::ostringstream out;
      casht::write_figure(fig_id, out);
      write_to(fig_out, out.str());
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
