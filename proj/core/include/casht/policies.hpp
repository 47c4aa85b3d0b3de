#pragma once

#include <optional>
#include <string>
#include <vector>

#include "casht/observation.hpp"

namespace casht {

// Posterior over hypotheses, maintained in log space.
class Belief {
 public:
  explicit Belief(int hypotheses);  // uniform prior

  int size() const { return static_cast<int>(log_post_.size()); }
  // Bayes update with the action's likelihood; an aborted action carries no
  // evidence, so there is no abstain overload - callers simply skip the
  // update.
  void update(const ObservationModel& model, int action, double x);
  std::vector<double> posterior() const;
  double posterior_of(int hypothesis) const;
  double max_posterior() const;
  int argmax() const;  // lowest index on ties

 private:
  void normalize();
  std::vector<double> log_post_;
};

enum class PolicyKind { ca_chernoff, ca_nj1, ca_phidelta };

std::string to_string(PolicyKind kind);
PolicyKind policy_kind_from_string(const std::string& s);

struct PolicyConfig {
  PolicyKind kind = PolicyKind::ca_chernoff;
  double delta = 1e-2;          // target error, in (0,1)
  double rho_tilde = 0.75;      // NJ1 exploration threshold, > 0.5
  double game_tol = 1e-6;
  std::vector<double> effective_costs;  // kappa per action

  void validate(int action_count) const;
};

// Action-drawing distribution of the cost-aware Chernoff scheme: the ratio
// game with one gain row per competitor j != believed, d_j[a] =
// kld(believed, j, a). All-zero rows (hypotheses indistinguishable from the
// believed one under every action) are dropped; if every row drops a
// DegenerateGameError is thrown and callers fall back to uniform weights.
std::vector<double> chernoff_action_weights(
    const ObservationModel& model, int believed,
    const std::vector<double>& effective_costs, double game_tol = 1e-6);

// NJ1 exploration distribution: one gain row per ordered pair (i, j).
std::vector<double> nj1_exploration_weights(
    const ObservationModel& model, const std::vector<double>& effective_costs,
    double game_tol = 1e-6);

// Exploration weights while max posterior <= rho_tilde, Chernoff weights for
// the current argmax otherwise.
std::vector<double> nj1_action_weights(const ObservationModel& model,
                                       const Belief& belief,
                                       const std::vector<double>& effective_costs,
                                       double rho_tilde,
                                       double game_tol = 1e-6);

// Declares the argmax hypothesis once its posterior strictly exceeds
// 1 - delta.
std::optional<int> chernoff_stop(const Belief& belief, double delta);

// Stage action for the pruning policy: over actions separating at least one
// alive pair, maximize the minimum separated-pair kld(i,j,a) / kappa_a.
// Lowest action index on ties; throws NoSeparatingActionError if no action
// separates any alive pair.
int phidelta_stage_action(const ObservationModel& model,
                          const std::vector<int>& alive,
                          const std::vector<double>& effective_costs);

// Multi-stage eliminate-by-LLR state. Pairwise accumulators persist across
// stages; a stage ends when some alive hypothesis beats every alive
// competitor separated from it under the stage action by the threshold
// log((H-1)/delta), discarding exactly those competitors.
class PhiDeltaState {
 public:
  PhiDeltaState(const ObservationModel& model,
                const std::vector<double>& effective_costs, double delta);

  const std::vector<int>& alive() const { return alive_; }
  int stage_action() const { return stage_action_; }
  double stage_threshold() const { return threshold_; }
  double pairwise_llr(int i, int j) const;

  bool done() const { return alive_.size() == 1; }
  int declared() const;  // valid once done()

  // Feed the outcome of applying the stage action; abstain (nullopt) leaves
  // the state unchanged.
  void update(const ObservationModel& model,
              const std::vector<double>& effective_costs, int action,
              std::optional<double> outcome);

 private:
  void maybe_prune(const ObservationModel& model,
                   const std::vector<double>& effective_costs);

  std::vector<int> alive_;
  std::vector<double> llr_;  // H x H antisymmetric accumulator
  int h_ = 0;
  int stage_action_ = -1;
  double threshold_ = 0.0;
};

}  // namespace casht
