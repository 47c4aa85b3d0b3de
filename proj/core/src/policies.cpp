#include "casht/policies.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "casht/errors.hpp"
#include "casht/numerics.hpp"

namespace casht {

Belief::Belief(int hypotheses) {
  if (hypotheses < 2)
    throw std::invalid_argument("Belief: need at least 2 hypotheses");
  log_post_.assign(hypotheses, -std::log(static_cast<double>(hypotheses)));
}

void Belief::update(const ObservationModel& model, int action, double x) {
  if (model.hypothesis_count() != size())
    throw std::invalid_argument("Belief: hypothesis count mismatch");
  for (int i = 0; i < size(); ++i)
    log_post_[i] += model.log_density(i, action, x);
  normalize();
}

void Belief::normalize() {
  const double m = *std::max_element(log_post_.begin(), log_post_.end());
  double z = 0.0;
  for (double lp : log_post_) z += std::exp(lp - m);
  const double logz = m + std::log(z);
  for (double& lp : log_post_) lp -= logz;
}

std::vector<double> Belief::posterior() const {
  std::vector<double> p(log_post_.size());
  for (std::size_t i = 0; i < p.size(); ++i) p[i] = std::exp(log_post_[i]);
  return p;
}

double Belief::posterior_of(int hypothesis) const {
  return std::exp(log_post_.at(hypothesis));
}

double Belief::max_posterior() const {
  return std::exp(*std::max_element(log_post_.begin(), log_post_.end()));
}

int Belief::argmax() const {
  return static_cast<int>(std::distance(
      log_post_.begin(),
      std::max_element(log_post_.begin(), log_post_.end())));
}

std::string to_string(PolicyKind kind) {
  switch (kind) {
    case PolicyKind::ca_chernoff:
      return "ca_chernoff";
    case PolicyKind::ca_nj1:
      return "ca_nj1";
    case PolicyKind::ca_phidelta:
      return "ca_phidelta";
  }
  return "?";
}

PolicyKind policy_kind_from_string(const std::string& s) {
  if (s == "ca_chernoff") return PolicyKind::ca_chernoff;
  if (s == "ca_nj1") return PolicyKind::ca_nj1;
  if (s == "ca_phidelta") return PolicyKind::ca_phidelta;
  throw std::invalid_argument("unknown policy '" + s + "'");
}

void PolicyConfig::validate(int action_count) const {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("PolicyConfig: delta must lie in (0,1)");
  if (kind == PolicyKind::ca_nj1 && !(rho_tilde > 0.5 && rho_tilde < 1.0))
    throw std::invalid_argument("PolicyConfig: rho_tilde must lie in (0.5,1)");
  if (!(game_tol > 0.0))
    throw std::invalid_argument("PolicyConfig: game_tol must be positive");
  if (static_cast<int>(effective_costs.size()) != action_count)
    throw std::invalid_argument(
        "PolicyConfig: effective cost count does not match action count");
  for (double k : effective_costs)
    if (!(k > 0.0) || !std::isfinite(k))
      throw std::invalid_argument(
          "PolicyConfig: effective costs must be finite and positive");
}

std::vector<double> chernoff_action_weights(
    const ObservationModel& model, int believed,
    const std::vector<double>& effective_costs, double game_tol) {
  const int h = model.hypothesis_count();
  const int acts = model.action_count();
  if (believed < 0 || believed >= h)
    throw std::out_of_range("chernoff_action_weights: believed out of range");

  RatioGame game;
  game.costs = effective_costs;
  game.tol = game_tol;
  for (int j = 0; j < h; ++j) {
    if (j == believed) continue;
    std::vector<double> row(acts);
    bool nonzero = false;
    for (int a = 0; a < acts; ++a) {
      row[a] = model.kld(believed, j, a);
      nonzero = nonzero || row[a] > 0.0;
    }
    if (nonzero) game.gain_rows.push_back(std::move(row));
  }
  if (game.gain_rows.empty())
    throw DegenerateGameError(
        "chernoff_action_weights: believed hypothesis is indistinguishable "
        "from every competitor");
  return solve_ratio_game(game).weights;
}

std::vector<double> nj1_exploration_weights(
    const ObservationModel& model, const std::vector<double>& effective_costs,
    double game_tol) {
  const int h = model.hypothesis_count();
  const int acts = model.action_count();
  RatioGame game;
  game.costs = effective_costs;
  game.tol = game_tol;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < h; ++j) {
      if (i == j) continue;
      std::vector<double> row(acts);
      bool nonzero = false;
      for (int a = 0; a < acts; ++a) {
        row[a] = model.kld(i, j, a);
        nonzero = nonzero || row[a] > 0.0;
      }
      if (nonzero) game.gain_rows.push_back(std::move(row));
    }
  if (game.gain_rows.empty())
    throw DegenerateGameError(
        "nj1_exploration_weights: no hypothesis pair is separated by any "
        "action");
  return solve_ratio_game(game).weights;
}

std::vector<double> nj1_action_weights(
    const ObservationModel& model, const Belief& belief,
    const std::vector<double>& effective_costs, double rho_tilde,
    double game_tol) {
  if (belief.max_posterior() <= rho_tilde)
    return nj1_exploration_weights(model, effective_costs, game_tol);
  return chernoff_action_weights(model, belief.argmax(), effective_costs,
                                 game_tol);
}

std::optional<int> chernoff_stop(const Belief& belief, double delta) {
  if (belief.max_posterior() > 1.0 - delta) return belief.argmax();
  return std::nullopt;
}

int phidelta_stage_action(const ObservationModel& model,
                          const std::vector<int>& alive,
                          const std::vector<double>& effective_costs) {
  if (alive.size() < 2)
    throw std::invalid_argument("phidelta_stage_action: need >= 2 alive");
  const int acts = model.action_count();
  int best_action = -1;
  double best_ratio = -1.0;
  for (int a = 0; a < acts; ++a) {
    double worst = std::numeric_limits<double>::infinity();
    bool separates = false;
    for (std::size_t p = 0; p < alive.size(); ++p)
      for (std::size_t q = p + 1; q < alive.size(); ++q) {
        const double d = model.kld(alive[p], alive[q], a);
        if (d > 0.0) {
          separates = true;
          worst = std::min(worst, d / effective_costs[a]);
        }
      }
    if (separates && worst > best_ratio) {
      best_ratio = worst;
      best_action = a;
    }
  }
  if (best_action < 0)
    throw NoSeparatingActionError(
        "phidelta_stage_action: no action separates any alive pair");
  return best_action;
}

PhiDeltaState::PhiDeltaState(const ObservationModel& model,
                             const std::vector<double>& effective_costs,
                             double delta) {
  if (!(delta > 0.0 && delta < 1.0))
    throw std::invalid_argument("PhiDeltaState: delta must lie in (0,1)");
  h_ = model.hypothesis_count();
  alive_.resize(h_);
  for (int i = 0; i < h_; ++i) alive_[i] = i;
  llr_.assign(static_cast<std::size_t>(h_) * h_, 0.0);
  threshold_ = std::log((h_ - 1) / delta);
  stage_action_ = phidelta_stage_action(model, alive_, effective_costs);
}

double PhiDeltaState::pairwise_llr(int i, int j) const {
  return llr_[static_cast<std::size_t>(i) * h_ + j];
}

int PhiDeltaState::declared() const {
  if (!done())
    throw std::logic_error("PhiDeltaState: declaration requested before done");
  return alive_.front();
}

void PhiDeltaState::update(const ObservationModel& model,
                           const std::vector<double>& effective_costs,
                           int action, std::optional<double> outcome) {
  if (done()) return;
  if (!outcome.has_value()) return;  // abstain: no evidence
  const double x = *outcome;
  for (std::size_t p = 0; p < alive_.size(); ++p)
    for (std::size_t q = 0; q < alive_.size(); ++q) {
      if (p == q) continue;
      const int i = alive_[p];
      const int j = alive_[q];
      llr_[static_cast<std::size_t>(i) * h_ + j] += model.llr(i, j, action, x);
    }
  maybe_prune(model, effective_costs);
}

void PhiDeltaState::maybe_prune(const ObservationModel& model,
                                const std::vector<double>& effective_costs) {
  // Stage winner: beats, by the threshold, every alive competitor the stage
  // action separates from it (at least one such competitor must exist).
  int winner = -1;
  std::vector<int> beaten;
  for (int i : alive_) {
    std::vector<int> separated;
    for (int j : alive_) {
      if (j == i) continue;
      if (model.kld(i, j, stage_action_) > 0.0) separated.push_back(j);
    }
    if (separated.empty()) continue;
    bool wins = true;
    for (int j : separated)
      if (pairwise_llr(i, j) < threshold_) {
        wins = false;
        break;
      }
    if (wins) {
      winner = i;
      beaten = std::move(separated);
      break;  // lowest alive index wins ties
    }
  }
  if (winner < 0) return;

  std::vector<int> next;
  next.reserve(alive_.size());
  for (int i : alive_) {
    if (std::find(beaten.begin(), beaten.end(), i) == beaten.end())
      next.push_back(i);
  }
  alive_ = std::move(next);
  if (!done())
    stage_action_ = phidelta_stage_action(model, alive_, effective_costs);
}

}  // namespace casht
