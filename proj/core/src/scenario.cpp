#include "casht/scenario.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "casht/errors.hpp"

namespace casht {

namespace {

std::string trim(const std::string& s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return s.substr(b, e - b);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

double parse_double(const std::string& v, const std::string& key, int line) {
  try {
    std::size_t pos = 0;
    const double x = std::stod(v, &pos);
    while (pos < v.size() && std::isspace(static_cast<unsigned char>(v[pos])))
      ++pos;
    if (pos != v.size()) throw std::invalid_argument("trailing characters");
    return x;
  } catch (const std::exception&) {
    throw ConfigError("key '" + key + "': expected a number, got '" + v + "'",
                      line);
  }
}

std::int64_t parse_int(const std::string& v, const std::string& key, int line) {
  std::int64_t x = 0;
  const auto* b = v.data();
  const auto* e = v.data() + v.size();
  const auto res = std::from_chars(b, e, x);
  if (res.ec != std::errc{} || res.ptr != e)
    throw ConfigError("key '" + key + "': expected an integer, got '" + v + "'",
                      line);
  return x;
}

std::uint64_t parse_u64(const std::string& v, const std::string& key,
                        int line) {
  std::uint64_t x = 0;
  const auto res = std::from_chars(v.data(), v.data() + v.size(), x);
  if (res.ec != std::errc{} || res.ptr != v.data() + v.size())
    throw ConfigError(
        "key '" + key + "': expected an unsigned integer, got '" + v + "'",
        line);
  return x;
}

std::vector<double> parse_double_list(const std::string& v,
                                      const std::string& key, int line) {
  std::vector<double> out;
  for (const std::string& item : split(v, ','))
    out.push_back(parse_double(item, key, line));
  return out;
}

CostModel parse_cost_value(const std::string& v, const std::string& key,
                           int line) {
  std::stringstream ss(v);
  std::string family;
  ss >> family;
  std::vector<double> params;
  double x;
  while (ss >> x) params.push_back(x);
  if (!ss.eof())
    throw ConfigError("key '" + key + "': malformed cost spec '" + v + "'",
                      line);
  try {
    return make_cost_model(family, params);
  } catch (const std::exception& e) {
    throw ConfigError("key '" + key + "': " + e.what(), line);
  }
}

}  // namespace

void Scenario::validate() const {
  if (hypotheses < 2) throw ConfigError("key 'hypotheses': must be >= 2");
  if (actions < 1) throw ConfigError("key 'actions': must be >= 1");
  if (trials < 1) throw ConfigError("key 'trials': must be >= 1");
  if (max_steps < 1) throw ConfigError("key 'max_steps': must be >= 1");
  if (deltas.empty()) throw ConfigError("key 'delta': must not be empty");
  for (double d : deltas)
    if (!(d > 0.0 && d < 1.0))
      throw ConfigError("key 'delta': values must lie in (0,1)");
  if (!(rho_tilde > 0.5 && rho_tilde < 1.0))
    throw ConfigError("key 'rho_tilde': must lie in (0.5,1)");
  if (!(game_tol > 0.0)) throw ConfigError("key 'game_tol': must be positive");
  if (policies.empty()) throw ConfigError("key 'policies': must not be empty");
  for (std::size_t i = 0; i < policies.size(); ++i)
    for (std::size_t j = i + 1; j < policies.size(); ++j)
      if (policies[i] == policies[j])
        throw ConfigError("key 'policies': duplicate entry");

  if (deadline == DeadlineMode::fixed) {
    if (fixed_deadlines.size() != static_cast<std::size_t>(actions))
      throw ConfigError(
          "key 'deadline.fixed': need exactly one value per action");
    for (double t : fixed_deadlines)
      if (!(t > 0.0))
        throw ConfigError("key 'deadline.fixed': values must be positive");
  } else if (!fixed_deadlines.empty()) {
    throw ConfigError(
        "key 'deadline.fixed': only valid when deadline = fixed");
  }

  if (cost_rule == "pareto") {
    if (!(pareto_xmin_lo > 0.0) || !(pareto_xmin_lo <= pareto_xmin_hi))
      throw ConfigError("key 'cost.pareto.xmin': need 0 < lo <= hi");
    if (!(pareto_alpha_lo > 0.0) || !(pareto_alpha_lo <= pareto_alpha_hi))
      throw ConfigError("key 'cost.pareto.alpha': need 0 < lo <= hi");
  } else if (cost_rule == "loglogistic") {
    if (!(loglogistic_alpha_lo > 0.0) ||
        !(loglogistic_alpha_lo <= loglogistic_alpha_hi))
      throw ConfigError("key 'cost.loglogistic.alpha': need 0 < lo <= hi");
  } else if (cost_rule == "explicit") {
    if (explicit_costs.size() != static_cast<std::size_t>(actions))
      throw ConfigError(
          "key 'cost.action.*': explicit rule needs one model per action");
  } else {
    throw ConfigError("key 'cost.rule': unknown rule '" + cost_rule + "'");
  }
  if (cost_rule != "explicit" && !explicit_costs.empty())
    throw ConfigError(
        "key 'cost.action.*': only valid when cost.rule = explicit");
}

Scenario load_config(const std::string& text,
                     std::set<std::string>* explicit_keys) {
  Scenario s;
  std::set<std::string> seen;
  std::vector<std::pair<int, CostModel>> explicit_costs;

  std::stringstream ss(text);
  std::string raw;
  int line_no = 0;
  while (std::getline(ss, raw)) {
    ++line_no;
    const std::size_t hash = raw.find('#');
    if (hash != std::string::npos) raw.erase(hash);
    const std::string line = trim(raw);
    if (line.empty()) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("expected 'key = value', got '" + line + "'", line_no);
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError("empty key", line_no);
    if (value.empty())
      throw ConfigError("key '" + key + "': empty value", line_no);
    if (!seen.insert(key).second)
      throw ConfigError("key '" + key + "': duplicate", line_no);

    try {
      if (key == "hypotheses") {
        s.hypotheses = static_cast<int>(parse_int(value, key, line_no));
      } else if (key == "actions") {
        s.actions = static_cast<int>(parse_int(value, key, line_no));
      } else if (key == "instance_seed") {
        s.instance_seed = parse_u64(value, key, line_no);
      } else if (key == "seed") {
        s.seed = parse_u64(value, key, line_no);
      } else if (key == "trials") {
        s.trials = parse_int(value, key, line_no);
      } else if (key == "timing") {
        s.timing = timing_from_string(value);
      } else if (key == "deadline") {
        s.deadline = deadline_mode_from_string(value);
      } else if (key == "deadline.fixed") {
        s.fixed_deadlines = parse_double_list(value, key, line_no);
      } else if (key == "policies") {
        s.policies.clear();
        for (const std::string& p : split(value, ','))
          s.policies.push_back(policy_kind_from_string(p));
      } else if (key == "delta") {
        s.deltas = parse_double_list(value, key, line_no);
      } else if (key == "rho_tilde") {
        s.rho_tilde = parse_double(value, key, line_no);
      } else if (key == "game_tol") {
        s.game_tol = parse_double(value, key, line_no);
      } else if (key == "max_steps") {
        s.max_steps = parse_int(value, key, line_no);
      } else if (key == "cost.rule") {
        s.cost_rule = value;
      } else if (key == "cost.pareto.xmin") {
        const auto v = parse_double_list(value, key, line_no);
        if (v.size() != 2) throw ConfigError("key '" + key + "': need lo, hi", line_no);
        s.pareto_xmin_lo = v[0];
        s.pareto_xmin_hi = v[1];
      } else if (key == "cost.pareto.alpha") {
        const auto v = parse_double_list(value, key, line_no);
        if (v.size() != 2) throw ConfigError("key '" + key + "': need lo, hi", line_no);
        s.pareto_alpha_lo = v[0];
        s.pareto_alpha_hi = v[1];
      } else if (key == "cost.loglogistic.alpha") {
        const auto v = parse_double_list(value, key, line_no);
        if (v.size() != 2) throw ConfigError("key '" + key + "': need lo, hi", line_no);
        s.loglogistic_alpha_lo = v[0];
        s.loglogistic_alpha_hi = v[1];
      } else if (key.rfind("cost.action.", 0) == 0) {
        const std::string idx = key.substr(sizeof("cost.action.") - 1);
        const int a = static_cast<int>(parse_int(idx, key, line_no));
        explicit_costs.emplace_back(a, parse_cost_value(value, key, line_no));
      } else if (key == "output_dir") {
        s.output_dir = value;
      } else {
        throw ConfigError("unknown key '" + key + "'", line_no);
      }
    } catch (const ConfigError&) {
      throw;
    } catch (const std::exception& e) {
      throw ConfigError("key '" + key + "': " + e.what(), line_no);
    }
  }

  if (!explicit_costs.empty()) {
    std::sort(explicit_costs.begin(), explicit_costs.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    for (std::size_t i = 0; i < explicit_costs.size(); ++i)
      if (explicit_costs[i].first != static_cast<int>(i))
        throw ConfigError(
            "key 'cost.action.*': indices must cover 0..actions-1 exactly");
    for (auto& [idx, model] : explicit_costs)
      s.explicit_costs.push_back(std::move(model));
  }

  s.validate();
  if (explicit_keys) *explicit_keys = std::move(seen);
  return s;
}

namespace {

std::string fmt(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt_list(const std::vector<double>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += fmt(v[i]);
  }
  return out;
}

}  // namespace

std::string serialize_config(const Scenario& s) {
  std::string out;
  out += "hypotheses = " + std::to_string(s.hypotheses) + '\n';
  out += "actions = " + std::to_string(s.actions) + '\n';
  out += "instance_seed = " + std::to_string(s.instance_seed) + '\n';
  out += "seed = " + std::to_string(s.seed) + '\n';
  out += "trials = " + std::to_string(s.trials) + '\n';
  out += "timing = " + to_string(s.timing) + '\n';
  out += "deadline = " + to_string(s.deadline) + '\n';
  if (s.deadline == DeadlineMode::fixed)
    out += "deadline.fixed = " + fmt_list(s.fixed_deadlines) + '\n';
  out += "policies = ";
  for (std::size_t i = 0; i < s.policies.size(); ++i) {
    if (i) out += ", ";
    out += to_string(s.policies[i]);
  }
  out += '\n';
  out += "delta = " + fmt_list(s.deltas) + '\n';
  out += "rho_tilde = " + fmt(s.rho_tilde) + '\n';
  out += "game_tol = " + fmt(s.game_tol) + '\n';
  out += "max_steps = " + std::to_string(s.max_steps) + '\n';
  out += "cost.rule = " + s.cost_rule + '\n';
  if (s.cost_rule == "pareto") {
    out += "cost.pareto.xmin = " + fmt(s.pareto_xmin_lo) + ", " +
           fmt(s.pareto_xmin_hi) + '\n';
    out += "cost.pareto.alpha = " + fmt(s.pareto_alpha_lo) + ", " +
           fmt(s.pareto_alpha_hi) + '\n';
  } else if (s.cost_rule == "loglogistic") {
    out += "cost.loglogistic.alpha = " + fmt(s.loglogistic_alpha_lo) + ", " +
           fmt(s.loglogistic_alpha_hi) + '\n';
  } else {
    for (std::size_t a = 0; a < s.explicit_costs.size(); ++a)
      out += "cost.action." + std::to_string(a) + " = " +
             s.explicit_costs[a].name() + ' ' +
             s.explicit_costs[a].params_string() + '\n';
  }
  if (!s.output_dir.empty()) out += "output_dir = " + s.output_dir + '\n';
  return out;
}

}  // namespace casht
