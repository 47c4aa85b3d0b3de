#include "casht/observation.hpp"

#include <cmath>
#include <cstdio>
#include <istream>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace casht {

namespace {
// 0.5 * log(2 pi)
const double kHalfLog2Pi = 0.5 * std::log(2.0 * std::numbers::pi);
}  // namespace

ObservationModel::ObservationModel(
    const std::vector<std::vector<double>>& means) {
  h_ = static_cast<int>(means.size());
  if (h_ < 2)
    throw std::invalid_argument("ObservationModel: need at least 2 hypotheses");
  a_ = static_cast<int>(means.front().size());
  if (a_ < 1)
    throw std::invalid_argument("ObservationModel: need at least 1 action");
  means_.reserve(static_cast<std::size_t>(h_) * a_);
  for (const auto& row : means) {
    if (static_cast<int>(row.size()) != a_)
      throw std::invalid_argument("ObservationModel: ragged mean matrix");
    for (double m : row) {
      if (!std::isfinite(m))
        throw std::invalid_argument("ObservationModel: non-finite mean entry");
      means_.push_back(m);
    }
  }
}

void ObservationModel::check(int hypothesis, int action) const {
  if (hypothesis < 0 || hypothesis >= h_)
    throw std::out_of_range("ObservationModel: hypothesis index out of range");
  if (action < 0 || action >= a_)
    throw std::out_of_range("ObservationModel: action index out of range");
}

double ObservationModel::mean(int hypothesis, int action) const {
  check(hypothesis, action);
  return means_[static_cast<std::size_t>(hypothesis) * a_ + action];
}

double ObservationModel::log_density(int hypothesis, int action,
                                     double x) const {
  const double d = x - mean(hypothesis, action);
  return -0.5 * d * d - kHalfLog2Pi;
}

double ObservationModel::llr(int i, int j, int action, double x) const {
  const double mi = mean(i, action);
  const double mj = mean(j, action);
  return (mi - mj) * x - 0.5 * (mi * mi - mj * mj);
}

double ObservationModel::kld(int i, int j, int action) const {
  const double d = mean(i, action) - mean(j, action);
  return 0.5 * d * d;
}

double ObservationModel::sample(int hypothesis, int action,
                                RandomStream& stream) const {
  return mean(hypothesis, action) + stream.normal();
}

AssumptionReport ObservationModel::validate_assumptions() const {
  AssumptionReport report;
  // Unit-variance Gaussians: kld is exactly 0 (equal means) or positive, so
  // the separation assumption cannot fail.
  report.separation_ok = true;
  report.validity_ok = true;

  // Every distinct pair needs a separating action.
  for (int i = 0; i < h_; ++i) {
    for (int j = i + 1; j < h_; ++j) {
      bool separated = false;
      for (int a = 0; a < a_; ++a) {
        if (kld(i, j, a) > 0.0) {
          separated = true;
        } else {
          report.zero_kld_pairs.push_back({i, j, a});
        }
      }
      if (!separated) report.validity_ok = false;
    }
  }
  // No action may have all-zero divergences.
  for (int a = 0; a < a_; ++a) {
    bool useful = false;
    for (int i = 0; i < h_ && !useful; ++i)
      for (int j = i + 1; j < h_; ++j)
        if (kld(i, j, a) > 0.0) {
          useful = true;
          break;
        }
    if (!useful) report.validity_ok = false;
  }

  double bound = 0.0;
  for (int a = 0; a < a_; ++a)
    for (int i = 0; i < h_; ++i)
      for (int j = 0; j < h_; ++j) {
        if (i == j) continue;
        const double d2 = 2.0 * kld(i, j, a);  // (mu_i - mu_j)^2
        bound = std::max(bound, d2 * (1.0 + 0.25 * d2));
      }
  report.llr_second_moment_bound = bound;
  return report;
}

void ObservationModel::to_csv(std::ostream& out) const {
  char buf[40];
  for (int i = 0; i < h_; ++i) {
    for (int a = 0; a < a_; ++a) {
      std::snprintf(buf, sizeof buf, "%.17g", mean(i, a));
      if (a) out << ',';
      out << buf;
    }
    out << '\n';
  }
}

ObservationModel ObservationModel::from_csv(std::istream& in) {
  std::vector<std::vector<double>> rows;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<double> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(std::stod(cell));
    rows.push_back(std::move(row));
  }
  return ObservationModel(rows);
}

ObservationModel generate_benchmark_instance(int hypotheses, int actions,
                                             RandomStream& stream) {
  if (hypotheses < 2)
    throw std::invalid_argument("generate_benchmark_instance: need H >= 2");
  if (actions < 1)
    throw std::invalid_argument("generate_benchmark_instance: need >= 1 action");
  std::vector<std::vector<double>> means(
      hypotheses, std::vector<double>(actions, 0.0));
  for (int i = 0; i < hypotheses; ++i)
    for (int a = 0; a < actions; ++a) {
      const double base = stream.uniform01() < 0.5 ? 2.0 : 8.0;
      means[i][a] = base + stream.uniform(-0.1, 0.1);
    }
  // First and last hypotheses coincide everywhere but the final action,
  // where they are mirrored around 5.
  const int last = hypotheses - 1;
  for (int a = 0; a + 1 < actions; ++a) means[0][a] = means[last][a];
  means[0][actions - 1] = 10.0 - means[last][actions - 1];
  return ObservationModel(means);
}

}  // namespace casht
