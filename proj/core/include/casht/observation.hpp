#pragma once

#include <array>
#include <iosfwd>
#include <vector>

#include "casht/random.hpp"

namespace casht {

struct AssumptionReport {
  bool separation_ok = false;
  bool validity_ok = false;
  // max over (i, j, a) of E_{f_i}[llr(i,j,a,X)^2] = D^2 (1 + D^2/4) with
  // D = mu_i - mu_j; the finite-LLR-variance constant.
  double llr_second_moment_bound = 0.0;
  std::vector<std::array<int, 3>> zero_kld_pairs;  // (i, j, a) with kld = 0
};

// Per-hypothesis, per-action unit-variance Gaussian observation means.
class ObservationModel {
 public:
  // means[i][a]; at least 2 hypotheses, 1 action, all entries finite.
  explicit ObservationModel(const std::vector<std::vector<double>>& means);

  int hypothesis_count() const { return h_; }
  int action_count() const { return a_; }
  double mean(int hypothesis, int action) const;

  double log_density(int hypothesis, int action, double x) const;
  // log f_i^a(x) - log f_j^a(x) = (mu_i - mu_j) x - (mu_i^2 - mu_j^2)/2
  double llr(int i, int j, int action, double x) const;
  // (mu_i - mu_j)^2 / 2
  double kld(int i, int j, int action) const;

  double sample(int hypothesis, int action, RandomStream& stream) const;

  AssumptionReport validate_assumptions() const;

  // Headerless CSV, H rows x A columns, full double precision.
  void to_csv(std::ostream& out) const;
  static ObservationModel from_csv(std::istream& in);

  bool operator==(const ObservationModel&) const = default;

 private:
  void check(int hypothesis, int action) const;

  int h_ = 0;
  int a_ = 0;
  std::vector<double> means_;  // row-major H x A
};

// Benchmark instance: each cell's base mean is 2 or 8 (equiprobable), then
// perturbed once with Unif[-0.1, 0.1]; hypothesis 0 copies hypothesis H-1 on
// every action but the last, where mu_0 = 10 - mu_{H-1}. Deterministic in
// the stream.
ObservationModel generate_benchmark_instance(int hypotheses, int actions,
                                             RandomStream& stream);

}  // namespace casht
