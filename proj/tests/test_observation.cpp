#include <doctest.h>

#include <cmath>
#include <cstdint>
#include <sstream>
#include <vector>

#include "casht/observation.hpp"
#include "casht/random.hpp"

using namespace casht;

TEST_SUITE("observation") {

TEST_CASE("construction and validation") {
  CHECK_NOTHROW(ObservationModel({{0.0}, {1.0}}));
  CHECK_THROWS_AS(ObservationModel({{0.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ObservationModel({{0.0}, {1.0, 2.0}}), std::invalid_argument);
  CHECK_THROWS_AS(ObservationModel({{0.0}, {std::nan("")}}),
                  std::invalid_argument);
  const ObservationModel m({{0.0, 1.0}, {2.0, 3.0}});
  CHECK(m.hypothesis_count() == 2);
  CHECK(m.action_count() == 2);
  CHECK_THROWS_AS(m.mean(2, 0), std::out_of_range);
  CHECK_THROWS_AS(m.kld(0, 1, 5), std::out_of_range);
}

TEST_CASE("log density pinned values") {
  const ObservationModel m({{0.0, 2.0}, {1.0, 2.0}});
  CHECK(m.log_density(0, 0, 0.0) == doctest::Approx(-0.9189385332046727));
  CHECK(m.log_density(0, 1, 2.0) == doctest::Approx(-0.9189385332046727));
  CHECK(m.log_density(0, 1, 0.0) == doctest::Approx(-2.9189385332046727));
}

TEST_CASE("llr pinned values and identity with log densities") {
  const ObservationModel m({{2.0, 0.0}, {8.0, 1.0}});
  CHECK(m.llr(0, 1, 0, 5.0) == doctest::Approx(0.0));
  CHECK(m.llr(0, 0, 0, 3.7) == 0.0);
  CHECK(m.llr(0, 1, 0, 2.0) == doctest::Approx(18.0));

  RandomStream rng = rng_stream(2, 0);
  for (int i = 0; i < 1000; ++i) {
    const double x = rng.uniform(-10.0, 10.0);
    const double direct = m.llr(0, 1, 0, x);
    const double via_densities = m.log_density(0, 0, x) - m.log_density(1, 0, x);
    CHECK(direct == doctest::Approx(via_densities).epsilon(1e-12));
  }
}

TEST_CASE("kld pinned values and symmetry for equal variances") {
  const ObservationModel m({{2.0, 2.05}, {8.0, 7.95}});
  CHECK(m.kld(0, 1, 0) == doctest::Approx(18.0));
  CHECK(m.kld(0, 0, 0) == 0.0);
  CHECK(m.kld(0, 1, 1) == doctest::Approx(17.405));
  CHECK(m.kld(0, 1, 0) == m.kld(1, 0, 0));
  CHECK(m.kld(0, 1, 1) == m.kld(1, 0, 1));
}

TEST_CASE("llr mean under the numerator hypothesis equals the kld") {
  const ObservationModel m({{2.0}, {8.0}});
  RandomStream rng = rng_stream(2, 1);
  const int n = 1000000;
  double s = 0.0, s2 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = m.sample(0, 0, rng);
    const double l = m.llr(0, 1, 0, x);
    s += l;
    s2 += l * l;
  }
  const double mean = s / n;
  const double se = std::sqrt((s2 / n - mean * mean) / n);
  CHECK(std::fabs(mean - m.kld(0, 1, 0)) <= 4.0 * se);
}

TEST_CASE("assumption report") {
  {
    const ObservationModel m({{0.0}, {1.0}});
    const auto r = m.validate_assumptions();
    CHECK(r.separation_ok);
    CHECK(r.validity_ok);
    CHECK(r.llr_second_moment_bound == doctest::Approx(1.25));
    CHECK(r.zero_kld_pairs.empty());
  }
  {
    // An action with all-equal means is meaningless.
    const ObservationModel m({{0.0, 1.0}, {0.0, 2.0}});
    const auto r = m.validate_assumptions();
    CHECK_FALSE(r.validity_ok);
    CHECK(r.zero_kld_pairs.size() == 1);
  }
  {
    // A pair with no separating action.
    const ObservationModel m({{1.0, 2.0}, {1.0, 2.0}, {3.0, 0.0}});
    CHECK_FALSE(m.validate_assumptions().validity_ok);
  }
}

TEST_CASE("benchmark instance: structure, determinism and bounds") {
  RandomStream s1 = rng_stream(17, 0);
  RandomStream s2 = rng_stream(17, 0);
  const ObservationModel a = generate_benchmark_instance(32, 16, s1);
  const ObservationModel b = generate_benchmark_instance(32, 16, s2);
  CHECK(a == b);

  for (int act = 0; act < 15; ++act) CHECK(a.mean(0, act) == a.mean(31, act));
  CHECK(a.mean(0, 15) == doctest::Approx(10.0 - a.mean(31, 15)).epsilon(1e-15));

  for (int i = 0; i < 32; ++i)
    for (int act = 0; act < 16; ++act) {
      const double mu = a.mean(i, act);
      const bool near2 = std::fabs(mu - 2.0) <= 0.1 + 1e-12;
      const bool near8 = std::fabs(mu - 8.0) <= 0.1 + 1e-12;
      CHECK((near2 || near8));
    }

  const auto report = a.validate_assumptions();
  CHECK(report.separation_ok);
  CHECK(report.validity_ok);
  const double worst = 6.2 * 6.2 * (1.0 + 6.2 * 6.2 / 4.0);
  for (int seed : {1, 2, 3, 9, 77}) {
    RandomStream s = rng_stream(static_cast<std::uint64_t>(seed), 0);
    const auto inst = generate_benchmark_instance(32, 16, s);
    const auto r = inst.validate_assumptions();
    CHECK(r.validity_ok);
    CHECK(r.llr_second_moment_bound <= worst);
  }
}

TEST_CASE("nominal unperturbed bound stays under the finite-variance constant") {
  // Base means only ({2,8} and the mirrored final action): the largest mean
  // gap is 6, so the bound is 36 * (1 + 9) = 360 < 361.
  std::vector<std::vector<double>> means(32, std::vector<double>(16, 2.0));
  for (int i = 0; i < 32; ++i)
    for (int a = 0; a < 16; ++a) means[i][a] = (i + a) % 2 == 0 ? 2.0 : 8.0;
  for (int a = 0; a < 15; ++a) means[0][a] = means[31][a];
  means[0][15] = 10.0 - means[31][15];
  const ObservationModel m(means);
  const auto r = m.validate_assumptions();
  CHECK(r.llr_second_moment_bound <= 360.0);
  CHECK(r.llr_second_moment_bound < 361.0);
}

TEST_CASE("csv round trip") {
  RandomStream s = rng_stream(5, 0);
  const ObservationModel a = generate_benchmark_instance(8, 4, s);
  std::stringstream buf;
  a.to_csv(buf);
  const ObservationModel b = ObservationModel::from_csv(buf);
  CHECK(a == b);
}

}  // TEST_SUITE
