#include <doctest.h>

#include <cmath>

#include "loctime/rng.hpp"
#include "loctime/stats.hpp"

using namespace loctime;

TEST_CASE("summary of a small sample") {
  const std::vector<double> xs{1, 2, 3, 4};
  const Summary s = summarize(xs);
  CHECK(s.mean == doctest::Approx(2.5));
  CHECK(s.variance == doctest::Approx(5.0 / 3.0));
  CHECK(s.se == doctest::Approx(std::sqrt(5.0 / 12.0)));
  CHECK(quantile(xs, 0.5) == doctest::Approx(2.5));
  CHECK(quantile(xs, 0.0) == 1.0);
  CHECK(quantile(xs, 1.0) == 4.0);
}

TEST_CASE("kolmogorov distribution") {
  // Tabulated 5% and 1% critical values.
  CHECK(kolmogorov_q(1.3581) == doctest::Approx(0.05).epsilon(1e-3));
  CHECK(kolmogorov_q(1.6276) == doctest::Approx(0.01).epsilon(1e-3));
  CHECK(standard_normal_cdf(1.959963985) == doctest::Approx(0.975).epsilon(1e-9));
}

TEST_CASE("ks tests") {
  std::vector<double> a{0.1, 0.2, 0.3}, b{0.1, 0.2, 0.3};
  CHECK(ks_two_sample(a, b).statistic == 0.0);
  CHECK(ks_two_sample({0, 1, 2}, {10, 11, 12}).statistic == 1.0);

  RandomStream s(5, 0, StreamTag::experiment);
  std::vector<double> n(4000);
  for (auto& x : n) x = s.normal();
  const KsResult r = ks_one_sample(n, standard_normal_cdf);
  CHECK(r.p_value > 0.001);
  for (auto& x : n) x += 0.2;
  CHECK(ks_one_sample(n, standard_normal_cdf).p_value < 1e-6);
}
