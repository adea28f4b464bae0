#include <doctest.h>

#include <cmath>

#include "loctime/errors.hpp"
#include "loctime/green.hpp"
#include "loctime/level_sets.hpp"
#include "loctime/stats.hpp"

using namespace loctime;

namespace {
// Regularized upper incomplete gamma for integer k: e^{-x} sum_{j<k} x^j/j!.
double q_int(int k, double x) {
  double term = 1.0, sum = 0.0;
  for (int j = 0; j < k; ++j) {
    sum += term;
    term *= x / (j + 1);
  }
  return std::exp(-x) * sum;
}
}  // namespace

TEST_CASE("scale sequences") {
  const ScaleSequences s = scale_sequences(64, 0.5, 0.2, LevelKind::thick);
  const double L = std::log(64.0);
  CHECK(s.g == doctest::Approx(1.0 / (2 * kPi)));
  CHECK(s.t_N == doctest::Approx(2 * s.g * 0.5 * L * L));
  CHECK(s.a_N == doctest::Approx(2 * s.g * std::pow(std::sqrt(0.5) + 0.2, 2) * L * L));
  const ScaleSequences t = scale_sequences(64, 0.5, 0.2, LevelKind::thin);
  CHECK(t.a_N == doctest::Approx(2 * s.g * std::pow(std::sqrt(0.5) - 0.2, 2) * L * L));
  CHECK_THROWS_AS(scale_sequences(64, -1.0, 0.2, LevelKind::thick), ParameterError);
  CHECK_THROWS_AS(scale_sequences(64, 0.5, 0.0, LevelKind::thick), ParameterError);
  CHECK_NOTHROW(scale_sequences(64, 0.5, 0.0, LevelKind::thick, true));
  CHECK_THROWS_AS(scale_sequences(1, 0.5, 0.2, LevelKind::thick), ParameterError);
}

TEST_CASE("q_n satisfies n q_n = c sum_k k q_{n-k}") {
  for (double theta : {0.1, 0.7}) {
    const double c = kPi * theta;
    const QSequence q = q_sequence(theta, 40);
    CHECK(q.q[0] == 1.0);
    for (int n = 1; n <= 40; ++n) {
      double rhs = 0.0;
      for (int k = 1; k <= n; ++k) rhs += k * q.q[static_cast<std::size_t>(n - k)];
      CHECK(n * q.q[static_cast<std::size_t>(n)] == doctest::Approx(c * rhs).epsilon(1e-12));
    }
  }
}

TEST_CASE("q_n routes and generating function") {
  const QSequence a = q_sequence(0.3, 30), b = q_sequence_bessel(0.3, 30);
  for (std::size_t n = 0; n <= 30; ++n) CHECK(a.q[n] == doctest::Approx(b.q[n]).epsilon(1e-12));
  const QSequence big = q_sequence(0.2, 200);
  CHECK(q_generating_function(big, 2.0) == doctest::Approx(std::exp(4 * kPi * 0.2 / 2.0)).epsilon(1e-10));
  CHECK_THROWS(q_generating_function(q_sequence(0.2, 5), 1.0));
  CHECK_THROWS_AS(q_sequence_bessel(0.2, 500), ParameterError);
}

TEST_CASE("mu-tilde") {
  const MuTilde mu(0.2);
  CHECK(mu.laplace(1.0) == doctest::Approx(std::exp(4 * kPi * 0.2)).epsilon(1e-9));
  CHECK(mu.laplace_closed_form(2.0) == doctest::Approx(std::exp(4 * kPi * 0.2 / 2.0)));
  // density(0) = c'
  CHECK(mu.density(0.0) == doctest::Approx(4 * kPi * 0.2));
}

TEST_CASE("exponential resampling") {
  const std::vector<double> prof{0.5, 1.25};
  const auto out = resample_exponential_profile(prof, 3, 0);
  CHECK(out.size() == 2);
  CHECK(out == resample_exponential_profile(prof, 3, 0));
  std::vector<double> m(20000);
  for (std::size_t r = 0; r < m.size(); ++r) m[r] = resample_exponential_profile(prof, 3, r)[1];
  const Summary s = summarize(m);
  CHECK(std::abs(s.mean - 1.25) < 4 * s.se);
  // Gamma(5, 1/4): variance 5/16
  CHECK(s.variance == doctest::Approx(5.0 / 16.0).epsilon(0.05));
  const std::vector<double> one{1.0}, t{2.0};
  CHECK(resample_laplace_closed_form(one, t) == doctest::Approx(std::pow(1.5, -4.0)));
  const std::vector<double> bad{0.3};
  CHECK_THROWS_AS(resample_exponential_profile(bad, 1, 0), ParameterError);
}

TEST_CASE("gamma tail ratios against finite sums") {
  const GammaTailResult u = gamma_tail_inequality_check(10, 5, 3, GammaLemma::upper);
  CHECK(u.lhs_ratio == doctest::Approx(q_int(10, 18) / q_int(10, 15)).epsilon(1e-10));
  CHECK(u.rhs_bound == doctest::Approx(std::exp(-15.0 / 18.0)));
  CHECK(u.holds);
  const GammaTailResult l = gamma_tail_inequality_check(20, 5, 3, GammaLemma::lower);
  CHECK(l.lhs_ratio == doctest::Approx((1 - q_int(20, 12)) / (1 - q_int(20, 15))).epsilon(1e-10));
  CHECK(l.rhs_bound == doctest::Approx(std::exp(-0.8)));
  CHECK(l.holds);
  CHECK_THROWS_AS(gamma_tail_inequality_check(10, 1, 3, GammaLemma::upper), ParameterError);
  CHECK_THROWS_AS(gamma_tail_inequality_check(5, 3, 3, GammaLemma::lower), ParameterError);
}

TEST_CASE("level measures on a fixed field") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 8);
  const ScaleSequences sc = scale_sequences(8, 0.5, 0.0, LevelKind::avoided);
  const LocalTimeField f =
      run_walk(d, {d.rho(), TimeMode::discrete, static_cast<double>(steps_for_time(d, sc.t_N)), 2, 0});
  const PointMeasure m = extract_level_measure(f, d, sc, LevelKind::avoided, 1);
  std::size_t zeros = 0;
  for (std::uint32_t v = 0; v < d.size(); ++v) zeros += f.values[v] == 0.0;
  CHECK(m.atoms.size() == zeros);
  for (const auto& a : m.atoms) {
    CHECK(a.profile.size() == 9);
    CHECK(f.values[a.vertex] == 0.0);
  }
  // a field at the wrong horizon is refused
  const LocalTimeField g = run_walk(d, {d.rho(), TimeMode::discrete, 10, 2, 0});
  CHECK_THROWS_AS(extract_level_measure(g, d, sc, LevelKind::avoided), ParameterError);
}
