#include <doctest.h>

#include <cmath>

#include "loctime/errors.hpp"
#include "loctime/gaussian_fields.hpp"
#include "loctime/green.hpp"

using namespace loctime;

TEST_CASE("empirical covariance of two-vertex samples") {
  const LatticeDomain d = LatticeDomain::from_sites(2, {{0, 0}, {1, 0}});
  const GreenOperator g = compute_green(d);
  const auto samples = sample_dgff(g, 3, 40000);
  double s00 = 0, s01 = 0, s11 = 0;
  for (const auto& s : samples) {
    s00 += s.values[0] * s.values[0];
    s01 += s.values[0] * s.values[1];
    s11 += s.values[1] * s.values[1];
  }
  const double n = static_cast<double>(samples.size());
  // Var of an empirical second moment of a Gaussian is 2 sigma^4 / n at most
  // here; allow 5 sigma.
  const double tol = 5 * std::sqrt(2.0 / n) * (4.0 / 15.0);
  CHECK(std::abs(s00 / n - 4.0 / 15.0) < tol);
  CHECK(std::abs(s11 / n - 4.0 / 15.0) < tol);
  CHECK(std::abs(s01 / n - 1.0 / 15.0) < tol);
}

TEST_CASE("samples are reproducible per replicate") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 6);
  const DgffSampler s(compute_green(d));
  CHECK(s.sample(9, 4).values == s.sample(9, 4).values);
  CHECK(s.sample(9, 4).values != s.sample(9, 5).values);
  const Eigen::MatrixXd& c = s.factor();
  CHECK(((c * c.transpose()) - compute_green(d).matrix()).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("zero-average decomposition") {
  const LatticeDomain d = build_lattice(DomainSpec::disk(1.0, LatticeRule::cells), 6);
  const GreenOperator g = compute_green(d);
  const ZeroAverageProjector p(g);
  const double n = static_cast<double>(d.size());
  // d_N = Cov(h, Y) / Var Y = n G1 / (1'G1)
  for (std::uint32_t x = 0; x < d.size(); ++x) CHECK(p.dN()[x] == doctest::Approx(n * g.row_sums()[x] / g.total()));
  CHECK(p.var_average() == doctest::Approx(g.total() / (n * n)));

  const FieldSample h = DgffSampler(g).sample(1, 0);
  const ZeroAverageSplit z = p.decompose(h);
  double sum = 0.0, mean = 0.0;
  for (double v : h.values) mean += v / n;
  CHECK(z.Y == doctest::Approx(mean));
  for (std::uint32_t x = 0; x < d.size(); ++x) {
    sum += z.hat.values[x];
    CHECK(z.hat.values[x] + z.dN[x] * z.Y == doctest::Approx(h.values[x]));
  }
  CHECK(std::abs(sum) < 1e-10);
  CHECK(z.hat.zero_average);
}

TEST_CASE("local covariance windows") {
  PotentialKernel a(512, 6);
  const CovarianceWindow w = local_covariance(CovarianceKind::pinned, 2, a);
  CHECK(w.offsets.size() == 25);
  CHECK(w.offsets[w.origin()] == Site{0, 0});
  // pinned at the origin: C(x,x) = 2 a(x)
  CHECK(w.matrix(w.index_of({1, 0}), w.index_of({1, 0})) == doctest::Approx(2 * a({1, 0})));
  const PinnedRelationReport r = verify_pinned_relation(2, a);
  CHECK(r.max_identity_error < 1e-12);
  CHECK(r.min_eigenvalue > -1e-8);
  CHECK_THROWS_AS(local_covariance(CovarianceKind::tilde, 0, a), ParameterError);
}
