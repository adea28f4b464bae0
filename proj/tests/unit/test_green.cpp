#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "loctime/errors.hpp"
#include "loctime/green.hpp"
#include "loctime/stats.hpp"
#include "loctime/walk.hpp"

using namespace loctime;

TEST_CASE("single and two vertex Green functions") {
  const LatticeDomain one = LatticeDomain::from_sites(1, {{0, 0}});
  CHECK(compute_green(one)(0, 0) == doctest::Approx(0.25).epsilon(1e-14));

  // (4I - A)^{-1} for two adjacent vertices is [[4,1],[1,4]]/15.
  const LatticeDomain two = LatticeDomain::from_sites(2, {{0, 0}, {1, 0}});
  const GreenOperator g = compute_green(two);
  CHECK(g(0, 0) == doctest::Approx(4.0 / 15.0).epsilon(1e-14));
  CHECK(g(0, 1) == doctest::Approx(1.0 / 15.0).epsilon(1e-14));
  CHECK(g.total() == doctest::Approx(10.0 / 15.0).epsilon(1e-14));
}

TEST_CASE("dense, column and row-sum paths agree") {
  const LatticeDomain d = build_lattice(DomainSpec::disk(1.0, LatticeRule::cells), 8);
  const GreenOperator g = compute_green(d);
  const GreenSolver s(d);
  CHECK(green_residual(d, g) < 1e-12);
  CHECK(symmetry_defect(g) < 1e-12);
  const Eigen::VectorXd c = s.column(7);
  CHECK((c - g.matrix().col(7)).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((s.row_sums() - g.row_sums()).cwiseAbs().maxCoeff() < 1e-12);
  // G is entrywise positive on a connected domain
  CHECK(g.matrix().minCoeff() > 0.0);
}

TEST_CASE("dense Green refuses large domains") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 20);
  GreenOptions opt;
  opt.max_dim = 100;
  CHECK_THROWS_AS(compute_green(d, opt), DimensionError);
}

TEST_CASE("binary round trip") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 5);
  const GreenOperator g = compute_green(d);
  const auto path = (std::filesystem::temp_directory_path() / "loctime_green_test.bin").string();
  write_green_binary(g, path);
  const GreenOperator h = read_green_binary(path);
  CHECK(h.matrix() == g.matrix());
  std::remove(path.c_str());
}

TEST_CASE("Kac moments on one vertex") {
  const LatticeDomain d = LatticeDomain::from_sites(1, {{0, 0}});
  const GreenOperator g = compute_green(d);
  const KacMoments k = kac_moments(g, d, 0, 1.0);
  // H_rho is a single Exp(1) holding time
  CHECK(k.second_moment_hitting == doctest::Approx(2.0));
  CHECK(k.var_fluctuation == doctest::Approx(0.5));

  std::vector<double> h2(50000);
  for (std::size_t r = 0; r < h2.size(); ++r) {
    const LocalTimeField f = run_walk(d, {0, TimeMode::boundary, 0.0, 11, r});
    h2[r] = f.elapsed * f.elapsed;
  }
  const Summary s = summarize(h2);
  CHECK(std::abs(s.mean - 2.0) < 4 * s.se);
}

TEST_CASE("potential kernel closed forms") {
  PotentialKernel a(2048, 4);
  CHECK(a({0, 0}) == 0.0);
  CHECK(a({1, 0}) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(a({0, -1}) == doctest::Approx(0.25).epsilon(1e-6));
  CHECK(a({1, 1}) == doctest::Approx(1.0 / kPi).epsilon(1e-6));
  CHECK(a({2, 0}) == doctest::Approx(1.0 - 2.0 / kPi).epsilon(1e-6));
  CHECK(a({2, 2}) == doctest::Approx(4.0 / (3.0 * kPi)).epsilon(1e-6));
  CHECK_THROWS_AS(PotentialKernel(32, 4), ParameterError);
}
