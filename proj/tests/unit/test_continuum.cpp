#include <doctest.h>

#include <cmath>

#include "loctime/continuum.hpp"
#include "loctime/errors.hpp"

using namespace loctime;

TEST_CASE("sigma^2 by dense and sparse routes") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 12);
  const GreenOperator g = compute_green(d);
  const double n = static_cast<double>(d.size());
  CHECK(sigma_D2(g, d) == doctest::Approx(g.matrix().sum() / (n * n)).epsilon(1e-13));
  CHECK(sigma_D2(d) == doctest::Approx(sigma_D2(g, d)).epsilon(1e-12));
}

TEST_CASE("d-function on the lattice") {
  const LatticeDomain d = build_lattice(DomainSpec::disk(0.5, LatticeRule::cells), 16);
  const ContinuumGrid grid = d_function_green(d);
  CHECK(grid.values.size() == d.size());
  double mean = 0.0;
  for (double v : grid.values) mean += v;
  // the lattice d-function averages to one by construction
  CHECK(mean / static_cast<double>(d.size()) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(grid.min_value() > 0.0);
  CHECK(grid.integral() == doctest::Approx(static_cast<double>(d.size()) / (16.0 * 16.0)).epsilon(1e-12));
}

TEST_CASE("poisson route on a coarse grid") {
  const DomainSpec spec = DomainSpec::unit_square(LatticeRule::cells);
  const ContinuumGrid p = d_function_poisson(spec, 32, 0.03);
  CHECK(poisson_residual(p, spec) < 1e-9);
  CHECK(p.min_value() > 0.0);
  // symmetric under x -> 1 - x
  CHECK(interpolate_poisson(p, 0.3, 0.4) == doctest::Approx(interpolate_poisson(p, 0.7, 0.4)).epsilon(1e-10));
  CHECK(interpolate_poisson(p, 0.0, 0.5) == doctest::Approx(0.0));
  // the centre of -Lap u = 1 on the unit square is 0.0736713...
  CHECK(interpolate_poisson(p, 0.5, 0.5) * 0.03 == doctest::Approx(0.0736713).epsilon(5e-3));
  CHECK_THROWS_AS(d_function_poisson(DomainSpec::disk(0.5), 32, 0.03), UnsupportedError);
}

TEST_CASE("continuum Green estimate") {
  const DomainSpec spec = DomainSpec::unit_square(LatticeRule::cells);
  ContinuumGreenEstimator est(spec);
  const double a = est({0.3, 0.5}, {0.7, 0.5}, 32);
  const double b = est({0.3, 0.5}, {0.7, 0.5}, 64);
  CHECK(a > 0.0);
  // off the diagonal the lattice Green function converges
  CHECK(std::abs(a - b) < 0.05 * b);
  CHECK(est({0.7, 0.5}, {0.3, 0.5}, 64) == doctest::Approx(b));
  CHECK_THROWS(est({0.3, 0.5}, {0.3, 0.5}, 32));
}
