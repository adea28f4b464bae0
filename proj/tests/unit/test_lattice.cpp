#include <doctest.h>

#include <cmath>

#include "loctime/errors.hpp"
#include "loctime/lattice_domain.hpp"

using namespace loctime;

TEST_CASE("unit square under the cells rule is the N x N box") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 6);
  CHECK(d.size() == 36);
  CHECK(d.deg_rho() == 24);
  CHECK(d.deg_total() == 168);
  CHECK(d.connected());
  CHECK(d.index_of({0, 0}).has_value());
  CHECK(d.index_of({5, 5}).has_value());
  CHECK_FALSE(d.index_of({6, 0}).has_value());
  // corner has two exits, edge one, interior none
  CHECK(d.boundary_edges(*d.index_of({0, 0})) == 2);
  CHECK(d.boundary_edges(*d.index_of({0, 3})) == 1);
  CHECK(d.boundary_edges(*d.index_of({2, 3})) == 0);
}

TEST_CASE("unit square under the margin rule") {
  // x/9 must sit strictly more than 1/9 from the complement: i, j in 2..7.
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(), 9);
  CHECK(d.size() == 36);
  CHECK_FALSE(d.index_of({1, 4}).has_value());
  CHECK(d.index_of({2, 2}).has_value());
  CHECK(d.index_of({7, 7}).has_value());
}

TEST_CASE("disk site count matches brute force") {
  const int N = 20;
  const LatticeDomain d = build_lattice(DomainSpec::disk(1.0), N);
  // margin rule on a disk: sup-distance to the complement of the unit disk
  // from (x,y) is the largest s with (|x|+s)^2 + (|y|+s)^2 <= 1.
  std::size_t count = 0;
  for (int i = -N; i <= N; ++i) {
    for (int j = -N; j <= N; ++j) {
      const double x = std::abs(i / double(N)), y = std::abs(j / double(N));
      if (x * x + y * y >= 1.0) continue;
      const double b = x + y, c = x * x + y * y - 1.0;
      const double s = (-b + std::sqrt(b * b - 2.0 * c)) / 2.0;
      if (s > 1.0 / N + 1e-12) ++count;
    }
  }
  CHECK(d.size() == count);
  CHECK(d.deg_total() == 4 * static_cast<std::int64_t>(d.size()) + d.deg_rho());
}

TEST_CASE("polygon square equals the unit square") {
  const auto poly = DomainSpec::make_polygon({{0, 0}, {1, 0}, {1, 1}, {0, 1}}, LatticeRule::cells);
  const LatticeDomain a = build_lattice(poly, 10);
  const LatticeDomain b = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 10);
  REQUIRE(a.size() == b.size());
  for (std::uint32_t v = 0; v < a.size(); ++v) CHECK(a.site(v) == b.site(v));
  CHECK(poly.area() == doctest::Approx(1.0));
}

TEST_CASE("bad shapes are rejected") {
  CHECK_THROWS_AS(DomainSpec::make_polygon({{0, 0}, {1, 1}, {1, 0}, {0, 1}}), ParameterError);
  CHECK_THROWS_AS(DomainSpec::make_polygon({{0, 0}, {1, 0}}), ParameterError);
  CHECK_THROWS_AS(DomainSpec::disk(-1.0), ParameterError);
  CHECK_THROWS_AS(build_lattice(DomainSpec::unit_square(), 2), EmptyDomainError);
}

TEST_CASE("single vertex domain") {
  const LatticeDomain d = LatticeDomain::from_sites(1, {{0, 0}});
  CHECK(d.size() == 1);
  CHECK(d.deg_rho() == 4);
  for (int k = 0; k < 4; ++k) CHECK(d.neighbor(0, k) == d.rho());
}

TEST_CASE("connectivity") {
  CHECK_FALSE(LatticeDomain::from_sites(4, {{0, 0}, {1, 0}, {3, 3}}).connected());
  // a U shape of cells is connected through its base
  const auto u = DomainSpec::make_polygon({{0, 0}, {3, 0}, {3, 2}, {2, 2}, {2, 1}, {1, 1}, {1, 2}, {0, 2}},
                                          LatticeRule::cells);
  const LatticeDomain d = build_lattice(u, 4);
  CHECK(d.connected());
  CHECK(d.dropped_sites() == 0);
  CHECK(d.size() == 96 - 16);
}

TEST_CASE("json round trip") {
  const LatticeDomain d = build_lattice(DomainSpec::rectangle(2.0, 1.0, LatticeRule::cells), 5);
  CHECK(d.size() == 50);
  const LatticeDomain e = LatticeDomain::from_json(d.to_json());
  REQUIRE(e.size() == d.size());
  CHECK(e.deg_rho() == d.deg_rho());
  CHECK(e.site(17) == d.site(17));
  const DomainSpec s = domain_spec_from_json(to_json(DomainSpec::disk(0.5, LatticeRule::cells)));
  CHECK(s.kind == ShapeKind::disk);
  CHECK(s.radius == 0.5);
  CHECK(s.rule == LatticeRule::cells);
}

TEST_CASE("admissibility report") {
  const DomainSpec spec = DomainSpec::unit_square();
  const LatticeDomain d = build_lattice(spec, 16);
  const ValidationReport r = validate_admissible(d, spec, 0.2);
  CHECK(r.margin_ok);
  CHECK(r.inner_ok);
  CHECK(r.connected);
  CHECK(r.boundary_ratio == doctest::Approx(double(d.deg_rho()) / double(d.deg_total())));
}
