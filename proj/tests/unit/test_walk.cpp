#include <doctest.h>

#include <cmath>
#include <numeric>

#include "loctime/errors.hpp"
#include "loctime/green.hpp"
#include "loctime/stats.hpp"
#include "loctime/walk.hpp"

using namespace loctime;

namespace {
LatticeDomain pair_domain() { return LatticeDomain::from_sites(2, {{0, 0}, {1, 0}}); }
}  // namespace

TEST_CASE("hand-checked trace in all three clocks") {
  const LatticeDomain d = pair_domain();  // A = 0, B = 1, rho = 2, deg_rho = 6
  const std::uint32_t A = 0, B = 1, R = d.rho();
  const PathRecord p = PathRecord::from_events(d, {R, A, B, A, R, B}, {0.6, 1.0, 0.5, 0.2, 1.2, 0.3});

  // discrete, 3 jumps: visits R, A, B, A
  const LocalTimeField f3 = p.field(TimeMode::discrete, 3);
  CHECK(f3.values[A] == doctest::Approx(2.0 / 4));
  CHECK(f3.values[B] == doctest::Approx(1.0 / 4));
  CHECK(f3.values[R] == doctest::Approx(1.0 / 6));
  CHECK(f3.final_position == A);

  // continuous, time 2: B's visit is cut after 0.4
  const LocalTimeField c = p.field(TimeMode::continuous, 2.0);
  CHECK(c.values[R] == doctest::Approx(0.6 / 6));
  CHECK(c.values[A] == doctest::Approx(1.0 / 4));
  CHECK(c.values[B] == doctest::Approx(0.4 / 4));

  // boundary local time 0.2: rho needs 1.2 units, the second rho visit is cut
  const LocalTimeField b = p.field(TimeMode::boundary, 0.2);
  CHECK(b.at_rho() == 0.2);
  CHECK(b.values[A] == doctest::Approx(1.2 / 4));
  CHECK(b.values[B] == doctest::Approx(0.5 / 4));
  CHECK(b.elapsed == doctest::Approx(2.9));
  CHECK(b.final_position == R);

  CHECK_THROWS_AS(p.field(TimeMode::boundary, 5.0), ParameterError);
  CHECK_THROWS_AS(PathRecord::from_events(d, {A, A}, {1, 1}), ParameterError);
}

TEST_CASE("the three clocks share one jump chain") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 8);
  for (std::uint64_t r = 0; r < 5; ++r) {
    const LocalTimeField b = run_walk(d, {d.rho(), TimeMode::boundary, 1.5, 42, r});
    const LocalTimeField n = run_walk(d, {d.rho(), TimeMode::discrete, static_cast<double>(b.steps), 42, r});
    CHECK(n.final_position == b.final_position);
    const LocalTimeField c = run_walk(d, {d.rho(), TimeMode::continuous, b.elapsed, 42, r});
    CHECK(c.at_rho() == doctest::Approx(1.5));
    // visit counts times degree agree with the discrete run
    double visits = 0.0;
    for (std::uint32_t v = 0; v <= d.size(); ++v) visits += n.values[v] * d.degree(v);
    CHECK(visits == doctest::Approx(static_cast<double>(b.steps + 1)));
  }
}

TEST_CASE("replay equals a live run") {
  const LatticeDomain d = build_lattice(DomainSpec::disk(1.0, LatticeRule::cells), 6);
  PathRecord p(d, d.rho(), 5, 3);
  p.extend_to_boundary(2.0);
  const LocalTimeField live = run_walk(d, {d.rho(), TimeMode::boundary, 2.0, 5, 3});
  const LocalTimeField replay = p.field(TimeMode::boundary, 2.0);
  CHECK(live.values == replay.values);
  CHECK(live.elapsed == replay.elapsed);
}

TEST_CASE("time identity and steps_for_time") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 10);
  CHECK(steps_for_time(d, 2.5) == static_cast<std::uint64_t>(std::floor(2.5 * double(d.deg_total()))));
  const LocalTimeField f = run_walk(d, {d.rho(), TimeMode::boundary, 3.0, 1, 0});
  // tau = sum deg(x) L(x) over D_N + rho
  double tau = 0.0;
  for (std::uint32_t v = 0; v <= d.size(); ++v) tau += d.degree(v) * f.values[v];
  CHECK(tau == doctest::Approx(f.elapsed).epsilon(1e-12));
  const FluctuationRecord rec = fluctuations(f, d, 3.0);
  CHECK(time_identity_check(f, rec, d) < 1e-12);
  CHECK_THROWS_AS(fluctuations(f, d, 2.0), ParameterError);
}

TEST_CASE("two-vertex cover time") {
  // From A the walk needs to reach B: E = 1 + 3/4 E_rho, E_rho = 1 + E_A/2,
  // so the expected cover time is 2.8 steps.
  const LatticeDomain d = pair_domain();
  std::vector<double> t(40000);
  for (std::size_t r = 0; r < t.size(); ++r) t[r] = static_cast<double>(cover_time(d, 0, 8, r));
  const Summary s = summarize(t);
  CHECK(std::abs(s.mean - 2.8) < 4 * s.se);
}

TEST_CASE("discrete horizons must be whole") {
  const LatticeDomain d = pair_domain();
  CHECK_THROWS_AS(run_walk(d, {0, TimeMode::discrete, 2.5, 1, 0}), ParameterError);
  CHECK_THROWS_AS(run_walk(d, {0, TimeMode::continuous, -1.0, 1, 0}), ParameterError);
}

TEST_CASE("small Ray-Knight run") {
  const LatticeDomain d = build_lattice(DomainSpec::unit_square(LatticeRule::cells), 6);
  const GreenOperator g = compute_green(d);
  const RayKnightReport r = ray_knight_verify(d, g, 1.0, 4000, 77);
  CHECK(r.exact_mean == doctest::Approx(1.0 + g(r.vertex, r.vertex) / 2));
  CHECK(std::abs(r.z_lhs) < 4.0);
  CHECK(r.ks_pvalue > 0.001);
}
