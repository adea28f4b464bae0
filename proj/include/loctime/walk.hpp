#pragma once

// Simple random walk on D_N + rho in three clocks:
//   discrete   - n jumps, local time = visits/deg over steps 0..n;
//   continuous - unit-rate exponential holding at every vertex, local time = time/deg;
//   boundary   - continuous walk stopped when the local time at rho reaches t.
// Holding times are indexed by (vertex, visit number), so the three modes
// share one jump chain for a given seed.

#include <cstdint>
#include <optional>
#include <vector>

#include "loctime/green.hpp"
#include "loctime/lattice_domain.hpp"
#include "loctime/rng.hpp"

namespace loctime {

enum class TimeMode { discrete, continuous, boundary };

const char* mode_name(TimeMode m);
TimeMode mode_from_name(const std::string& s);

struct WalkConfig {
  std::uint32_t start = 0;  // vertex index; domain.rho() starts at rho
  TimeMode mode = TimeMode::discrete;
  double horizon = 0.0;     // steps, continuous time or boundary local time
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
};

struct LocalTimeField {
  std::vector<double> values;  // size |D_N|+1, the last entry is rho
  TimeMode mode = TimeMode::discrete;
  double horizon = 0.0;
  std::uint32_t final_position = 0;
  std::uint64_t steps = 0;     // jumps made
  double elapsed = 0.0;        // continuous time (0 in discrete mode)

  double at_rho() const { return values.back(); }
};

// ⌊t·deg_total⌋: the number of jumps that corresponds to time t.
std::uint64_t steps_for_time(const LatticeDomain& domain, double t);

// The jump chain plus the per-vertex clock.
class WalkEngine {
 public:
  WalkEngine(const LatticeDomain& domain, std::uint32_t start, std::uint64_t seed,
             std::uint64_t replicate);

  std::uint32_t position() const { return pos_; }
  std::uint64_t steps() const { return steps_; }
  // Full holding time of the current visit.
  double holding() const { return clock_(pos_, visits_[pos_] - 1); }
  void step();

 private:
  const LatticeDomain* d_;
  RandomStream jumps_;
  ExponentialTable clock_;
  std::vector<std::uint64_t> visits_;
  std::uint32_t pos_;
  std::uint64_t steps_ = 0;
  std::uint64_t bits_ = 0;
  int nbits_ = 0;
};

// Turns a stream of (vertex, holding time) visits into a local-time field,
// stopping at the configured horizon. Shared by live runs and replays.
class LocalTimeAccumulator {
 public:
  LocalTimeAccumulator(const LatticeDomain& domain, TimeMode mode, double horizon);
  // Returns true once the horizon is reached (the visit may be truncated).
  bool feed(std::uint32_t v, double hold);
  bool done() const { return done_; }
  LocalTimeField finish(std::uint32_t final_position, std::uint64_t steps) const;

 private:
  const LatticeDomain* d_;
  TimeMode mode_;
  double horizon_;
  double target_;  // steps+1, time, or rho-time
  std::vector<double> time_;
  double elapsed_ = 0.0;
  std::uint64_t count_ = 0;
  bool done_ = false;
};

LocalTimeField run_walk(const LatticeDomain& domain, const WalkConfig& config);

// A recorded path that can be read off at several horizons.
class PathRecord {
 public:
  PathRecord(const LatticeDomain& domain, std::uint32_t start, std::uint64_t seed,
             std::uint64_t replicate);

  void extend_to_time(double s);
  void extend_to_boundary(double b);
  LocalTimeField field(TimeMode mode, double horizon) const;
  std::size_t length() const { return vertex_.size(); }

  // Manual construction for hand-checked traces.
  static PathRecord from_events(const LatticeDomain& domain, std::vector<std::uint32_t> vertices,
                                std::vector<double> holds);

 private:
  PathRecord(const LatticeDomain& domain) : d_(&domain) {}
  void push();

  const LatticeDomain* d_;
  std::optional<WalkEngine> engine_;
  std::vector<std::uint32_t> vertex_;
  std::vector<double> hold_;
  double elapsed_ = 0.0;
  double rho_time_ = 0.0;
};

struct FluctuationRecord {
  double t = 0.0;
  double U = 0.0;
  double T = 0.0;
  double t_circ = 0.0;
  double tau_rho = 0.0;
  bool degenerate = false;  // t = 0, T reported as 0
};

FluctuationRecord fluctuations(const LocalTimeField& field, const LatticeDomain& domain, double t);

// |t - tau/deg_total + (1 - deg_rho/deg_total) U|.
double time_identity_check(const LocalTimeField& field, const FluctuationRecord& rec,
                           const LatticeDomain& domain);

struct SandwichOutcome {
  bool holds = false;
  bool clipped = false;       // lower boundary time was negative
  double t = 0.0;
  double t_circ = 0.0;
  double t_star = 0.0;        // boundary local time at continuous time deg_total*t
  double lower = 0.0;
  double upper = 0.0;
};

SandwichOutcome sandwich_once(const LatticeDomain& domain, double t, double b, std::uint64_t seed,
                              std::uint64_t replicate);

struct SandwichReport {
  double fraction = 0.0;
  std::size_t reps = 0;
  std::size_t clipped = 0;
  double t = 0.0;
};

// t = 2 g theta (log N)^2, window b * t^{1/4} around t_circ.
SandwichReport sandwich_check(const LatticeDomain& domain, double theta, double b, std::uint64_t seed,
                              std::size_t reps);

// Steps until every site of D_N has been visited. Throws past 1e10 steps.
std::uint64_t cover_time(const LatticeDomain& domain, std::uint32_t start, std::uint64_t seed,
                         std::uint64_t replicate = 0);

struct RayKnightReport {
  std::uint32_t vertex = 0;
  double t = 0.0;
  double exact_mean = 0.0;   // t + G(u,u)/2
  double mean_lhs = 0.0;     // L_t(u) + h_u^2/2
  double mean_rhs = 0.0;     // (h~_u + sqrt(2t))^2/2
  double z_lhs = 0.0;        // (mean_lhs - exact)/SE
  double z_rhs = 0.0;
  double z_diff = 0.0;       // (mean_lhs - mean_rhs)/SE of the difference
  double ks_statistic = 0.0;
  double ks_pvalue = 0.0;
  std::vector<double> lhs, rhs;
};

RayKnightReport ray_knight_verify(const LatticeDomain& domain, const GreenOperator& green, double t,
                                  std::size_t reps, std::uint64_t seed,
                                  std::optional<std::uint32_t> vertex = std::nullopt);

// The site nearest the centroid of D_N.
std::uint32_t central_vertex(const LatticeDomain& domain);

struct CouplingProxyReport {
  double sd_T = 0.0;
  double sd_T_minus_Y = 0.0;
};

// T_N against the average Y_N of the coupled field h~ = sqrt(2L + h^2) - sqrt(2t).
CouplingProxyReport coupling_proxy(const LatticeDomain& domain, const GreenOperator& green, double t,
                                   std::size_t reps, std::uint64_t seed);

}  // namespace loctime
