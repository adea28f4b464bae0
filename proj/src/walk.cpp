#include "loctime/walk.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "loctime/errors.hpp"
#include "loctime/gaussian_fields.hpp"
#include "loctime/parallel.hpp"
#include "loctime/stats.hpp"

namespace loctime {

const char* mode_name(TimeMode m) {
  switch (m) {
    case TimeMode::discrete: return "discrete";
    case TimeMode::continuous: return "continuous";
    case TimeMode::boundary: return "boundary";
  }
  return "?";
}

TimeMode mode_from_name(const std::string& s) {
  if (s == "discrete") return TimeMode::discrete;
  if (s == "continuous") return TimeMode::continuous;
  if (s == "boundary") return TimeMode::boundary;
  throw ParameterError("unknown time mode '" + s + "'");
}

std::uint64_t steps_for_time(const LatticeDomain& domain, double t) {
  if (!(t >= 0)) throw ParameterError("time must be >= 0");
  return static_cast<std::uint64_t>(std::floor(t * static_cast<double>(domain.deg_total())));
}

WalkEngine::WalkEngine(const LatticeDomain& domain, std::uint32_t start, std::uint64_t seed,
                       std::uint64_t replicate)
    : d_(&domain),
      jumps_(seed, replicate, StreamTag::jumps),
      clock_(seed, replicate, StreamTag::holding),
      visits_(domain.size() + 1, 0),
      pos_(start) {
  if (start > domain.rho()) throw ParameterError("start vertex outside D_N + rho");
  if (domain.deg_rho() == 0) throw ParameterError("boundary vertex has degree zero");
  visits_[pos_] = 1;
}

void WalkEngine::step() {
  if (pos_ == d_->rho()) {
    const auto edges = d_->rho_edges();
    pos_ = edges[jumps_.below(edges.size())];
  } else {
    if (nbits_ == 0) {
      bits_ = jumps_();
      nbits_ = 64;
    }
    const int dir = static_cast<int>(bits_ & 3u);
    bits_ >>= 2;
    nbits_ -= 2;
    pos_ = d_->neighbor(pos_, dir);
  }
  ++visits_[pos_];
  ++steps_;
}

LocalTimeAccumulator::LocalTimeAccumulator(const LatticeDomain& domain, TimeMode mode, double horizon)
    : d_(&domain), mode_(mode), horizon_(horizon), time_(domain.size() + 1, 0.0) {
  if (!(horizon >= 0) || !std::isfinite(horizon)) throw ParameterError("horizon must be finite and >= 0");
  if (domain.deg_rho() == 0) throw ParameterError("boundary vertex has degree zero");
  switch (mode) {
    case TimeMode::discrete:
      if (horizon != std::floor(horizon)) throw ParameterError("discrete horizon must be a whole step count");
      target_ = horizon + 1;  // visits at steps 0..n
      break;
    case TimeMode::continuous:
      target_ = horizon;
      break;
    case TimeMode::boundary:
      target_ = horizon * static_cast<double>(domain.deg_rho());
      break;
  }
}

bool LocalTimeAccumulator::feed(std::uint32_t v, double hold) {
  if (done_) return true;
  switch (mode_) {
    case TimeMode::discrete:
      time_[v] += 1.0;
      if (static_cast<double>(++count_) >= target_) done_ = true;
      break;
    case TimeMode::continuous:
      if (elapsed_ + hold >= target_) {
        time_[v] += target_ - elapsed_;
        elapsed_ = target_;
        done_ = true;
      } else {
        time_[v] += hold;
        elapsed_ += hold;
      }
      break;
    case TimeMode::boundary:
      if (v == d_->rho() && time_[v] + hold >= target_) {
        elapsed_ += target_ - time_[v];
        time_[v] = target_;
        done_ = true;
      } else {
        time_[v] += hold;
        elapsed_ += hold;
      }
      break;
  }
  return done_;
}

LocalTimeField LocalTimeAccumulator::finish(std::uint32_t final_position, std::uint64_t steps) const {
  LocalTimeField f;
  f.mode = mode_;
  f.horizon = horizon_;
  f.final_position = final_position;
  f.steps = steps;
  f.elapsed = mode_ == TimeMode::discrete ? 0.0 : elapsed_;
  f.values.resize(time_.size());
  for (std::uint32_t v = 0; v < time_.size(); ++v) f.values[v] = time_[v] / d_->degree(v);
  if (mode_ == TimeMode::boundary) f.values.back() = horizon_;
  return f;
}

LocalTimeField run_walk(const LatticeDomain& domain, const WalkConfig& config) {
  WalkEngine engine(domain, config.start, config.seed, config.replicate);
  LocalTimeAccumulator acc(domain, config.mode, config.horizon);
  const bool timed = config.mode != TimeMode::discrete;
  while (!acc.feed(engine.position(), timed ? engine.holding() : 0.0)) engine.step();
  return acc.finish(engine.position(), engine.steps());
}

PathRecord::PathRecord(const LatticeDomain& domain, std::uint32_t start, std::uint64_t seed,
                       std::uint64_t replicate)
    : d_(&domain) {
  engine_.emplace(domain, start, seed, replicate);
}

void PathRecord::push() {
  if (!engine_) throw ParameterError("a hand-built path cannot be extended");
  const std::uint32_t v = engine_->position();
  const double h = engine_->holding();
  vertex_.push_back(v);
  hold_.push_back(h);
  elapsed_ += h;
  if (v == d_->rho()) rho_time_ += h;
  engine_->step();
}

void PathRecord::extend_to_time(double s) {
  while (vertex_.empty() || elapsed_ < s) push();
}

void PathRecord::extend_to_boundary(double b) {
  const double target = b * static_cast<double>(d_->deg_rho());
  while (vertex_.empty() || rho_time_ < target) push();
}

LocalTimeField PathRecord::field(TimeMode mode, double horizon) const {
  LocalTimeAccumulator acc(*d_, mode, horizon);
  for (std::size_t k = 0; k < vertex_.size(); ++k) {
    if (acc.feed(vertex_[k], hold_[k])) return acc.finish(vertex_[k], k);
  }
  throw ParameterError("recorded path is too short for the requested horizon");
}

PathRecord PathRecord::from_events(const LatticeDomain& domain, std::vector<std::uint32_t> vertices,
                                   std::vector<double> holds) {
  if (vertices.size() != holds.size()) throw ParameterError("vertex and holding lists differ in length");
  PathRecord p(domain);
  for (std::size_t k = 0; k < vertices.size(); ++k) {
    if (vertices[k] > domain.rho()) throw ParameterError("trace vertex outside D_N + rho");
    if (!(holds[k] >= 0)) throw ParameterError("holding times must be >= 0");
    if (k > 0 && vertices[k] == vertices[k - 1]) throw ParameterError("trace repeats a vertex without a jump");
    p.elapsed_ += holds[k];
    if (vertices[k] == domain.rho()) p.rho_time_ += holds[k];
  }
  p.vertex_ = std::move(vertices);
  p.hold_ = std::move(holds);
  return p;
}

FluctuationRecord fluctuations(const LocalTimeField& field, const LatticeDomain& domain, double t) {
  if (field.mode != TimeMode::boundary || field.horizon != t)
    throw ParameterError("fluctuations need a boundary-time field at horizon t");
  if (field.values.size() != domain.size() + 1) throw ParameterError("field does not match the domain");
  FluctuationRecord r;
  r.t = t;
  const double n = static_cast<double>(domain.size());
  double s = 0.0;
  for (std::uint32_t x = 0; x < domain.size(); ++x) s += field.values[x] - t;
  r.U = s / n;
  if (t > 0) {
    r.T = r.U / std::sqrt(2 * t);
  } else {
    r.T = 0.0;
    r.degenerate = true;
  }
  const double ratio = static_cast<double>(domain.deg_rho()) / static_cast<double>(domain.deg_total());
  r.t_circ = t - (1 - ratio) * std::sqrt(2 * t) * r.T;
  r.tau_rho = field.elapsed;
  return r;
}

double time_identity_check(const LocalTimeField& field, const FluctuationRecord& rec,
                           const LatticeDomain& domain) {
  (void)field;
  const double D = static_cast<double>(domain.deg_total());
  const double ratio = static_cast<double>(domain.deg_rho()) / D;
  return std::abs(rec.t - rec.tau_rho / D + (1 - ratio) * rec.U);
}

SandwichOutcome sandwich_once(const LatticeDomain& domain, double t, double b, std::uint64_t seed,
                              std::uint64_t replicate) {
  SandwichOutcome out;
  out.t = t;
  PathRecord path(domain, domain.rho(), seed, replicate);
  path.extend_to_boundary(t);
  const FluctuationRecord rec = fluctuations(path.field(TimeMode::boundary, t), domain, t);
  out.t_circ = rec.t_circ;
  const double w = b * std::pow(t, 0.25);
  out.lower = rec.t_circ - w;
  if (out.lower < 0) {
    out.lower = 0;
    out.clipped = true;
  }
  out.upper = rec.t_circ + w;
  const double s = static_cast<double>(domain.deg_total()) * t;
  path.extend_to_boundary(out.upper);
  path.extend_to_time(s);
  const LocalTimeField lo = path.field(TimeMode::boundary, out.lower);
  const LocalTimeField mid = path.field(TimeMode::continuous, s);
  const LocalTimeField hi = path.field(TimeMode::boundary, out.upper);
  out.t_star = mid.at_rho();
  out.holds = true;
  for (std::size_t v = 0; v < mid.values.size(); ++v) {
    if (lo.values[v] > mid.values[v] || mid.values[v] > hi.values[v]) {
      out.holds = false;
      break;
    }
  }
  return out;
}

SandwichReport sandwich_check(const LatticeDomain& domain, double theta, double b, std::uint64_t seed,
                              std::size_t reps) {
  if (!(theta > 0)) throw ParameterError("theta must be positive");
  if (!(b > 0)) throw ParameterError("b_N must be positive");
  if (reps == 0) throw ParameterError("reps must be >= 1");
  const double logN = std::log(static_cast<double>(domain.scale()));
  const double t = 2 * kG * theta * logN * logN;
  std::vector<SandwichOutcome> outs(reps);
  parallel_for(reps, [&](std::size_t r) { outs[r] = sandwich_once(domain, t, b, seed, r); });
  SandwichReport rep;
  rep.reps = reps;
  rep.t = t;
  std::size_t good = 0;
  for (auto& o : outs) {
    good += o.holds;
    rep.clipped += o.clipped;
  }
  rep.fraction = static_cast<double>(good) / static_cast<double>(reps);
  return rep;
}

std::uint64_t cover_time(const LatticeDomain& domain, std::uint32_t start, std::uint64_t seed,
                         std::uint64_t replicate) {
  constexpr std::uint64_t kCap = 10'000'000'000ULL;
  WalkEngine engine(domain, start, seed, replicate);
  std::vector<char> seen(domain.size() + 1, 0);
  std::size_t remaining = domain.size();
  if (start != domain.rho()) {
    seen[start] = 1;
    --remaining;
  }
  while (remaining > 0) {
    if (engine.steps() >= kCap) throw SolverError("cover time exceeded the step cap", static_cast<double>(remaining));
    engine.step();
    const auto v = engine.position();
    if (!seen[v]) {
      seen[v] = 1;
      if (v != domain.rho()) --remaining;
    }
  }
  return engine.steps();
}

std::uint32_t central_vertex(const LatticeDomain& domain) {
  double cx = 0, cy = 0;
  for (auto& s : domain.sites()) {
    cx += s.i;
    cy += s.j;
  }
  cx /= static_cast<double>(domain.size());
  cy /= static_cast<double>(domain.size());
  std::uint32_t best = 0;
  double bd = std::numeric_limits<double>::infinity();
  for (std::uint32_t v = 0; v < domain.size(); ++v) {
    const double d = std::hypot(domain.site(v).i - cx, domain.site(v).j - cy);
    if (d < bd - 1e-12) {
      bd = d;
      best = v;
    }
  }
  return best;
}

RayKnightReport ray_knight_verify(const LatticeDomain& domain, const GreenOperator& green, double t,
                                  std::size_t reps, std::uint64_t seed, std::optional<std::uint32_t> vertex) {
  if (!(t >= 0)) throw ParameterError("t must be >= 0");
  if (green.size() != domain.size()) throw ParameterError("Green operator does not match the domain");
  if (reps < 2) throw ParameterError("need at least 2 replicates");
  const std::uint32_t u = vertex.value_or(central_vertex(domain));
  const DgffSampler sampler(green);
  RayKnightReport rep;
  rep.vertex = u;
  rep.t = t;
  rep.exact_mean = t + 0.5 * green(u, u);
  rep.lhs.resize(reps);
  rep.rhs.resize(reps);
  const double root = std::sqrt(2 * t);
  parallel_for(reps, [&](std::size_t r) {
    WalkConfig cfg{domain.rho(), TimeMode::boundary, t, seed, r};
    const LocalTimeField L = run_walk(domain, cfg);
    const double h = sampler.sample(seed, r, StreamTag::field).values[u];
    const double ht = sampler.sample(seed, r, StreamTag::field_aux).values[u];
    rep.lhs[r] = L.values[u] + 0.5 * h * h;
    rep.rhs[r] = 0.5 * (ht + root) * (ht + root);
  });
  const Summary a = summarize(rep.lhs), b = summarize(rep.rhs);
  rep.mean_lhs = a.mean;
  rep.mean_rhs = b.mean;
  rep.z_lhs = (a.mean - rep.exact_mean) / a.se;
  rep.z_rhs = (b.mean - rep.exact_mean) / b.se;
  rep.z_diff = (a.mean - b.mean) / std::sqrt(a.se * a.se + b.se * b.se);
  const KsResult ks = ks_two_sample(rep.lhs, rep.rhs);
  rep.ks_statistic = ks.statistic;
  rep.ks_pvalue = ks.p_value;
  return rep;
}

CouplingProxyReport coupling_proxy(const LatticeDomain& domain, const GreenOperator& green, double t,
                                   std::size_t reps, std::uint64_t seed) {
  if (!(t > 0)) throw ParameterError("t must be positive");
  const DgffSampler sampler(green);
  const std::size_t n = domain.size();
  const double root = std::sqrt(2 * t);
  std::vector<double> T(reps), TY(reps);
  parallel_for(reps, [&](std::size_t r) {
    const LocalTimeField L = run_walk(domain, {domain.rho(), TimeMode::boundary, t, seed, r});
    const FieldSample h = sampler.sample(seed, r);
    double u = 0.0, y = 0.0;
    for (std::size_t x = 0; x < n; ++x) {
      u += L.values[x] - t;
      y += std::sqrt(2 * L.values[x] + h.values[x] * h.values[x]) - root;
    }
    T[r] = u / static_cast<double>(n) / root;
    TY[r] = T[r] - y / static_cast<double>(n);
  });
  CouplingProxyReport rep;
  rep.sd_T = std::sqrt(summarize(T).variance);
  rep.sd_T_minus_Y = std::sqrt(summarize(TY).variance);
  return rep;
}

}  // namespace loctime
