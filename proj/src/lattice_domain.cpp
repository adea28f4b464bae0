#include "loctime/lattice_domain.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>

#include "loctime/errors.hpp"

namespace loctime {

namespace {

using Vec2 = std::array<double, 2>;

double cross(Vec2 o, Vec2 a, Vec2 b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

bool on_segment(Vec2 p, Vec2 a, Vec2 b) {
  return std::min(a[0], b[0]) <= p[0] && p[0] <= std::max(a[0], b[0]) &&
         std::min(a[1], b[1]) <= p[1] && p[1] <= std::max(a[1], b[1]);
}

int sign(double v) { return (v > 0) - (v < 0); }

bool segments_meet(Vec2 a, Vec2 b, Vec2 c, Vec2 d) {
  const int o1 = sign(cross(a, b, c)), o2 = sign(cross(a, b, d));
  const int o3 = sign(cross(c, d, a)), o4 = sign(cross(c, d, b));
  if (o1 != o2 && o3 != o4) return true;
  if (o1 == 0 && on_segment(c, a, b)) return true;
  if (o2 == 0 && on_segment(d, a, b)) return true;
  if (o3 == 0 && on_segment(a, c, d)) return true;
  if (o4 == 0 && on_segment(b, c, d)) return true;
  return false;
}

// min over s in [0,1] of |a + s*d|_inf, with a = A - p.
double linf_point_segment(Vec2 p, Vec2 A, Vec2 B) {
  const double ax = A[0] - p[0], ay = A[1] - p[1];
  const double dx = B[0] - A[0], dy = B[1] - A[1];
  auto f = [&](double s) { return std::max(std::abs(ax + s * dx), std::abs(ay + s * dy)); };
  double best = std::min(f(0.0), f(1.0));
  auto probe = [&](double num, double den) {
    if (den == 0.0) return;
    const double s = num / den;
    if (s > 0.0 && s < 1.0) best = std::min(best, f(s));
  };
  probe(ay - ax, dx - dy);
  probe(-(ax + ay), dx + dy);
  probe(-ax, dx);
  probe(-ay, dy);
  return best;
}

std::uint64_t pack(Site s) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(s.i)) << 32) |
         static_cast<std::uint32_t>(s.j);
}

// The shape blown up by a factor N, so distances come out in lattice units
// and integer-aligned shapes stay exact.
DomainSpec scaled(const DomainSpec& spec, int N) {
  DomainSpec s = spec;
  const double f = N;
  if (s.kind == ShapeKind::unit_square) {
    s.kind = ShapeKind::rectangle;
    s.width = s.height = 1.0;
  }
  s.width *= f;
  s.height *= f;
  s.radius *= f;
  s.anchor = {spec.anchor[0] * f, spec.anchor[1] * f};
  for (auto& p : s.polygon) p = {p[0] * f, p[1] * f};
  return s;
}

const char* rule_name(LatticeRule r) { return r == LatticeRule::cells ? "cells" : "margin"; }

LatticeRule rule_from_name(const std::string& s) {
  if (s == "margin") return LatticeRule::margin;
  if (s == "cells") return LatticeRule::cells;
  throw ParameterError("unknown lattice rule '" + s + "'");
}

}  // namespace

DomainSpec DomainSpec::unit_square(LatticeRule rule) {
  DomainSpec s;
  s.kind = ShapeKind::unit_square;
  s.rule = rule;
  return s;
}

DomainSpec DomainSpec::rectangle(double w, double h, LatticeRule rule) {
  DomainSpec s;
  s.kind = ShapeKind::rectangle;
  s.width = w;
  s.height = h;
  s.rule = rule;
  s.validate();
  return s;
}

DomainSpec DomainSpec::disk(double r, LatticeRule rule) {
  DomainSpec s;
  s.kind = ShapeKind::disk;
  s.radius = r;
  s.rule = rule;
  s.validate();
  return s;
}

DomainSpec DomainSpec::make_polygon(std::vector<std::array<double, 2>> pts, LatticeRule rule) {
  DomainSpec s;
  s.kind = ShapeKind::polygon;
  s.polygon = std::move(pts);
  s.rule = rule;
  s.validate();
  return s;
}

void DomainSpec::validate() const {
  auto finite = [](double v) { return std::isfinite(v); };
  if (!finite(anchor[0]) || !finite(anchor[1])) throw ParameterError("anchor must be finite");
  switch (kind) {
    case ShapeKind::unit_square:
      return;
    case ShapeKind::rectangle:
      if (!(width > 0 && height > 0 && finite(width) && finite(height)))
        throw ParameterError("rectangle needs positive finite width and height");
      return;
    case ShapeKind::disk:
      if (!(radius > 0 && finite(radius))) throw ParameterError("disk needs a positive finite radius");
      return;
    case ShapeKind::polygon: {
      const std::size_t n = polygon.size();
      if (n < 3) throw ParameterError("polygon needs at least 3 vertices");
      for (auto& p : polygon)
        if (!finite(p[0]) || !finite(p[1])) throw ParameterError("polygon vertex not finite");
      if (area() <= 0) throw ParameterError("polygon has empty interior");
      for (std::size_t a = 0; a < n; ++a) {
        const Vec2 p = polygon[a], q = polygon[(a + 1) % n];
        if (p == q) throw ParameterError("polygon has a repeated vertex");
        for (std::size_t b = a + 1; b < n; ++b) {
          const bool adjacent = (b == a + 1) || (a == 0 && b == n - 1);
          const Vec2 r = polygon[b], s = polygon[(b + 1) % n];
          if (adjacent) {
            // Shared endpoint only; collinear backtracking counts as a crossing.
            const Vec2 shared = (b == a + 1) ? q : p;
            const Vec2 u = (b == a + 1) ? p : q;
            const Vec2 w = (b == a + 1) ? s : r;
            if (cross(shared, u, w) == 0.0 &&
                (u[0] - shared[0]) * (w[0] - shared[0]) + (u[1] - shared[1]) * (w[1] - shared[1]) > 0)
              throw ParameterError("polygon is not simple");
            continue;
          }
          if (segments_meet(p, q, r, s)) throw ParameterError("polygon is not simple");
        }
      }
      return;
    }
  }
}

bool DomainSpec::contains(double x, double y) const {
  const double px = x - anchor[0], py = y - anchor[1];
  switch (kind) {
    case ShapeKind::unit_square:
      return px > 0 && px < 1 && py > 0 && py < 1;
    case ShapeKind::rectangle:
      return px > 0 && px < width && py > 0 && py < height;
    case ShapeKind::disk:
      return px * px + py * py < radius * radius;
    case ShapeKind::polygon: {
      bool inside = false;
      const std::size_t n = polygon.size();
      for (std::size_t a = 0, b = n - 1; a < n; b = a++) {
        const Vec2 P = polygon[a], Q = polygon[b];
        if ((P[1] > py) != (Q[1] > py)) {
          const double xc = P[0] + (py - P[1]) * (Q[0] - P[0]) / (Q[1] - P[1]);
          if (px < xc) inside = !inside;
        }
      }
      return inside;
    }
  }
  return false;
}

double DomainSpec::linf_to_complement(double x, double y) const {
  if (!contains(x, y)) return 0.0;
  const double px = x - anchor[0], py = y - anchor[1];
  switch (kind) {
    case ShapeKind::unit_square:
      return std::min({px, 1 - px, py, 1 - py});
    case ShapeKind::rectangle:
      return std::min({px, width - px, py, height - py});
    case ShapeKind::disk: {
      // Largest r with (|dx|+r)^2 + (|dy|+r)^2 <= R^2.
      const double a = std::abs(px), b = std::abs(py);
      const double disc = (a + b) * (a + b) - 2 * (a * a + b * b - radius * radius);
      return 0.5 * (-(a + b) + std::sqrt(std::max(disc, 0.0)));
    }
    case ShapeKind::polygon: {
      double best = std::numeric_limits<double>::infinity();
      const std::size_t n = polygon.size();
      for (std::size_t a = 0; a < n; ++a)
        best = std::min(best, linf_point_segment({px, py}, polygon[a], polygon[(a + 1) % n]));
      return best;
    }
  }
  return 0.0;
}

double DomainSpec::area() const {
  switch (kind) {
    case ShapeKind::unit_square:
      return 1.0;
    case ShapeKind::rectangle:
      return width * height;
    case ShapeKind::disk:
      return M_PI * radius * radius;
    case ShapeKind::polygon: {
      double s = 0;
      const std::size_t n = polygon.size();
      for (std::size_t a = 0; a < n; ++a) {
        const auto& p = polygon[a];
        const auto& q = polygon[(a + 1) % n];
        s += p[0] * q[1] - q[0] * p[1];
      }
      return std::abs(s) / 2;
    }
  }
  return 0.0;
}

std::array<double, 4> DomainSpec::bounds() const {
  const double ax = anchor[0], ay = anchor[1];
  switch (kind) {
    case ShapeKind::unit_square:
      return {ax, ay, ax + 1, ay + 1};
    case ShapeKind::rectangle:
      return {ax, ay, ax + width, ay + height};
    case ShapeKind::disk:
      return {ax - radius, ay - radius, ax + radius, ay + radius};
    case ShapeKind::polygon: {
      std::array<double, 4> b{1e300, 1e300, -1e300, -1e300};
      for (auto& p : polygon) {
        b[0] = std::min(b[0], ax + p[0]);
        b[1] = std::min(b[1], ay + p[1]);
        b[2] = std::max(b[2], ax + p[0]);
        b[3] = std::max(b[3], ay + p[1]);
      }
      return b;
    }
  }
  return {0, 0, 0, 0};
}

std::string DomainSpec::label() const {
  switch (kind) {
    case ShapeKind::unit_square: return "unit-square";
    case ShapeKind::rectangle: return "rectangle";
    case ShapeKind::disk: return "disk";
    case ShapeKind::polygon: return "polygon";
  }
  return "?";
}

nlohmann::json to_json(const DomainSpec& spec) {
  nlohmann::json j;
  j["shape"] = spec.label();
  j["anchor"] = spec.anchor;
  j["rule"] = rule_name(spec.rule);
  if (spec.kind == ShapeKind::rectangle) {
    j["width"] = spec.width;
    j["height"] = spec.height;
  } else if (spec.kind == ShapeKind::disk) {
    j["radius"] = spec.radius;
  } else if (spec.kind == ShapeKind::polygon) {
    j["vertices"] = spec.polygon;
  }
  return j;
}

DomainSpec domain_spec_from_json(const nlohmann::json& j) {
  DomainSpec s;
  const std::string shape = j.value("shape", std::string("unit-square"));
  if (shape == "unit-square" || shape == "square") {
    s.kind = ShapeKind::unit_square;
  } else if (shape == "rectangle") {
    s.kind = ShapeKind::rectangle;
    s.width = j.at("width").get<double>();
    s.height = j.at("height").get<double>();
  } else if (shape == "disk") {
    s.kind = ShapeKind::disk;
    s.radius = j.value("radius", 1.0);
  } else if (shape == "polygon") {
    s.kind = ShapeKind::polygon;
    s.polygon = j.at("vertices").get<std::vector<std::array<double, 2>>>();
  } else {
    throw ParameterError("unknown shape '" + shape + "'");
  }
  if (j.contains("anchor")) s.anchor = j["anchor"].get<std::array<double, 2>>();
  if (j.contains("rule")) s.rule = rule_from_name(j["rule"].get<std::string>());
  s.validate();
  return s;
}

LatticeDomain LatticeDomain::from_sites(int N, std::vector<Site> sites, std::string shape,
                                        LatticeRule rule) {
  if (N < 1) throw ParameterError("scale N must be >= 1");
  if (sites.empty()) throw EmptyDomainError("empty domain: no lattice sites");
  std::sort(sites.begin(), sites.end());
  sites.erase(std::unique(sites.begin(), sites.end()), sites.end());
  LatticeDomain d;
  d.N_ = N;
  d.shape_ = std::move(shape);
  d.rule_ = rule;
  d.sites_ = std::move(sites);
  d.wire();
  return d;
}

void LatticeDomain::wire() {
  index_.clear();
  index_.reserve(sites_.size() * 2);
  for (std::uint32_t v = 0; v < sites_.size(); ++v) index_.emplace(pack(sites_[v]), v);
  nbr_.assign(4 * sites_.size(), rho());
  bedges_.assign(sites_.size(), 0);
  rho_edges_.clear();
  for (std::uint32_t v = 0; v < sites_.size(); ++v) {
    for (int d = 0; d < 4; ++d) {
      const Site s{sites_[v].i + kSteps[d].i, sites_[v].j + kSteps[d].j};
      auto it = index_.find(pack(s));
      if (it != index_.end()) {
        nbr_[4 * v + d] = it->second;
      } else {
        ++bedges_[v];
        rho_edges_.push_back(v);
      }
    }
  }
}

std::optional<std::uint32_t> LatticeDomain::index_of(Site s) const {
  auto it = index_.find(pack(s));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

bool LatticeDomain::connected() const {
  if (sites_.empty()) return false;
  std::vector<char> seen(sites_.size(), 0);
  std::deque<std::uint32_t> queue{0};
  seen[0] = 1;
  std::size_t count = 1;
  while (!queue.empty()) {
    const auto v = queue.front();
    queue.pop_front();
    for (int d = 0; d < 4; ++d) {
      const auto w = neighbor(v, d);
      if (w != rho() && !seen[w]) {
        seen[w] = 1;
        ++count;
        queue.push_back(w);
      }
    }
  }
  return count == sites_.size();
}

std::array<double, 2> LatticeDomain::position(std::uint32_t v) const {
  return {static_cast<double>(sites_[v].i) / N_, static_cast<double>(sites_[v].j) / N_};
}

std::array<double, 2> LatticeDomain::representative(std::uint32_t v) const {
  const double off = rule_ == LatticeRule::cells ? 0.5 : 0.0;
  return {(sites_[v].i + off) / N_, (sites_[v].j + off) / N_};
}

nlohmann::json LatticeDomain::to_json() const {
  nlohmann::json j;
  j["N"] = N_;
  j["shape"] = shape_;
  j["rule"] = rule_name(rule_);
  auto verts = nlohmann::json::array();
  for (auto& s : sites_) verts.push_back({s.i, s.j});
  j["vertices"] = std::move(verts);
  j["boundary_edge_count"] = bedges_;
  j["deg_rho"] = deg_rho();
  j["deg_total"] = deg_total();
  j["dropped_sites"] = dropped_;
  return j;
}

LatticeDomain LatticeDomain::from_json(const nlohmann::json& j) {
  std::vector<Site> sites;
  for (auto& p : j.at("vertices")) sites.push_back({p.at(0).get<int>(), p.at(1).get<int>()});
  LatticeDomain d = from_sites(j.at("N").get<int>(), std::move(sites), j.value("shape", std::string("custom")),
                               rule_from_name(j.value("rule", std::string("margin"))));
  d.dropped_ = j.value("dropped_sites", std::size_t{0});
  if (j.contains("boundary_edge_count") &&
      j["boundary_edge_count"].get<std::vector<int>>() != d.bedges_)
    throw ParameterError("boundary_edge_count does not match the vertex list");
  return d;
}

LatticeDomain build_lattice(const DomainSpec& spec, int N) {
  if (N < 1) throw ParameterError("scale N must be >= 1");
  spec.validate();
  const DomainSpec big = scaled(spec, N);
  const auto b = big.bounds();
  const bool cells = spec.rule == LatticeRule::cells;
  const double off = cells ? 0.5 : 0.0;
  std::vector<Site> sites;
  for (auto i = static_cast<std::int64_t>(std::floor(b[0])) - 1; i <= static_cast<std::int64_t>(std::ceil(b[2])) + 1; ++i) {
    for (auto j = static_cast<std::int64_t>(std::floor(b[1])) - 1; j <= static_cast<std::int64_t>(std::ceil(b[3])) + 1; ++j) {
      const double d = big.linf_to_complement(i + off, j + off);
      if (cells ? d >= 0.5 : d > 1.0) sites.push_back({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)});
    }
  }
  if (sites.empty())
    throw EmptyDomainError("empty domain: no lattice site qualifies at N=" + std::to_string(N));

  LatticeDomain d = LatticeDomain::from_sites(N, std::move(sites), spec.label(), spec.rule);
  if (d.connected()) return d;

  // Keep the largest component (first one in row-major order on ties).
  std::vector<int> comp(d.size(), -1);
  int ncomp = 0, best = 0;
  std::size_t best_size = 0;
  for (std::uint32_t s = 0; s < d.size(); ++s) {
    if (comp[s] >= 0) continue;
    std::size_t count = 0;
    std::deque<std::uint32_t> queue{s};
    comp[s] = ncomp;
    while (!queue.empty()) {
      const auto v = queue.front();
      queue.pop_front();
      ++count;
      for (int k = 0; k < 4; ++k) {
        const auto w = d.neighbor(v, k);
        if (w != d.rho() && comp[w] < 0) {
          comp[w] = ncomp;
          queue.push_back(w);
        }
      }
    }
    if (count > best_size) {
      best_size = count;
      best = ncomp;
    }
    ++ncomp;
  }
  std::vector<Site> kept;
  for (std::uint32_t v = 0; v < d.size(); ++v)
    if (comp[v] == best) kept.push_back(d.site(v));
  const std::size_t dropped = d.size() - kept.size();
  LatticeDomain out = LatticeDomain::from_sites(N, std::move(kept), spec.label(), spec.rule);
  out.dropped_ = dropped;
  return out;
}

ValidationReport validate_admissible(const LatticeDomain& domain, const DomainSpec& spec,
                                     double delta) {
  if (!(delta > 0)) throw ParameterError("delta must be positive");
  ValidationReport r;
  const int N = domain.scale();
  const DomainSpec big = scaled(spec, N);
  for (const Site& s : domain.sites()) {
    if (!(big.linf_to_complement(s.i, s.j) > 1.0)) ++r.margin_violations;
  }
  r.margin_ok = r.margin_violations == 0;
  const auto b = big.bounds();
  const double depth = delta * N;
  for (auto i = static_cast<std::int64_t>(std::floor(b[0])); i <= static_cast<std::int64_t>(std::ceil(b[2])); ++i)
    for (auto j = static_cast<std::int64_t>(std::floor(b[1])); j <= static_cast<std::int64_t>(std::ceil(b[3])); ++j)
      if (big.linf_to_complement(i, j) > depth &&
          !domain.index_of({static_cast<std::int32_t>(i), static_cast<std::int32_t>(j)}))
        ++r.inner_missing;
  r.inner_ok = r.inner_missing == 0;
  r.connected = domain.connected();
  r.dropped_sites = domain.dropped_sites();
  r.deg_rho = domain.deg_rho();
  r.deg_total = domain.deg_total();
  r.boundary_ratio = static_cast<double>(r.deg_rho) / static_cast<double>(r.deg_total);
  return r;
}

}  // namespace loctime
