#pragma once

// Planar domains and their lattice approximations. All edges leaving D_N
// end at one fused boundary vertex (rho), so every site has degree 4.

#include <array>
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <unordered_map>
#include <vector>

#include <json.hpp>

namespace loctime {

struct Site {
  std::int32_t i = 0;
  std::int32_t j = 0;
  auto operator<=>(const Site&) const = default;
};

enum class ShapeKind { unit_square, rectangle, disk, polygon };

// margin: x kept iff d_inf(x/N, R^2 \ D) > 1/N.
// cells:  x kept iff the closed cell [x/N,(x+1)/N]^2 sits inside closure(D);
//         the unit square then gives the N x N box {0..N-1}^2.
enum class LatticeRule { margin, cells };

struct DomainSpec {
  ShapeKind kind = ShapeKind::unit_square;
  double width = 1.0;   // rectangle
  double height = 1.0;  // rectangle
  double radius = 1.0;  // disk, centred at the anchor
  std::vector<std::array<double, 2>> polygon;  // relative to the anchor
  std::array<double, 2> anchor{0.0, 0.0};
  LatticeRule rule = LatticeRule::margin;

  static DomainSpec unit_square(LatticeRule rule = LatticeRule::margin);
  static DomainSpec rectangle(double w, double h, LatticeRule rule = LatticeRule::margin);
  static DomainSpec disk(double r, LatticeRule rule = LatticeRule::margin);
  static DomainSpec make_polygon(std::vector<std::array<double, 2>> pts,
                                 LatticeRule rule = LatticeRule::margin);

  // Throws ParameterError for empty, unbounded or self-intersecting shapes.
  void validate() const;

  bool contains(double x, double y) const;
  // sup-norm distance from (x,y) to the complement; 0 outside.
  double linf_to_complement(double x, double y) const;
  double area() const;
  // Axis-aligned bounding box {xmin, ymin, xmax, ymax}.
  std::array<double, 4> bounds() const;
  std::string label() const;
};

nlohmann::json to_json(const DomainSpec& spec);
DomainSpec domain_spec_from_json(const nlohmann::json& j);

class LatticeDomain {
 public:
  static constexpr int kDegree = 4;
  // Neighbour directions: +i, -i, +j, -j.
  static constexpr std::array<Site, 4> kSteps{{{1, 0}, {-1, 0}, {0, 1}, {0, -1}}};

  // Builds a domain from an explicit site list (sorted, deduplicated).
  // No connectivity pruning happens here.
  static LatticeDomain from_sites(int N, std::vector<Site> sites, std::string shape = "custom",
                                  LatticeRule rule = LatticeRule::margin);

  int scale() const { return N_; }
  std::size_t size() const { return sites_.size(); }
  // Index used for rho in per-vertex arrays of length size()+1.
  std::uint32_t rho() const { return static_cast<std::uint32_t>(sites_.size()); }

  std::span<const Site> sites() const { return sites_; }
  const Site& site(std::uint32_t v) const { return sites_[v]; }
  std::optional<std::uint32_t> index_of(Site s) const;

  // Neighbour of v in direction d, or rho().
  std::uint32_t neighbor(std::uint32_t v, int d) const { return nbr_[4 * v + d]; }
  int boundary_edges(std::uint32_t v) const { return bedges_[v]; }
  std::span<const int> boundary_edge_counts() const { return bedges_; }
  // One entry per edge at rho: the D_N endpoint (repeated for multi-edges).
  std::span<const std::uint32_t> rho_edges() const { return rho_edges_; }

  std::int64_t deg_rho() const { return static_cast<std::int64_t>(rho_edges_.size()); }
  std::int64_t deg_total() const { return kDegree * static_cast<std::int64_t>(size()) + deg_rho(); }
  double degree(std::uint32_t v) const { return v == rho() ? static_cast<double>(deg_rho()) : kDegree; }

  bool connected() const;
  std::size_t dropped_sites() const { return dropped_; }
  const std::string& shape() const { return shape_; }
  LatticeRule rule() const { return rule_; }

  // x/N, the lattice point read in continuum units.
  std::array<double, 2> position(std::uint32_t v) const;
  // Representative point: x/N (margin) or the cell centre (x+1/2)/N (cells).
  std::array<double, 2> representative(std::uint32_t v) const;

  nlohmann::json to_json() const;
  static LatticeDomain from_json(const nlohmann::json& j);

 private:
  friend LatticeDomain build_lattice(const DomainSpec&, int);
  void wire();

  int N_ = 1;
  std::string shape_;
  LatticeRule rule_ = LatticeRule::margin;
  std::vector<Site> sites_;
  std::unordered_map<std::uint64_t, std::uint32_t> index_;
  std::vector<std::uint32_t> nbr_;
  std::vector<int> bedges_;
  std::vector<std::uint32_t> rho_edges_;
  std::size_t dropped_ = 0;
};

// Throws EmptyDomainError if no site qualifies.
LatticeDomain build_lattice(const DomainSpec& spec, int N);

struct ValidationReport {
  bool margin_ok = true;            // every site at d_inf > 1/N from the complement
  std::size_t margin_violations = 0;
  bool inner_ok = true;             // every lattice point deeper than delta is a site
  std::size_t inner_missing = 0;
  bool connected = true;
  std::size_t dropped_sites = 0;    // removed when keeping the largest component
  std::int64_t deg_rho = 0;
  std::int64_t deg_total = 0;
  double boundary_ratio = 0.0;      // deg_rho / deg_total
};

ValidationReport validate_admissible(const LatticeDomain& domain, const DomainSpec& spec,
                                     double delta);

}  // namespace loctime
