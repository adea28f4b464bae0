#include "loctime/continuum.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

#include "loctime/errors.hpp"

namespace loctime {

double sigma_D2(const GreenOperator& green, const LatticeDomain& domain) {
  if (green.size() != domain.size()) throw ParameterError("Green operator does not match the domain");
  const double n = static_cast<double>(domain.size());
  return green.total() / (n * n);
}

double sigma_D2(const LatticeDomain& domain) {
  const GreenSolver solver(domain);
  const double n = static_cast<double>(domain.size());
  return solver.row_sums().sum() / (n * n);
}

double ContinuumGrid::integral() const {
  double s = 0.0;
  for (double v : values) s += v;
  return s * cell_area;
}

double ContinuumGrid::min_value() const {
  return values.empty() ? 0.0 : *std::min_element(values.begin(), values.end());
}

namespace {

ContinuumGrid from_row_sums(const LatticeDomain& domain, const Eigen::VectorXd& rows) {
  ContinuumGrid g;
  g.quantity = GridQuantity::d_function;
  g.route = "green";
  g.resolution = domain.scale();
  g.sigma_scale = domain.scale();
  const double n = static_cast<double>(domain.size());
  const double total = rows.sum();
  g.sigma2 = total / (n * n);
  g.cell_area = 1.0 / (static_cast<double>(domain.scale()) * domain.scale());
  g.points.reserve(domain.size());
  g.values.reserve(domain.size());
  for (std::uint32_t v = 0; v < domain.size(); ++v) {
    g.points.push_back(domain.representative(v));
    g.values.push_back(n * rows[v] / total);
  }
  return g;
}

void require_square(const DomainSpec& spec) {
  if (spec.kind != ShapeKind::unit_square)
    throw UnsupportedError("poisson route supports the unit square only, got " + spec.label());
}

}  // namespace

ContinuumGrid d_function_green(const LatticeDomain& domain, const GreenOperator& green) {
  if (green.size() != domain.size()) throw ParameterError("Green operator does not match the domain");
  return from_row_sums(domain, green.row_sums());
}

ContinuumGrid d_function_green(const LatticeDomain& domain) {
  return from_row_sums(domain, GreenSolver(domain).row_sums());
}

ContinuumGrid d_function_poisson(const DomainSpec& spec, int M, double sigma2, int sigma_scale) {
  require_square(spec);
  if (M < 2) throw ParameterError("poisson grid needs M >= 2");
  if (!(sigma2 > 0)) throw ParameterError("sigma2 must be positive");
  const double h = 1.0 / M;
  const double rhs = spec.area() / sigma2;
  const auto idx = [M](int i, int j) { return static_cast<Eigen::Index>(i) * M + j; };
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(5 * M * M));
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      // A node next to the wall sees a ghost value -u, hence the extra diagonal.
      double diag = 4.0;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (auto& p : nb) {
        if (p[0] < 0 || p[0] >= M || p[1] < 0 || p[1] >= M) {
          diag += 1.0;
        } else {
          trips.emplace_back(idx(i, j), idx(p[0], p[1]), -1.0);
        }
      }
      trips.emplace_back(idx(i, j), idx(i, j), diag);
    }
  }
  const auto n = static_cast<Eigen::Index>(M) * M;
  Eigen::SparseMatrix<double> A(n, n);
  A.setFromTriplets(trips.begin(), trips.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success) throw SolverError("poisson factorization failed", std::nan(""));
  const Eigen::VectorXd b = Eigen::VectorXd::Constant(n, rhs * h * h);
  Eigen::VectorXd u = ldlt.solve(b);
  u += ldlt.solve(Eigen::VectorXd(b - A * u));

  ContinuumGrid g;
  g.quantity = GridQuantity::d_function;
  g.route = "poisson";
  g.resolution = M;
  g.sigma2 = sigma2;
  g.sigma_scale = sigma_scale;
  g.cell_area = h * h;
  g.origin = spec.anchor;
  g.points.reserve(static_cast<std::size_t>(n));
  g.values.assign(u.data(), u.data() + n);
  for (int i = 0; i < M; ++i)
    for (int j = 0; j < M; ++j) g.points.push_back({spec.anchor[0] + (i + 0.5) * h, spec.anchor[1] + (j + 0.5) * h});
  return g;
}

double poisson_residual(const ContinuumGrid& grid, const DomainSpec& spec) {
  require_square(spec);
  const int M = grid.resolution;
  const double h2 = 1.0 / (static_cast<double>(M) * M);
  const double rhs = spec.area() / grid.sigma2;
  auto at = [&](int i, int j) { return grid.values[static_cast<std::size_t>(i) * M + j]; };
  double worst = 0.0;
  for (int i = 0; i < M; ++i) {
    for (int j = 0; j < M; ++j) {
      const double u = at(i, j);
      double s = -4.0 * u;
      const int nb[4][2] = {{i + 1, j}, {i - 1, j}, {i, j + 1}, {i, j - 1}};
      for (auto& p : nb) {
        const bool out = p[0] < 0 || p[0] >= M || p[1] < 0 || p[1] >= M;
        s += out ? -u : at(p[0], p[1]);
      }
      worst = std::max(worst, std::abs(s / h2 + rhs));
    }
  }
  return worst;
}

double interpolate_poisson(const ContinuumGrid& grid, double x, double y) {
  if (grid.route != "poisson") throw ParameterError("interpolation needs a poisson-route grid");
  const int M = grid.resolution;
  const double gx = (x - grid.origin[0]) * M - 0.5;
  const double gy = (y - grid.origin[1]) * M - 0.5;
  if (gx < -0.5 || gx > M - 0.5 || gy < -0.5 || gy > M - 0.5) return 0.0;
  // Ghost nodes at -1 and M mirror the adjacent value with a sign flip.
  auto at = [&](int i, int j) {
    double sgn = 1.0;
    if (i < 0) { i = 0; sgn = -sgn; }
    if (i >= M) { i = M - 1; sgn = -sgn; }
    if (j < 0) { j = 0; sgn = -sgn; }
    if (j >= M) { j = M - 1; sgn = -sgn; }
    return sgn * grid.values[static_cast<std::size_t>(i) * M + j];
  };
  const int i0 = std::clamp(static_cast<int>(std::floor(gx)), -1, M - 1);
  const int j0 = std::clamp(static_cast<int>(std::floor(gy)), -1, M - 1);
  const double fx = gx - i0, fy = gy - j0;
  return (1 - fx) * (1 - fy) * at(i0, j0) + fx * (1 - fy) * at(i0 + 1, j0) + (1 - fx) * fy * at(i0, j0 + 1) +
         fx * fy * at(i0 + 1, j0 + 1);
}

double sup_difference(const ContinuumGrid& lattice, const ContinuumGrid& poisson) {
  double worst = 0.0;
  for (std::size_t k = 0; k < lattice.points.size(); ++k) {
    const auto& p = lattice.points[k];
    worst = std::max(worst, std::abs(lattice.values[k] - interpolate_poisson(poisson, p[0], p[1])));
  }
  return worst;
}

struct ContinuumGreenEstimator::Level {
  LatticeDomain domain;
  GreenSolver solver;
  std::map<std::uint32_t, Eigen::VectorXd> columns;
  explicit Level(LatticeDomain d) : domain(std::move(d)), solver(domain) {}
};

ContinuumGreenEstimator::ContinuumGreenEstimator(DomainSpec spec) : spec_(std::move(spec)) { spec_.validate(); }

double ContinuumGreenEstimator::operator()(std::array<double, 2> x, std::array<double, 2> y, int N) {
  if (x == y) throw ParameterError("diagonal divergence: the continuum Green function is infinite at x = y");
  if (!spec_.contains(x[0], x[1]) || !spec_.contains(y[0], y[1]))
    throw ParameterError("continuum point outside the domain");
  auto it = levels_.find(N);
  if (it == levels_.end()) it = levels_.emplace(N, std::make_shared<Level>(build_lattice(spec_, N))).first;
  Level& lv = *it->second;
  auto site = [N](std::array<double, 2> p) {
    return Site{static_cast<std::int32_t>(std::floor(p[0] * N)), static_cast<std::int32_t>(std::floor(p[1] * N))};
  };
  const auto xi = lv.domain.index_of(site(x));
  const auto yi = lv.domain.index_of(site(y));
  if (!xi || !yi) throw ParameterError("lattice point floor(xN) is not in D_N");
  auto col = lv.columns.find(*yi);
  if (col == lv.columns.end()) col = lv.columns.emplace(*yi, lv.solver.column(*yi)).first;
  return col->second[*xi];
}

double continuum_green_estimate(const DomainSpec& spec, std::array<double, 2> x, std::array<double, 2> y, int N) {
  ContinuumGreenEstimator est(spec);
  return est(x, y, N);
}

}  // namespace loctime
