#include "loctime/green.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/SparseCholesky>
#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>

#include "loctime/errors.hpp"

namespace loctime {

Eigen::SparseMatrix<double> killed_operator(const LatticeDomain& domain) {
  const auto n = static_cast<Eigen::Index>(domain.size());
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(5 * domain.size());
  for (std::uint32_t v = 0; v < domain.size(); ++v) {
    trips.emplace_back(v, v, 4.0);
    for (int d = 0; d < 4; ++d) {
      const auto w = domain.neighbor(v, d);
      if (w != domain.rho()) trips.emplace_back(v, w, -1.0);
    }
  }
  Eigen::SparseMatrix<double> L(n, n);
  L.setFromTriplets(trips.begin(), trips.end());
  return L;
}

struct GreenSolver::Impl {
  Eigen::SparseMatrix<double> L;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt;
};

GreenSolver::GreenSolver(const LatticeDomain& domain) : n_(domain.size()), impl_(std::make_unique<Impl>()) {
  impl_->L = killed_operator(domain);
  impl_->ldlt.compute(impl_->L);
  if (impl_->ldlt.info() != Eigen::Success)
    throw SolverError("sparse factorization of the killed operator failed", std::nan(""));
}

GreenSolver::~GreenSolver() = default;
GreenSolver::GreenSolver(GreenSolver&&) noexcept = default;
GreenSolver& GreenSolver::operator=(GreenSolver&&) noexcept = default;

// G = (4I - A)^{-1}, which is the defining relation multiplied by -4.
Eigen::VectorXd GreenSolver::apply(const Eigen::VectorXd& b) const {
  Eigen::VectorXd x = impl_->ldlt.solve(b);
  // One refinement step keeps the residual near machine precision.
  const Eigen::VectorXd r = b - impl_->L * x;
  x += impl_->ldlt.solve(r);
  return x;
}

Eigen::VectorXd GreenSolver::column(std::uint32_t y) const {
  Eigen::VectorXd e = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(n_));
  e[y] = 1.0;
  return apply(e);
}

Eigen::VectorXd GreenSolver::row_sums() const {
  return apply(Eigen::VectorXd::Ones(static_cast<Eigen::Index>(n_)));
}

GreenOperator::GreenOperator(Eigen::MatrixXd m) : m_(std::move(m)) {
  rows_ = m_.rowwise().sum();
  total_ = rows_.sum();
}

GreenOperator compute_green(const LatticeDomain& domain, const GreenOptions& opt) {
  const std::size_t n = domain.size();
  if (n > opt.max_dim)
    throw DimensionError("domain too large for dense Green: |D_N|=" + std::to_string(n) +
                         " exceeds cap " + std::to_string(opt.max_dim));
  GreenSolver solver(domain);
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd G(nn, nn);
  for (Eigen::Index c = 0; c < nn; ++c) G.col(c) = solver.column(static_cast<std::uint32_t>(c));
  GreenOperator g(std::move(G));
  const double res = green_residual(domain, g);
  if (!(res <= opt.residual_tol)) throw SolverError("Green solve residual above tolerance", res);
  return g;
}

double green_residual(const LatticeDomain& domain, const GreenOperator& g) {
  const std::size_t n = domain.size();
  double worst = 0.0;
  for (std::uint32_t y = 0; y < n; ++y) {
    for (std::uint32_t x = 0; x < n; ++x) {
      double s = 0.0;
      for (int d = 0; d < 4; ++d) {
        const auto z = domain.neighbor(x, d);
        if (z != domain.rho()) s += g(z, y);
      }
      const double r = 0.25 * s - g(x, y) + (x == y ? 0.25 : 0.0);
      worst = std::max(worst, std::abs(r));
    }
  }
  return worst;
}

double symmetry_defect(const GreenOperator& g) {
  const auto& m = g.matrix();
  return (m - m.transpose()).cwiseAbs().maxCoeff();
}

namespace {

constexpr char kMagic[8] = {'W', 'L', 'G', 'R', 'E', 'E', 'N', '1'};

template <class T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::big) {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    std::reverse(b, b + sizeof(T));
    std::memcpy(&v, b, sizeof(T));
  }
  return v;
}

}  // namespace

void write_green_binary(const GreenOperator& g, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot open '" + path + "' for writing");
  out.write(kMagic, 8);
  const std::uint64_t n = to_little<std::uint64_t>(g.size());
  out.write(reinterpret_cast<const char*>(&n), 8);
  const auto& m = g.matrix();
  std::vector<double> row(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    for (std::size_t j = 0; j < g.size(); ++j) row[j] = to_little(m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)));
    out.write(reinterpret_cast<const char*>(row.data()), static_cast<std::streamsize>(8 * row.size()));
  }
  if (!out) throw ParameterError("write to '" + path + "' failed");
}

GreenOperator read_green_binary(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParameterError("cannot open '" + path + "'");
  char magic[8];
  in.read(magic, 8);
  if (!in || std::memcmp(magic, kMagic, 8) != 0) throw ParameterError("'" + path + "' is not a Green file");
  std::uint64_t n = 0;
  in.read(reinterpret_cast<char*>(&n), 8);
  n = to_little(n);
  if (!in || n == 0 || n > (1u << 20)) throw ParameterError("bad dimension in '" + path + "'");
  const auto nn = static_cast<Eigen::Index>(n);
  Eigen::MatrixXd m(nn, nn);
  std::vector<double> row(n);
  for (Eigen::Index i = 0; i < nn; ++i) {
    in.read(reinterpret_cast<char*>(row.data()), static_cast<std::streamsize>(8 * n));
    if (!in) throw ParameterError("'" + path + "' is truncated");
    for (Eigen::Index j = 0; j < nn; ++j) m(i, j) = to_little(row[static_cast<std::size_t>(j)]);
  }
  return GreenOperator(std::move(m));
}

KacMoments kac_moments(const GreenOperator& g, const LatticeDomain& domain, std::uint32_t x, double t) {
  if (x >= domain.size()) throw ParameterError("kac_moments: vertex not in D_N");
  if (!(t >= 0)) throw ParameterError("kac_moments: t must be >= 0");
  const double deg = LatticeDomain::kDegree;
  const auto xi = static_cast<Eigen::Index>(x);
  KacMoments k;
  k.second_moment_hitting = 2.0 * deg * deg * g.matrix().row(xi).dot(g.row_sums());
  const double n = static_cast<double>(domain.size());
  k.var_fluctuation = 2.0 * t * g.total() / (n * n);
  return k;
}

PotentialKernel::PotentialKernel(int M, int radius) : M_(M) {
  if (M < 64) throw ParameterError("potential kernel resolution must be >= 64");
  const double h = 2.0 * kPi / M;
  nodes_.resize(M);
  for (int i = 0; i < M; ++i) nodes_[i] = -kPi + (i + 0.5) * h;
  Eigen::VectorXd s2(M);
  for (int i = 0; i < M; ++i) {
    const double s = std::sin(nodes_[i] / 2);
    s2[i] = 4 * s * s;
  }
  w_.resize(M, M);
  for (int j = 0; j < M; ++j)
    for (int i = 0; i < M; ++i) {
      const double d = s2[i] + s2[j];
      w_(i, j) = d > 0 ? 1.0 / d : 0.0;  // odd M puts a node on the origin: skip it
    }
  sum_w_ = w_.sum();
  tabulate(std::max(radius, 1));
}

void PotentialKernel::tabulate(int radius) {
  // By symmetry the sine parts vanish, so
  // a(x) = [sum w - sum_ij w_ij cos(k_i x1) cos(k_j x2)] / M^2.
  Eigen::MatrixXd C(M_, radius + 1);
  for (int r = 0; r <= radius; ++r)
    for (int i = 0; i < M_; ++i) C(i, r) = std::cos(nodes_[i] * r);
  const Eigen::MatrixXd WC = w_ * C;
  const Eigen::MatrixXd T = C.transpose() * WC;
  const double m2 = static_cast<double>(M_) * M_;
  table_ = (Eigen::MatrixXd::Constant(radius + 1, radius + 1, sum_w_) - T) / m2;
  table_(0, 0) = 0.0;
  // Enforce the exact reflection symmetry a(x1,x2) = a(x2,x1).
  table_ = 0.5 * (table_ + table_.transpose()).eval();
  R_ = radius;
}

double PotentialKernel::operator()(Site x) {
  const int a = std::abs(x.i), b = std::abs(x.j);
  if (a == 0 && b == 0) return 0.0;
  if (std::max(a, b) > R_) tabulate(std::max(std::max(a, b), 2 * R_));
  return table_(a, b);
}

double potential_kernel(Site x, int M) {
  PotentialKernel k(M, std::max(std::abs(x.i), std::abs(x.j)));
  return k(x);
}

}  // namespace loctime
