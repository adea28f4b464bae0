#pragma once

// Green function of the walk killed at rho, in local-time units:
// G(x,y) = E^x[ local time at y before hitting rho ], local time = visits/4.

#include <Eigen/Dense>
#include <Eigen/Sparse>
#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "loctime/lattice_domain.hpp"

namespace loctime {

constexpr double kPi = 3.14159265358979323846;
constexpr double kG = 1.0 / (2.0 * kPi);

// 4I - A on D_N. Its inverse is G.
Eigen::SparseMatrix<double> killed_operator(const LatticeDomain& domain);

// Reusable factorization of the killed operator for single solves.
class GreenSolver {
 public:
  explicit GreenSolver(const LatticeDomain& domain);
  ~GreenSolver();
  GreenSolver(GreenSolver&&) noexcept;
  GreenSolver& operator=(GreenSolver&&) noexcept;

  std::size_t size() const { return n_; }
  // x = G b.
  Eigen::VectorXd apply(const Eigen::VectorXd& b) const;
  Eigen::VectorXd column(std::uint32_t y) const;
  Eigen::VectorXd row_sums() const;

 private:
  struct Impl;
  std::size_t n_ = 0;
  std::unique_ptr<Impl> impl_;
};

class GreenOperator {
 public:
  GreenOperator() = default;
  explicit GreenOperator(Eigen::MatrixXd m);

  std::size_t size() const { return static_cast<std::size_t>(m_.rows()); }
  double operator()(std::uint32_t x, std::uint32_t y) const { return m_(x, y); }
  const Eigen::MatrixXd& matrix() const { return m_; }
  const Eigen::VectorXd& row_sums() const { return rows_; }
  double total() const { return total_; }

 private:
  Eigen::MatrixXd m_;
  Eigen::VectorXd rows_;
  double total_ = 0.0;
};

struct GreenOptions {
  std::size_t max_dim = 20000;
  double residual_tol = 1e-10;
};

// Throws DimensionError above the cap and SolverError on a bad solve.
GreenOperator compute_green(const LatticeDomain& domain, const GreenOptions& opt = {});

// max over x,y of |(1/4) sum_{z~x} G(z,y) - G(x,y) + delta_xy/4|.
double green_residual(const LatticeDomain& domain, const GreenOperator& g);
double symmetry_defect(const GreenOperator& g);

void write_green_binary(const GreenOperator& g, const std::string& path);
GreenOperator read_green_binary(const std::string& path);

struct KacMoments {
  double second_moment_hitting = 0.0;  // E^x[H_rho^2], continuous time
  double var_fluctuation = 0.0;        // Var U_N(t)
};

KacMoments kac_moments(const GreenOperator& g, const LatticeDomain& domain, std::uint32_t x,
                       double t);

// Potential kernel of the planar walk, midpoint quadrature on an M x M grid
// of (-pi,pi)^2. Values are tabulated on a square of half-width radius() and
// the table grows on demand. Not thread-safe.
class PotentialKernel {
 public:
  explicit PotentialKernel(int M = 2048, int radius = 16);

  int resolution() const { return M_; }
  int radius() const { return R_; }
  double operator()(Site x);

 private:
  void tabulate(int radius);

  int M_;
  int R_ = -1;
  double sum_w_ = 0.0;
  Eigen::MatrixXd w_;      // 1/Dhat at nodes, 0 at an exact origin node
  Eigen::VectorXd nodes_;
  Eigen::MatrixXd table_;  // (R+1) x (R+1), indexed by |x1|,|x2|
};

double potential_kernel(Site x, int M = 2048);

}  // namespace loctime
