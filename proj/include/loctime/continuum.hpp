#pragma once

#include <array>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "loctime/green.hpp"
#include "loctime/lattice_domain.hpp"

namespace loctime {

// Var(Y_N) = |D_N|^{-2} sum_{x,y} G(x,y), the finite-N stand-in for sigma_D^2.
double sigma_D2(const GreenOperator& green, const LatticeDomain& domain);
// Same number from one sparse solve, for domains past the dense cap.
double sigma_D2(const LatticeDomain& domain);

enum class GridQuantity { d_function, green_slice };

struct ContinuumGrid {
  GridQuantity quantity = GridQuantity::d_function;
  std::string route;          // "green" or "poisson"
  int resolution = 0;         // N or M
  double sigma2 = 0.0;        // sigma_D^2 used (poisson) or implied (green)
  int sigma_scale = 0;        // N at which sigma2 was computed
  double cell_area = 0.0;
  std::array<double, 2> origin{0.0, 0.0};  // anchor of the square (poisson)
  std::vector<std::array<double, 2>> points;
  std::vector<double> values;

  double integral() const;
  double min_value() const;
};

// d_N(x) = |D_N| sum_y G(x,y) / sum_{z,y} G(z,y), at each site's representative point.
ContinuumGrid d_function_green(const LatticeDomain& domain, const GreenOperator& green);
ContinuumGrid d_function_green(const LatticeDomain& domain);

// Cell-centred finite differences for -Lap d = Leb(D)/sigma2 with zero
// Dirichlet data, on an M x M grid. Unit square only.
ContinuumGrid d_function_poisson(const DomainSpec& spec, int M, double sigma2, int sigma_scale = 0);

// max |Lap_h d + Leb(D)/sigma2| over the grid, same stencil as the solve.
double poisson_residual(const ContinuumGrid& grid, const DomainSpec& spec);

// Bilinear read of a poisson grid (zero on the boundary of the square).
double interpolate_poisson(const ContinuumGrid& grid, double x, double y);

// max over the points of `lattice` of |lattice - poisson interpolated there|.
double sup_difference(const ContinuumGrid& lattice, const ContinuumGrid& poisson);

// G^{D_N}(floor(xN), floor(yN)), solves cached per (N, column).
class ContinuumGreenEstimator {
 public:
  explicit ContinuumGreenEstimator(DomainSpec spec);
  double operator()(std::array<double, 2> x, std::array<double, 2> y, int N);

 private:
  struct Level;
  DomainSpec spec_;
  std::map<int, std::shared_ptr<Level>> levels_;
};

double continuum_green_estimate(const DomainSpec& spec, std::array<double, 2> x, std::array<double, 2> y, int N);

}  // namespace loctime
