#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <vector>

#include "loctime/green.hpp"
#include "loctime/rng.hpp"

namespace loctime {

struct FieldSample {
  std::vector<double> values;  // over D_N, in vertex order
  std::uint64_t seed = 0;
  std::uint64_t replicate = 0;
  double average = 0.0;        // Y = mean of values
  bool zero_average = false;
};

// DGFF sampler: h = C z with G = C C^T (dense Cholesky).
class DgffSampler {
 public:
  explicit DgffSampler(const GreenOperator& green, std::size_t max_dim = 5000);

  std::size_t size() const { return static_cast<std::size_t>(factor_.rows()); }
  bool jittered() const { return jittered_; }
  const Eigen::MatrixXd& factor() const { return factor_; }

  // Deterministic in (seed, replicate, tag).
  FieldSample sample(std::uint64_t seed, std::uint64_t replicate,
                     StreamTag tag = StreamTag::field) const;

 private:
  Eigen::MatrixXd factor_;  // lower triangular
  bool jittered_ = false;
};

std::vector<FieldSample> sample_dgff(const GreenOperator& green, std::uint64_t seed, std::size_t count);

struct ZeroAverageSplit {
  double Y = 0.0;
  FieldSample hat;
  std::vector<double> dN;
};

// h = hat + dN * Y with Y independent of hat.
class ZeroAverageProjector {
 public:
  explicit ZeroAverageProjector(const GreenOperator& green);

  const std::vector<double>& dN() const { return dN_; }
  double var_average() const { return var_y_; }
  ZeroAverageSplit decompose(const FieldSample& sample) const;
  // cov(Y, hat_x) computed from G alone; zero up to rounding.
  double covariance_with_average(std::uint32_t x) const;

 private:
  std::vector<double> dN_;
  std::vector<double> rows_;
  double var_y_ = 0.0;
  double n_ = 0.0;
};

ZeroAverageSplit zero_average_decompose(const FieldSample& sample, const GreenOperator& green);

enum class CovarianceKind { pinned, tilde };

// Covariance on the window {|z|_inf <= r}, offsets in row-major order.
struct CovarianceWindow {
  int radius = 1;
  CovarianceKind kind = CovarianceKind::pinned;
  std::vector<Site> offsets;
  Eigen::MatrixXd matrix;

  std::size_t index_of(Site z) const;
  std::size_t origin() const { return index_of({0, 0}); }
};

CovarianceWindow local_covariance(CovarianceKind kind, int r, PotentialKernel& a);

struct PinnedRelationReport {
  double max_identity_error = 0.0;
  double min_eigenvalue = 0.0;
};

PinnedRelationReport verify_pinned_relation(int r, PotentialKernel& a);

}  // namespace loctime
