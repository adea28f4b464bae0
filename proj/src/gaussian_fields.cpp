#include "loctime/gaussian_fields.hpp"

#include <Eigen/Eigenvalues>
#include <numeric>

#include "loctime/errors.hpp"

namespace loctime {

DgffSampler::DgffSampler(const GreenOperator& green, std::size_t max_dim) {
  if (green.size() == 0) throw ParameterError("empty Green operator");
  if (green.size() > max_dim)
    throw DimensionError("field sampling capped at |D_N|=" + std::to_string(max_dim));
  Eigen::LLT<Eigen::MatrixXd> llt(green.matrix());
  if (llt.info() != Eigen::Success) {
    const auto n = static_cast<double>(green.size());
    const double jitter = 1e-12 * green.matrix().trace() / n;
    Eigen::MatrixXd m = green.matrix();
    m.diagonal().array() += jitter;
    llt.compute(m);
    if (llt.info() != Eigen::Success)
      throw SolverError("Cholesky of the Green matrix failed even with jitter", jitter);
    jittered_ = true;
  }
  factor_ = llt.matrixL();
}

FieldSample DgffSampler::sample(std::uint64_t seed, std::uint64_t replicate, StreamTag tag) const {
  RandomStream rng(seed, replicate, tag);
  const auto n = factor_.rows();
  Eigen::VectorXd z(n);
  for (Eigen::Index i = 0; i < n; ++i) z[i] = rng.normal();
  const Eigen::VectorXd h = factor_.triangularView<Eigen::Lower>() * z;
  FieldSample s;
  s.values.assign(h.data(), h.data() + n);
  s.seed = seed;
  s.replicate = replicate;
  s.average = h.mean();
  return s;
}

std::vector<FieldSample> sample_dgff(const GreenOperator& green, std::uint64_t seed, std::size_t count) {
  if (count < 1) throw ParameterError("sample_dgff: count must be >= 1");
  DgffSampler sampler(green);
  std::vector<FieldSample> out;
  out.reserve(count);
  for (std::size_t r = 0; r < count; ++r) out.push_back(sampler.sample(seed, r));
  return out;
}

ZeroAverageProjector::ZeroAverageProjector(const GreenOperator& green) {
  const auto& rows = green.row_sums();
  n_ = static_cast<double>(green.size());
  const double total = green.total();
  rows_.assign(rows.data(), rows.data() + rows.size());
  dN_.resize(rows_.size());
  for (std::size_t x = 0; x < rows_.size(); ++x) dN_[x] = n_ * rows_[x] / total;
  var_y_ = total / (n_ * n_);
}

ZeroAverageSplit ZeroAverageProjector::decompose(const FieldSample& sample) const {
  if (sample.values.size() != dN_.size()) throw ParameterError("sample does not match the Green operator");
  ZeroAverageSplit out;
  out.Y = std::accumulate(sample.values.begin(), sample.values.end(), 0.0) / n_;
  out.dN = dN_;
  out.hat = sample;
  for (std::size_t x = 0; x < dN_.size(); ++x) out.hat.values[x] -= dN_[x] * out.Y;
  out.hat.zero_average = true;
  out.hat.average = std::accumulate(out.hat.values.begin(), out.hat.values.end(), 0.0) / n_;
  return out;
}

double ZeroAverageProjector::covariance_with_average(std::uint32_t x) const {
  return rows_[x] / n_ - dN_[x] * var_y_;
}

ZeroAverageSplit zero_average_decompose(const FieldSample& sample, const GreenOperator& green) {
  return ZeroAverageProjector(green).decompose(sample);
}

std::size_t CovarianceWindow::index_of(Site z) const {
  if (std::abs(z.i) > radius || std::abs(z.j) > radius) throw ParameterError("offset outside the window");
  const int w = 2 * radius + 1;
  return static_cast<std::size_t>((z.i + radius) * w + (z.j + radius));
}

CovarianceWindow local_covariance(CovarianceKind kind, int r, PotentialKernel& a) {
  if (r < 1) throw ParameterError("window radius must be >= 1");
  CovarianceWindow w;
  w.radius = r;
  w.kind = kind;
  for (int i = -r; i <= r; ++i)
    for (int j = -r; j <= r; ++j) w.offsets.push_back({i, j});
  const auto m = static_cast<Eigen::Index>(w.offsets.size());
  w.matrix.resize(m, m);
  for (Eigen::Index p = 0; p < m; ++p) {
    for (Eigen::Index q = 0; q < m; ++q) {
      const Site x = w.offsets[static_cast<std::size_t>(p)];
      const Site y = w.offsets[static_cast<std::size_t>(q)];
      double c = a(x) + a(y) - a({x.i - y.i, x.j - y.j});
      if (kind == CovarianceKind::tilde) {
        const bool x0 = x == Site{0, 0}, y0 = y == Site{0, 0};
        c -= 0.125 * (1.0 - x0 - y0 + (x == y));
      }
      w.matrix(p, q) = c;
    }
  }
  return w;
}

PinnedRelationReport verify_pinned_relation(int r, PotentialKernel& a) {
  const CovarianceWindow pinned = local_covariance(CovarianceKind::pinned, r, a);
  const CovarianceWindow tilde = local_covariance(CovarianceKind::tilde, r, a);
  PinnedRelationReport rep;
  const auto m = tilde.matrix.rows();
  for (Eigen::Index p = 0; p < m; ++p) {
    for (Eigen::Index q = 0; q < m; ++q) {
      const Site x = tilde.offsets[static_cast<std::size_t>(p)];
      const Site y = tilde.offsets[static_cast<std::size_t>(q)];
      const bool x0 = x == Site{0, 0}, y0 = y == Site{0, 0};
      const double corr = 0.125 * (1.0 - x0 - y0 + (x == y));
      rep.max_identity_error =
          std::max(rep.max_identity_error, std::abs(tilde.matrix(p, q) + corr - pinned.matrix(p, q)));
    }
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(tilde.matrix, Eigen::EigenvaluesOnly);
  rep.min_eigenvalue = eig.eigenvalues().minCoeff();
  return rep;
}

}  // namespace loctime
