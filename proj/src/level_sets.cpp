#include "loctime/level_sets.hpp"

#include <boost/math/quadrature/exp_sinh.hpp>
#include <boost/math/special_functions/gamma.hpp>
#include <cmath>
#include <limits>

#include "loctime/errors.hpp"
#include "loctime/green.hpp"
#include "loctime/rng.hpp"

namespace loctime {

const char* level_kind_name(LevelKind k) {
  switch (k) {
    case LevelKind::thick: return "thick";
    case LevelKind::thin: return "thin";
    case LevelKind::light: return "light";
    case LevelKind::avoided: return "avoided";
  }
  return "?";
}

LevelKind level_kind_from_name(const std::string& s) {
  if (s == "thick") return LevelKind::thick;
  if (s == "thin") return LevelKind::thin;
  if (s == "light") return LevelKind::light;
  if (s == "avoided") return LevelKind::avoided;
  throw ParameterError("unknown level-set kind '" + s + "'");
}

double ScaleSequences::normalizer() const {
  return (kind == LevelKind::thick || kind == LevelKind::thin) ? W_N : W_hat_N;
}

ScaleSequences scale_sequences(int N, double theta, double lambda, LevelKind kind, bool allow_degenerate) {
  if (N < 2) throw ParameterError("N must be >= 2 (log N must be positive)");
  if (!(theta > 0) || !std::isfinite(theta)) throw ParameterError("theta must be positive");
  const double lo = allow_degenerate ? 0.0 : std::numeric_limits<double>::min();
  switch (kind) {
    case LevelKind::thick:
      if (!(lambda >= lo && lambda < 1))
        throw ParameterError("thick points need lambda in (0,1), got " + std::to_string(lambda));
      break;
    case LevelKind::thin: {
      const double cap = std::min(std::sqrt(theta), 1.0);
      if (!(lambda >= lo && lambda < cap))
        throw ParameterError("thin points need lambda in (0, min(sqrt(theta),1)), got " + std::to_string(lambda));
      break;
    }
    case LevelKind::light:
    case LevelKind::avoided:
      if (!(theta < 1))
        throw ParameterError("light/avoided points need theta in (0,1), got " + std::to_string(theta));
      break;
  }
  ScaleSequences s;
  s.N = N;
  s.theta = theta;
  s.lambda = lambda;
  s.kind = kind;
  s.g = kG;
  s.alpha = 2.0 / std::sqrt(kG);
  const double L = std::log(static_cast<double>(N));
  const double N2 = static_cast<double>(N) * N;
  s.t_N = 2 * kG * theta * L * L;
  const double root = kind == LevelKind::thin ? std::sqrt(theta) - lambda : std::sqrt(theta) + lambda;
  s.a_N = 2 * kG * root * root * L * L;
  const double gap = std::sqrt(2 * s.t_N) - std::sqrt(2 * s.a_N);
  s.W_N = N2 / std::sqrt(L) * std::exp(-gap * gap / (2 * kG * L));
  s.W_hat_N = N2 * std::exp(-s.t_N / (kG * L));
  s.a_hat_N = 2 * lambda * std::sqrt(kG) * L;
  s.K_N = N2 / std::sqrt(L) * std::exp(-s.a_hat_N * s.a_hat_N / (2 * kG * L));
  return s;
}

std::size_t PointMeasure::count_at_least(double h) const {
  std::size_t c = 0;
  for (auto& a : atoms)
    if (a.value && *a.value >= h) ++c;
  return c;
}

PointMeasure extract_level_measure(const LocalTimeField& field, const LatticeDomain& domain,
                                   const ScaleSequences& scales, LevelKind kind, std::optional<int> radius) {
  if (radius && *radius < 0) throw ParameterError("profile radius must be >= 0");
  if (scales.N != domain.scale()) throw ParameterError("scale sequences were built for a different N");
  if (scales.kind != kind) throw ParameterError("scale sequences were built for a different kind");
  if (field.mode != TimeMode::discrete || field.values.size() != domain.size() + 1)
    throw ParameterError("level sets need a discrete-time field on this domain");
  if (field.steps != steps_for_time(domain, scales.t_N))
    throw ParameterError("field horizon does not match t_N * deg_total steps");

  PointMeasure m;
  m.kind = kind;
  m.scales = scales;
  m.weight_per_atom = 1.0 / scales.normalizer();
  m.radius = radius.value_or(-1);
  const bool centred = kind == LevelKind::thick || kind == LevelKind::thin;
  const double scale = std::sqrt(2 * scales.a_N);
  const auto& L = field.values;

  for (std::uint32_t v = 0; v < domain.size(); ++v) {
    if (kind == LevelKind::avoided && L[v] != 0.0) continue;
    Atom a;
    a.vertex = v;
    const auto pos = domain.position(v);
    a.x = pos[0];
    a.y = pos[1];
    if (centred) a.value = (L[v] - scales.a_N) / scale;
    if (kind == LevelKind::light) a.value = L[v];
    if (radius) {
      const int r = *radius;
      a.profile.reserve(static_cast<std::size_t>((2 * r + 1) * (2 * r + 1)));
      const Site s = domain.site(v);
      for (int i = -r; i <= r; ++i) {
        for (int j = -r; j <= r; ++j) {
          double Lz = 0.0;
          if (auto w = domain.index_of({s.i + i, s.j + j})) {
            Lz = L[*w];
          } else {
            ++m.outside_reads;
          }
          a.profile.push_back(centred ? (L[v] - Lz) / scale : Lz);
        }
      }
    }
    m.atoms.push_back(std::move(a));
  }
  return m;
}

QSequence q_sequence(double theta, int nmax) {
  if (!(theta > 0 && theta < 1)) throw ParameterError("q_sequence needs theta in (0,1)");
  if (nmax < 0) throw ParameterError("nmax must be >= 0");
  const double c = kPi * theta;  // alpha^2 theta / 8
  QSequence out;
  out.theta = theta;
  out.q.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  out.q[0] = 1.0;
  for (int n = 0; n < nmax; ++n) {
    // term_j = n!/(n-j)! * c^{j+1}/(j!(j+1)!), built by ratios.
    double term = c, sum = 0.0;
    for (int j = 0; j <= n; ++j) {
      sum += term;
      term *= static_cast<double>(n - j) * c / ((j + 1.0) * (j + 2.0));
    }
    if (!std::isfinite(sum)) throw ParameterError("q_n overflows double precision at n=" + std::to_string(n + 1));
    out.q[static_cast<std::size_t>(n) + 1] = sum;
  }
  return out;
}

QSequence q_sequence_bessel(double theta, int nmax) {
  if (!(theta > 0 && theta < 1)) throw ParameterError("q_sequence needs theta in (0,1)");
  if (nmax < 0) throw ParameterError("nmax must be >= 0");
  if (nmax > 170) throw ParameterError("series route limited to nmax <= 170 (factorial range)");
  const double c = kPi * theta;
  // e^t = sum t^k/k!,  (x/(2 sqrt t)) I_1(x sqrt t) = sum c^{j+1} t^j/(j!(j+1)!) with c = x^2/4.
  std::vector<double> e(static_cast<std::size_t>(nmax) + 1), f(static_cast<std::size_t>(nmax) + 1);
  for (int k = 0; k <= nmax; ++k) {
    e[static_cast<std::size_t>(k)] = 1.0 / std::tgamma(k + 1.0);
    f[static_cast<std::size_t>(k)] = std::pow(c, k + 1) / (std::tgamma(k + 1.0) * std::tgamma(k + 2.0));
  }
  QSequence out;
  out.theta = theta;
  out.q.assign(static_cast<std::size_t>(nmax) + 1, 0.0);
  out.q[0] = 1.0;
  // Integrating t^m e^{-(1+s/4)t} gives m!/(1+s/4)^{m+1}, so q_{m+1} = m! b_m.
  for (int m = 0; m + 1 <= nmax; ++m) {
    double b = 0.0;
    for (int j = 0; j <= m; ++j) b += f[static_cast<std::size_t>(j)] * e[static_cast<std::size_t>(m - j)];
    out.q[static_cast<std::size_t>(m) + 1] = std::tgamma(m + 1.0) * b;
  }
  return out;
}

double q_generating_function(const QSequence& q, double s) {
  if (!(s > 0)) throw ParameterError("generating function needs s > 0");
  const double u = 1.0 / (1.0 + s / 4.0);
  double sum = 0.0, pw = 1.0, last = 0.0;
  for (double qn : q.q) {
    last = qn * pw;
    sum += last;
    pw *= u;
  }
  // The terms are eventually decreasing; demand the tail is negligible.
  if (last > 1e-12 * sum) throw ParameterError("q sequence too short for a converged generating function");
  return sum;
}

MuTilde::MuTilde(double theta) : theta_(theta), c_(4.0 * kPi * theta) {
  if (!(theta > 0)) throw ParameterError("mu_tilde needs theta > 0");
}

double MuTilde::density(double h) const {
  if (!(h >= 0)) throw ParameterError("mu_tilde density needs h >= 0");
  const double x = c_ * h;
  double term = c_, sum = 0.0;  // n = 0 term is c'
  for (int n = 0; n < 100000; ++n) {
    sum += term;
    term *= x / ((n + 1.0) * (n + 2.0));
    if (term < 1e-18 * sum && n > x) break;
  }
  return sum;
}

double MuTilde::laplace(double s) const {
  if (!(s > 0)) throw ParameterError("mu_tilde Laplace transform needs s > 0");
  boost::math::quadrature::exp_sinh<double> integrator;
  // The density grows like exp(2 sqrt(c' h)); fold e^{-s h} into the series so
  // far-out nodes give 0 rather than inf * 0.
  auto f = [&](double h) {
    const double damp = std::exp(-s * h);
    if (damp == 0.0) return 0.0;
    const double x = c_ * h;
    double term = c_ * damp, sum = 0.0;
    for (int n = 0; n < 100000; ++n) {
      sum += term;
      term *= x / ((n + 1.0) * (n + 2.0));
      if (term < 1e-18 * sum && n > x) break;
    }
    return sum;
  };
  double err = 0.0;
  const double val = integrator.integrate(f, 0.0, std::numeric_limits<double>::infinity(), 1e-13, &err);
  return 1.0 + val;
}

double MuTilde::laplace_closed_form(double s) const {
  return std::exp(c_ / s);  // alpha^2 theta / (2 s)
}

std::vector<double> resample_exponential_profile(std::span<const double> profile, std::uint64_t seed,
                                                 std::uint64_t replicate) {
  const ExponentialTable tau(seed, replicate, StreamTag::resample);
  std::vector<double> out(profile.size(), 0.0);
  for (std::size_t z = 0; z < profile.size(); ++z) {
    const double four_l = 4.0 * profile[z];
    const double k = std::round(four_l);
    if (!(profile[z] >= 0) || std::abs(four_l - k) > 1e-9)
      throw ParameterError("profile entries must lie in (1/4) N_0");
    double s = 0.0;
    for (std::uint64_t j = 0; j < static_cast<std::uint64_t>(k); ++j) s += tau(z, j);
    out[z] = 0.25 * s;
  }
  return out;
}

double resample_laplace_closed_form(std::span<const double> profile, std::span<const double> t) {
  if (profile.size() != t.size()) throw ParameterError("profile and t differ in length");
  double e = 0.0;
  for (std::size_t z = 0; z < profile.size(); ++z) e += 4.0 * profile[z] * std::log1p(t[z] / 4.0);
  return std::exp(-e);
}

GammaTailResult gamma_tail_inequality_check(int k, double s, double t, GammaLemma which) {
  if (k < 1) throw ParameterError("k must be >= 1");
  GammaTailResult r;
  const double kk = k;
  if (which == GammaLemma::upper) {
    if (!(s >= t && t >= 0)) throw ParameterError("upper-tail bound needs s >= t >= 0");
    r.lhs_ratio = t == 0 ? 1.0 : boost::math::gamma_q(kk, kk + s + t) / boost::math::gamma_q(kk, kk + s);
    r.rhs_bound = std::exp(-s * t / (kk + s + t));
  } else {
    if (!(s >= 0 && t >= 0 && s + t < kk)) throw ParameterError("lower-tail bound needs s,t >= 0 and s+t < k");
    r.lhs_ratio = t == 0 ? 1.0 : boost::math::gamma_p(kk, kk - s - t) / boost::math::gamma_p(kk, kk - s);
    r.rhs_bound = std::exp(-t * (s - 1) / (kk - s));
  }
  r.holds = r.lhs_ratio <= r.rhs_bound + 1e-12;
  return r;
}

}  // namespace loctime
