#include "loctime/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <sstream>

#include "loctime/continuum.hpp"
#include "loctime/errors.hpp"
#include "loctime/gaussian_fields.hpp"
#include "loctime/green.hpp"
#include "loctime/io.hpp"
#include "loctime/lattice_domain.hpp"
#include "loctime/level_sets.hpp"
#include "loctime/parallel.hpp"
#include "loctime/stats.hpp"
#include "loctime/walk.hpp"

namespace loctime {

bool CheckReport::pass() const {
  if (!error.empty() || items.empty()) return false;
  return std::all_of(items.begin(), items.end(), [](const CheckItem& i) { return i.pass; });
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

class Recorder {
 public:
  Recorder(CheckReport& rep, const VerifyOptions& opt) : rep_(rep), opt_(opt) {}

  void add(const std::string& item, double value, double target, double bound, Relation rel) {
    auto it = opt_.overrides.find(rep_.name + "/" + item);
    if (it != opt_.overrides.end()) bound = it->second;
    CheckItem c{item, value, target, bound, rel, false};
    switch (rel) {
      case Relation::abs_within: c.pass = std::abs(value - target) <= bound; break;
      case Relation::rel_within: c.pass = std::abs(value - target) <= bound * std::abs(target); break;
      case Relation::at_most: c.pass = value <= bound; break;
      case Relation::at_least: c.pass = value >= bound; break;
    }
    rep_.items.push_back(c);
  }

 private:
  CheckReport& rep_;
  const VerifyOptions& opt_;
};

LatticeDomain square(int N) { return build_lattice(DomainSpec::unit_square(LatticeRule::cells), N); }

std::uint32_t centre_site(const LatticeDomain& d) {
  return *d.index_of({d.scale() / 2, d.scale() / 2});
}

// SE of the unbiased sample variance, from the fourth central moment.
double variance_se(const std::vector<double>& xs) {
  const Summary s = summarize(xs);
  double m4 = 0.0;
  for (double x : xs) m4 += std::pow(x - s.mean, 4);
  const double n = static_cast<double>(xs.size());
  m4 /= n;
  const double v = s.variance;
  return std::sqrt(std::max(m4 - v * v * (n - 3) / (n - 1), 0.0) / n);
}

void green_exactness(Recorder& r, const VerifyOptions&) {
  const LatticeDomain d = square(64);
  const auto t0 = Clock::now();
  GreenOptions go;
  go.residual_tol = std::numeric_limits<double>::infinity();
  const GreenOperator g = compute_green(d, go);
  const double secs = seconds_since(t0);
  r.add("residual", green_residual(d, g), 0.0, 1e-10, Relation::at_most);
  r.add("symmetry", symmetry_defect(g), 0.0, 1e-10, Relation::at_most);
  r.add("seconds", secs, 0.0, 60.0, Relation::at_most);
}

void green_log_growth(Recorder& r, const VerifyOptions&) {
  const double target = kG * std::log(2.0);
  double prev = 0.0;
  for (int N : {16, 32, 64, 128}) {
    const LatticeDomain d = square(N);
    const std::uint32_t c = centre_site(d);
    const double gcc = GreenSolver(d).column(c)[c];
    if (N > 16) r.add("increment_" + std::to_string(N / 2) + "_" + std::to_string(N), gcc - prev, target, 0.05, Relation::rel_within);
    prev = gcc;
  }
}

void potential_kernel_check(Recorder& r, const VerifyOptions&) {
  PotentialKernel a(2048, 8);
  r.add("a(0,0)", a({0, 0}), 0.0, 0.0, Relation::abs_within);
  r.add("a(1,0)", a({1, 0}), 0.25, 1e-6, Relation::abs_within);
  r.add("a(1,1)", a({1, 1}), 1.0 / kPi, 1e-6, Relation::abs_within);
  double worst = 0.0, origin = 0.0;
  for (int i = -5; i <= 5; ++i) {
    for (int j = -5; j <= 5; ++j) {
      double lap = -4 * a({i, j});
      for (auto s : LatticeDomain::kSteps) lap += a({i + s.i, j + s.j});
      if (i == 0 && j == 0) origin = lap;
      else worst = std::max(worst, std::abs(lap));
    }
  }
  r.add("harmonic_residual", worst, 0.0, 1e-6, Relation::at_most);
  r.add("laplacian_at_origin", origin, 1.0, 1e-6, Relation::abs_within);
}

void zero_average(Recorder& r, const VerifyOptions& opt) {
  const LatticeDomain d = square(16);
  const GreenOperator g = compute_green(d);
  const ZeroAverageProjector proj(g);
  const DgffSampler sampler(g);
  double worst_sum = 0.0;
  for (std::uint64_t k = 0; k < 200; ++k) {
    const ZeroAverageSplit z = proj.decompose(sampler.sample(opt.seed, k));
    double s = 0.0;
    for (double v : z.hat.values) s += v;
    worst_sum = std::max(worst_sum, std::abs(s));
  }
  double sum_d = 0.0;
  for (double v : proj.dN()) sum_d += v;
  double worst_cov = 0.0;
  for (std::uint32_t x = 0; x < d.size(); ++x) worst_cov = std::max(worst_cov, std::abs(proj.covariance_with_average(x)));
  r.add("max_abs_sum_hat", worst_sum, 0.0, 1e-9, Relation::at_most);
  r.add("sum_dN", sum_d, static_cast<double>(d.size()), 1e-9, Relation::abs_within);
  r.add("max_abs_cov_Y_hat", worst_cov, 0.0, 1e-12, Relation::at_most);
}

void ray_knight(Recorder& r, const VerifyOptions& opt) {
  const auto t0 = Clock::now();
  const LatticeDomain d = square(16);
  const GreenOperator g = compute_green(d);
  const RayKnightReport rk = ray_knight_verify(d, g, 4.0, 20000, opt.seed);
  const double secs = seconds_since(t0);
  r.add("mean_lhs_SE", std::abs(rk.z_lhs), 0.0, 3.0, Relation::at_most);
  r.add("mean_rhs_SE", std::abs(rk.z_rhs), 0.0, 3.0, Relation::at_most);
  r.add("ks_pvalue", rk.ks_pvalue, 0.0, 0.01, Relation::at_least);
  r.add("seconds", secs, 0.0, 300.0, Relation::at_most);
}

void time_identity(Recorder& r, const VerifyOptions& opt) {
  const LatticeDomain d = square(32);
  const double t = 4.0;
  std::vector<double> res(1000);
  parallel_for(res.size(), [&](std::size_t k) {
    const LocalTimeField f = run_walk(d, {d.rho(), TimeMode::boundary, t, opt.seed, k});
    const FluctuationRecord rec = fluctuations(f, d, t);
    const double direct = (rec.tau_rho - static_cast<double>(d.deg_total()) * t) / (4.0 * static_cast<double>(d.size()));
    res[k] = std::max(time_identity_check(f, rec, d), std::abs(direct - rec.U));
  });
  r.add("max_residual", *std::max_element(res.begin(), res.end()), 0.0, 1e-9, Relation::at_most);
}

void variance(Recorder& r, const VerifyOptions& opt) {
  const LatticeDomain d = square(16);
  const GreenOperator g = compute_green(d);
  const double t = 2.0;
  const std::uint32_t x = centre_site(d);
  const KacMoments kac = kac_moments(g, d, x, t);
  const std::size_t reps = 20000;
  std::vector<double> U(reps), H2(reps);
  parallel_for(reps, [&](std::size_t k) {
    const LocalTimeField f = run_walk(d, {d.rho(), TimeMode::boundary, t, opt.seed, k});
    U[k] = fluctuations(f, d, t).U;
    const LocalTimeField h = run_walk(d, {x, TimeMode::boundary, 0.0, opt.seed + 1, k});
    H2[k] = h.elapsed * h.elapsed;
  });
  const double var = summarize(U).variance;
  r.add("var_U_SE", std::abs(var - kac.var_fluctuation) / variance_se(U), 0.0, 3.0, Relation::at_most);
  const Summary h2 = summarize(H2);
  r.add("hitting_second_moment_SE", std::abs(h2.mean - kac.second_moment_hitting) / h2.se, 0.0, 3.0, Relation::at_most);
}

void sandwich(Recorder& r, const VerifyOptions& opt) {
  const LatticeDomain d = square(64);
  const SandwichReport s = sandwich_check(d, 1.0, std::log(64.0), opt.seed, 1000);
  r.add("fraction", s.fraction, 0.0, 0.90, Relation::at_least);
}

void q_suite(Recorder& r, const VerifyOptions&) {
  r.add("q0", q_sequence(0.2, 1).q[0], 1.0, 0.0, Relation::abs_within);
  r.add("q1(theta=0.2)", q_sequence(0.2, 1).q[1], kPi * 0.2, 1e-12, Relation::abs_within);
  r.add("q1(theta=0.5)", q_sequence(0.5, 1).q[1], kPi * 0.5, 1e-12, Relation::abs_within);
  const QSequence q = q_sequence(0.2, 200);
  const double alpha2 = 4.0 / kG;
  for (double s : {1.0, 2.0, 4.0}) {
    std::ostringstream nm;
    nm << "generating_function(s=" << s << ")";
    r.add(nm.str(), q_generating_function(q, s), std::exp(alpha2 * 0.2 / (2 * s)), 1e-8, Relation::abs_within);
  }
  const QSequence a = q_sequence(0.2, 50), b = q_sequence_bessel(0.2, 50);
  double worst = 0.0;
  for (std::size_t n = 0; n < a.q.size(); ++n) worst = std::max(worst, std::abs(a.q[n] - b.q[n]));
  r.add("bessel_route_max_diff", worst, 0.0, 1e-10, Relation::at_most);
}

void mu_tilde(Recorder& r, const VerifyOptions&) {
  const double alpha2 = 4.0 / kG;
  for (double theta : {0.2, 0.5}) {
    const MuTilde mu(theta);
    for (double s : {0.5, 1.0, 2.0}) {
      std::ostringstream nm;
      nm << "laplace(theta=" << theta << ",s=" << s << ")";
      r.add(nm.str(), mu.laplace(s), std::exp(alpha2 * theta / (2 * s)), 1e-6, Relation::abs_within);
    }
  }
}

void covariance_algebra(Recorder& r, const VerifyOptions&) {
  PotentialKernel a(2048, 12);
  const PinnedRelationReport rep = verify_pinned_relation(5, a);
  r.add("max_identity_error", rep.max_identity_error, 0.0, 1e-9, Relation::at_most);
  r.add("min_eigenvalue", rep.min_eigenvalue, 0.0, -1e-8, Relation::at_least);
  const CovarianceWindow w = local_covariance(CovarianceKind::tilde, 5, a);
  const auto o = static_cast<Eigen::Index>(w.origin());
  r.add("origin_row_max", std::max(w.matrix.row(o).cwiseAbs().maxCoeff(), w.matrix.col(o).cwiseAbs().maxCoeff()), 0.0,
        1e-14, Relation::at_most);
}

void gamma_tail(Recorder& r, const VerifyOptions&) {
  int violations = 0, cases = 0;
  double worst = -1.0;
  for (int k : {5, 10, 20, 50}) {
    for (double s : {0.5, 1.0, 2.0, 5.0}) {
      for (double t : {0.5, 1.0, 2.0, 5.0}) {
        for (GammaLemma which : {GammaLemma::upper, GammaLemma::lower}) {
          const bool ok = which == GammaLemma::upper ? s >= t : s + t < k;
          if (!ok) continue;
          const GammaTailResult g = gamma_tail_inequality_check(k, s, t, which);
          ++cases;
          violations += !g.holds;
          worst = std::max(worst, g.lhs_ratio - g.rhs_bound);
        }
      }
    }
  }
  r.add("violations", violations, 0.0, 0.0, Relation::at_most);
  r.add("cases", cases, 0.0, 1.0, Relation::at_least);
  r.add("max_lhs_minus_rhs", worst, 0.0, 1e-12, Relation::at_most);
}

void d_function(Recorder& r, const VerifyOptions&) {
  const DomainSpec spec = DomainSpec::unit_square(LatticeRule::cells);
  const int sigma_scale = 512;
  const double sigma2 = sigma_D2(build_lattice(spec, sigma_scale));
  const ContinuumGrid pois = d_function_poisson(spec, 128, sigma2, sigma_scale);
  const ContinuumGrid green = d_function_green(build_lattice(spec, 128));
  r.add("integral_poisson", pois.integral(), spec.area(), 0.01, Relation::rel_within);
  r.add("integral_green", green.integral(), spec.area(), 0.01, Relation::rel_within);
  r.add("min_poisson", pois.min_value(), 0.0, -1e-9, Relation::at_least);
  r.add("min_green", green.min_value(), 0.0, -1e-9, Relation::at_least);
  r.add("sup_difference", sup_difference(green, pois), 0.0, 0.05, Relation::at_most);
  r.add("poisson_residual", poisson_residual(pois, spec), 0.0, 1e-8, Relation::at_most);
}

void trends(Recorder& r, const VerifyOptions& opt) {
  {
    const int N = 256;
    const LatticeDomain d = square(N);
    const ScaleSequences sc = scale_sequences(N, 1.0, 0.5, LevelKind::thick);
    const auto steps = static_cast<double>(steps_for_time(d, sc.t_N));
    const double L2 = std::pow(std::log(static_cast<double>(N)), 2);
    std::vector<double> mx(50), mn(50);
    parallel_for(mx.size(), [&](std::size_t k) {
      const LocalTimeField f = run_walk(d, {d.rho(), TimeMode::discrete, steps, opt.seed, k});
      const auto b = f.values.begin(), e = f.values.end() - 1;
      mx[k] = *std::max_element(b, e) / L2;
      mn[k] = *std::min_element(b, e) / L2;
    });
    const double med_max = quantile(mx, 0.5);
    r.add("median_max_over_8g", med_max / (8 * kG), 1.0, 0.3, Relation::abs_within);
    r.add("median_min_over_2g", quantile(mn, 0.5) / (2 * kG), 0.0, 0.1, Relation::at_most);
  }
  std::vector<double> medians;
  for (int N : {64, 128, 256}) {
    const LatticeDomain d = square(N);
    const ScaleSequences sc = scale_sequences(N, 0.3, 0.0, LevelKind::avoided);
    const auto steps = static_cast<double>(steps_for_time(d, sc.t_N));
    std::vector<double> mass(200);
    parallel_for(mass.size(), [&](std::size_t k) {
      const LocalTimeField f = run_walk(d, {d.rho(), TimeMode::discrete, steps, opt.seed + 7, k});
      mass[k] = extract_level_measure(f, d, sc, LevelKind::avoided).total_mass();
    });
    medians.push_back(quantile(mass, 0.5));
    r.add("avoided_median_N" + std::to_string(N), medians.back(), 0.0, 0.0, Relation::at_least);
  }
  const double spread = *std::max_element(medians.begin(), medians.end()) / *std::min_element(medians.begin(), medians.end());
  r.add("avoided_max_over_min", spread, 1.0, 2.0, Relation::at_most);
}

void resampling(Recorder& r, const VerifyOptions& opt) {
  const std::vector<double> profile{0.25, 1.0, 2.5};
  const std::vector<double> t{0.5, 1.0, 2.0};
  const std::size_t draws = 20000;
  std::vector<double> v(draws), m0(draws);
  for (std::size_t k = 0; k < draws; ++k) {
    const auto out = resample_exponential_profile(profile, opt.seed, k);
    double e = 0.0;
    for (std::size_t z = 0; z < 3; ++z) e += t[z] * out[z];
    v[k] = std::exp(-e);
    m0[k] = out[2];
  }
  const Summary s = summarize(v);
  const double exact = resample_laplace_closed_form(profile, t);
  r.add("laplace_SE", std::abs(s.mean - exact) / s.se, 0.0, 3.0, Relation::at_most);
  const Summary s0 = summarize(m0);
  r.add("mean_SE", std::abs(s0.mean - profile[2]) / s0.se, 0.0, 3.0, Relation::at_most);
}

struct Entry {
  const char* name;
  const char* title;
  std::function<void(Recorder&, const VerifyOptions&)> fn;
};

const std::vector<Entry>& registry() {
  static const std::vector<Entry> r{
      {"green-exactness", "Green function: defining system and symmetry on the 64x64 box", green_exactness},
      {"green-log-growth", "G(centre,centre) grows by g log 2 per doubling", green_log_growth},
      {"potential-kernel", "potential kernel values and harmonicity", potential_kernel_check},
      {"zero-average", "zero-average decomposition identities", zero_average},
      {"ray-knight", "second Ray-Knight identity at one vertex", ray_knight},
      {"time-identity", "pathwise boundary-time identity", time_identity},
      {"variance", "Var U_N(t) and E H_rho^2 against Kac formulas", variance},
      {"sandwich", "local-time sandwich around t_circ", sandwich},
      {"q-sequence", "q_n closed form, generating function, series route", q_suite},
      {"mu-tilde", "mu-tilde Laplace transform", mu_tilde},
      {"covariance-algebra", "tilde vs pinned covariance, positive semidefiniteness", covariance_algebra},
      {"gamma-tail", "incomplete-gamma tail ratio bounds", gamma_tail},
      {"d-function", "d-function: green route vs poisson route", d_function},
      {"trends", "max/min local time and avoided-mass trends", trends},
      {"resampling", "exponential resampling Laplace functional", resampling},
  };
  return r;
}

}  // namespace

const std::vector<std::string>& check_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (auto& e : registry()) v.push_back(e.name);
    return v;
  }();
  return names;
}

bool is_check(const std::string& name) {
  const auto& n = check_names();
  return std::find(n.begin(), n.end(), name) != n.end();
}

CheckReport run_check(const std::string& name, const VerifyOptions& opt) {
  for (auto& e : registry()) {
    if (name != e.name) continue;
    CheckReport rep;
    rep.name = e.name;
    rep.title = e.title;
    Recorder rec(rep, opt);
    const auto t0 = Clock::now();
    try {
      e.fn(rec, opt);
    } catch (const std::exception& ex) {
      rep.error = ex.what();
    }
    rep.seconds = seconds_since(t0);
    return rep;
  }
  throw ParameterError("unknown check '" + name + "'");
}

std::string describe(const CheckItem& i) {
  std::ostringstream s;
  s.precision(10);
  s << i.name << " = " << i.value;
  switch (i.relation) {
    case Relation::abs_within: s << "  target " << i.target << " +- " << i.bound; break;
    case Relation::rel_within: s << "  target " << i.target << " within " << i.bound * 100 << "%"; break;
    case Relation::at_most: s << "  <= " << i.bound; break;
    case Relation::at_least: s << "  >= " << i.bound; break;
  }
  s << (i.pass ? "  ok" : "  FAIL");
  return s.str();
}

std::string format_report(const CheckReport& r) {
  std::ostringstream s;
  s << (r.pass() ? "[PASS] " : "[FAIL] ") << r.name << " - " << r.title << " (" << std::fixed;
  s.precision(1);
  s << r.seconds << " s)\n";
  for (auto& i : r.items) s << "    " << describe(i) << "\n";
  if (!r.error.empty()) s << "    error: " << r.error << "\n";
  return s.str();
}

}  // namespace loctime
