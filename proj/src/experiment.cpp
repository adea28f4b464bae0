#include "loctime/experiment.hpp"

#include <cmath>
#include <limits>
#include <map>

#include "loctime/errors.hpp"
#include "loctime/green.hpp"
#include "loctime/io.hpp"
#include "loctime/level_sets.hpp"
#include "loctime/parallel.hpp"
#include "loctime/stats.hpp"
#include "loctime/walk.hpp"

namespace loctime {

const char* experiment_kind_name(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::thick: return "thick";
    case ExperimentKind::thin: return "thin";
    case ExperimentKind::light: return "light";
    case ExperimentKind::avoided: return "avoided";
    case ExperimentKind::cover: return "cover";
    case ExperimentKind::rayknight: return "rayknight";
    case ExperimentKind::sandwich: return "sandwich";
  }
  return "?";
}

ExperimentKind experiment_kind_from_name(const std::string& s) {
  for (auto k : {ExperimentKind::thick, ExperimentKind::thin, ExperimentKind::light, ExperimentKind::avoided,
                 ExperimentKind::cover, ExperimentKind::rayknight, ExperimentKind::sandwich})
    if (s == experiment_kind_name(k)) return k;
  throw ParameterError("unknown experiment kind '" + s +
                       "' (expected thick|thin|light|avoided|cover|rayknight|sandwich)");
}

const char* start_rule_name(StartRule r) {
  switch (r) {
    case StartRule::boundary: return "boundary";
    case StartRule::vertex: return "vertex";
    case StartRule::arbitrary: return "arbitrary";
  }
  return "?";
}

StartRule start_rule_from_name(const std::string& s) {
  if (s == "boundary") return StartRule::boundary;
  if (s == "vertex") return StartRule::vertex;
  if (s == "arbitrary") return StartRule::arbitrary;
  throw ParameterError("unknown start rule '" + s + "' (expected boundary|vertex|arbitrary)");
}

namespace {

bool is_level(ExperimentKind k) {
  return k == ExperimentKind::thick || k == ExperimentKind::thin || k == ExperimentKind::light ||
         k == ExperimentKind::avoided;
}

LevelKind as_level(ExperimentKind k) {
  switch (k) {
    case ExperimentKind::thick: return LevelKind::thick;
    case ExperimentKind::thin: return LevelKind::thin;
    case ExperimentKind::light: return LevelKind::light;
    default: return LevelKind::avoided;
  }
}

}  // namespace

void ExperimentConfig::validate() const {
  domain.validate();
  if (N < 2) throw ParameterError("N must be >= 2");
  if (reps < 1) throw ParameterError("reps must be >= 1");
  if (radius < -1) throw ParameterError("radius must be >= 0 (or -1 for no profiles)");
  if (histogram_max < 0) throw ParameterError("histogram_max must be >= 0");
  if (is_level(kind)) scale_sequences(N, theta, lambda, as_level(kind));
  if (kind == ExperimentKind::sandwich && !(theta > 0)) throw ParameterError("theta must be positive");
  if (kind == ExperimentKind::sandwich && b_N < 0) throw ParameterError("b_N must be >= 0");
  if (kind == ExperimentKind::rayknight && !(t >= 0)) throw ParameterError("t must be >= 0");
}

nlohmann::json ExperimentConfig::to_json() const {
  nlohmann::json j;
  j["domain"] = loctime::to_json(domain);
  j["N"] = N;
  j["kind"] = experiment_kind_name(kind);
  j["theta"] = theta;
  j["lambda"] = lambda;
  j["reps"] = reps;
  j["seed"] = seed;
  j["start"] = start_rule_name(start);
  j["start_site"] = {start_site.i, start_site.j};
  j["radius"] = radius;
  j["atoms"] = atoms;
  j["histogram_max"] = histogram_max;
  j["t"] = t;
  j["b_N"] = b_N;
  j["out"] = out;
  return j;
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  if (j.contains("domain")) c.domain = domain_spec_from_json(j["domain"]);
  c.N = j.value("N", c.N);
  if (j.contains("kind")) c.kind = experiment_kind_from_name(j["kind"].get<std::string>());
  c.theta = j.value("theta", c.theta);
  c.lambda = j.value("lambda", c.lambda);
  c.reps = j.value("reps", c.reps);
  c.seed = j.value("seed", c.seed);
  if (j.contains("start")) c.start = start_rule_from_name(j["start"].get<std::string>());
  if (j.contains("start_site")) {
    auto s = j["start_site"].get<std::array<int, 2>>();
    c.start_site = {s[0], s[1]};
  }
  c.radius = j.value("radius", c.radius);
  c.atoms = j.value("atoms", c.atoms);
  c.histogram_max = j.value("histogram_max", c.histogram_max);
  c.t = j.value("t", c.t);
  c.b_N = j.value("b_N", c.b_N);
  c.out = j.value("out", c.out);
  return c;
}

std::uint64_t ExperimentConfig::hash() const {
  nlohmann::json j = to_json();
  j.erase("out");
  return fnv1a(j.dump());
}

std::uint32_t resolve_start(const LatticeDomain& domain, const DomainSpec& spec, StartRule rule, Site site) {
  switch (rule) {
    case StartRule::boundary:
      return domain.rho();
    case StartRule::vertex: {
      auto v = domain.index_of(site);
      if (!v) throw ParameterError("start site is not in D_N");
      return *v;
    }
    case StartRule::arbitrary: {
      const auto b = spec.bounds();
      const double cx = b[0] * domain.scale(), cy = b[1] * domain.scale();
      std::uint32_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::uint32_t v = 0; v < domain.size(); ++v) {
        const double d = std::hypot(domain.site(v).i - cx, domain.site(v).j - cy);
        if (d < bd) {
          bd = d;
          best = v;
        }
      }
      return best;
    }
  }
  return domain.rho();
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  const LatticeDomain domain = build_lattice(config.domain, config.N);
  const std::uint32_t start = resolve_start(domain, config.domain, config.start, config.start_site);
  const CsvMeta meta{config.seed, config.hash()};
  const double logN = std::log(static_cast<double>(config.N));
  const std::size_t reps = config.reps;

  std::vector<std::string> header{"replicate"};
  std::vector<std::vector<double>> rows(reps);
  nlohmann::json extra = nlohmann::json::object();
  std::vector<PointMeasure> measures;

  if (is_level(config.kind)) {
    const LevelKind lk = as_level(config.kind);
    const ScaleSequences sc = scale_sequences(config.N, config.theta, config.lambda, lk);
    const std::uint64_t steps = steps_for_time(domain, sc.t_N);
    header.insert(header.end(), {"steps", "atoms", "total_mass", "core_mass", "max_L_norm", "min_L_norm"});
    for (int k = 0; k <= config.histogram_max; ++k) header.push_back("hist_" + std::to_string(k));
    if (config.atoms) measures.resize(reps);
    std::optional<int> radius;
    if (config.radius >= 0) radius = config.radius;
    parallel_for(reps, [&](std::size_t r) {
      const LocalTimeField f =
          run_walk(domain, {start, TimeMode::discrete, static_cast<double>(steps), config.seed, r});
      PointMeasure m = extract_level_measure(f, domain, sc, lk, radius);
      std::size_t core = 0;
      for (auto& a : m.atoms) {
        if (lk == LevelKind::avoided) ++core;
        else if (lk == LevelKind::thick && *a.value >= 0) ++core;
        else if (lk == LevelKind::thin && *a.value <= 0) ++core;
        else if (lk == LevelKind::light && *a.value <= 1.0) ++core;
      }
      double mx = 0.0, mn = std::numeric_limits<double>::infinity();
      std::vector<double> hist(static_cast<std::size_t>(config.histogram_max) + 1, 0.0);
      for (std::uint32_t v = 0; v < domain.size(); ++v) {
        mx = std::max(mx, f.values[v]);
        mn = std::min(mn, f.values[v]);
        const auto k = static_cast<long long>(std::llround(4.0 * f.values[v]));
        if (k <= config.histogram_max) hist[static_cast<std::size_t>(k)] += 1.0;
      }
      std::vector<double> row{static_cast<double>(r), static_cast<double>(steps), static_cast<double>(m.atoms.size()),
                              m.total_mass(), m.weight_per_atom * static_cast<double>(core), mx / (logN * logN),
                              mn / (logN * logN)};
      row.insert(row.end(), hist.begin(), hist.end());
      rows[r] = std::move(row);
      if (config.atoms) measures[r] = std::move(m);
    });
    extra["t_N"] = sc.t_N;
    extra["a_N"] = sc.a_N;
    extra["normalizer"] = sc.normalizer();
  } else if (config.kind == ExperimentKind::cover) {
    header.insert(header.end(), {"cover_steps", "normalized"});
    const double scale = 4.0 / kPi * config.N * config.N * logN * logN;
    parallel_for(reps, [&](std::size_t r) {
      const auto steps = cover_time(domain, start, config.seed, r);
      rows[r] = {static_cast<double>(r), static_cast<double>(steps), static_cast<double>(steps) / scale};
    });
  } else if (config.kind == ExperimentKind::rayknight) {
    if (reps < 2) throw ParameterError("rayknight needs reps >= 2");
    const GreenOperator g = compute_green(domain);
    const RayKnightReport rk = ray_knight_verify(domain, g, config.t, reps, config.seed);
    header.insert(header.end(), {"lhs", "rhs"});
    for (std::size_t r = 0; r < reps; ++r) rows[r] = {static_cast<double>(r), rk.lhs[r], rk.rhs[r]};
    extra["vertex"] = rk.vertex;
    extra["exact_mean"] = rk.exact_mean;
    extra["z_lhs"] = rk.z_lhs;
    extra["z_rhs"] = rk.z_rhs;
    extra["ks_statistic"] = rk.ks_statistic;
    extra["ks_pvalue"] = rk.ks_pvalue;
  } else {
    const double theta = config.theta;
    const double t = 2 * kG * theta * logN * logN;
    const double b = config.b_N > 0 ? config.b_N : logN;
    header.insert(header.end(), {"holds", "clipped", "t_circ", "t_star", "lower", "upper"});
    parallel_for(reps, [&](std::size_t r) {
      const SandwichOutcome o = sandwich_once(domain, t, b, config.seed, r);
      rows[r] = {static_cast<double>(r), o.holds ? 1.0 : 0.0, o.clipped ? 1.0 : 0.0, o.t_circ, o.t_star, o.lower,
                 o.upper};
    });
    extra["t"] = t;
    extra["b_N"] = b;
  }

  ExperimentResult res;
  res.csv_path = config.out + ".csv";
  res.summary_path = config.out + ".summary.json";
  {
    CsvWriter w(res.csv_path, meta, header);
    for (auto& row : rows) {
      std::vector<std::string> cells;
      cells.reserve(row.size());
      for (std::size_t c = 0; c < row.size(); ++c)
        cells.push_back(c == 0 ? std::to_string(static_cast<std::uint64_t>(row[c])) : fmt(row[c]));
      w.row(cells);
    }
  }
  if (config.atoms && !measures.empty()) {
    res.atoms_path = config.out + ".atoms.csv";
    // One file: replicates concatenated after a single header.
    std::vector<std::string> h{"replicate", "kind", "x", "y", "h", "weight"};
    if (config.radius >= 0)
      for (int i = -config.radius; i <= config.radius; ++i)
        for (int j = -config.radius; j <= config.radius; ++j) h.push_back("p_" + std::to_string(i) + "_" + std::to_string(j));
    CsvWriter w(res.atoms_path, meta, h);
    for (std::size_t r = 0; r < measures.size(); ++r) {
      for (auto& a : measures[r].atoms) {
        std::vector<std::string> cells{std::to_string(r), level_kind_name(measures[r].kind), fmt(a.x), fmt(a.y),
                                       a.value ? fmt(*a.value) : "", fmt(measures[r].weight_per_atom)};
        for (double p : a.profile) cells.push_back(fmt(p));
        w.row(cells);
      }
    }
  }

  nlohmann::json summary;
  summary["version"] = LOCTIME_VERSION;
  summary["config"] = config.to_json();
  summary["config_hash"] = hex64(meta.config_hash);
  summary["lattice"] = {{"size", domain.size()}, {"deg_rho", domain.deg_rho()}, {"deg_total", domain.deg_total()},
                        {"start", start == domain.rho() ? std::string("rho") : std::to_string(start)}};
  nlohmann::json cols = nlohmann::json::object();
  for (std::size_t c = 1; c < header.size(); ++c) {
    std::vector<double> v;
    v.reserve(reps);
    for (auto& row : rows) v.push_back(row[c]);
    cols[header[c]] = {{"median", quantile(v, 0.5)}, {"q25", quantile(v, 0.25)}, {"q75", quantile(v, 0.75)}};
  }
  summary["columns"] = cols;
  summary["extra"] = extra;
  write_text(res.summary_path, summary.dump(2) + "\n");
  res.summary = std::move(summary);
  return res;
}

}  // namespace loctime
