// loctime command line: domains, Green functions, fields, walks, level sets,
// batch experiments and the named verification checks.

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "loctime/continuum.hpp"
#include "loctime/errors.hpp"
#include "loctime/experiment.hpp"
#include "loctime/gaussian_fields.hpp"
#include "loctime/green.hpp"
#include "loctime/io.hpp"
#include "loctime/lattice_domain.hpp"
#include "loctime/level_sets.hpp"
#include "loctime/verify.hpp"
#include "loctime/walk.hpp"

using namespace loctime;
using nlohmann::json;

namespace {

struct DomainArgs {
  std::string shape = "unit-square";
  std::string rule = "margin";
  int N = 32;
  double width = 1.0, height = 1.0, radius = 1.0;
  std::string vertices;  // "x,y;x,y;..."

  void attach(CLI::App* app) {
    app->add_option("--shape", shape, "unit-square | rectangle | disk | polygon")->capture_default_str();
    app->add_option("--rule", rule, "margin | cells")->capture_default_str();
    app->add_option("--N", N, "lattice scale")->capture_default_str();
    app->add_option("--width", width, "rectangle width");
    app->add_option("--height", height, "rectangle height");
    app->add_option("--disk-radius", radius, "disk radius");
    app->add_option("--vertices", vertices, "polygon vertices as x,y;x,y;...");
  }

  DomainSpec spec() const {
    json j{{"shape", shape}, {"rule", rule}};
    if (shape == "rectangle") j["width"] = width, j["height"] = height;
    if (shape == "disk") j["radius"] = radius;
    if (shape == "polygon") {
      std::vector<std::array<double, 2>> pts;
      std::stringstream ss(vertices);
      std::string item;
      while (std::getline(ss, item, ';')) {
        const auto comma = item.find(',');
        if (comma == std::string::npos) throw ParameterError("polygon vertex '" + item + "' is not x,y");
        pts.push_back({std::stod(item.substr(0, comma)), std::stod(item.substr(comma + 1))});
      }
      j["vertices"] = pts;
    }
    return domain_spec_from_json(j);
  }
};

CsvMeta meta_for(std::uint64_t seed, const json& args) { return {seed, fnv1a(args.dump())}; }

int run_verify(const std::vector<std::string>& checks, const std::vector<std::string>& tols, std::uint64_t seed) {
  VerifyOptions opt;
  opt.seed = seed;
  for (const auto& t : tols) {
    const auto eq = t.find('=');
    if (eq == std::string::npos) throw ParameterError("--tol expects check/item=value, got '" + t + "'");
    opt.overrides[t.substr(0, eq)] = std::stod(t.substr(eq + 1));
  }
  const auto names = checks.empty() ? check_names() : checks;
  int failed = 0;
  for (const auto& n : names) {
    if (!is_check(n)) throw ParameterError("unknown check '" + n + "'");
    const CheckReport r = run_check(n, opt);
    std::cout << format_report(r) << std::flush;
    failed += !r.pass();
  }
  return failed ? 1 : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"loctime: random-walk local times on planar lattice domains"};
  app.set_version_flag("--version", std::string(LOCTIME_VERSION));
  app.require_subcommand(1);

  // domain build
  auto* dom = app.add_subcommand("domain", "lattice domains");
  dom->require_subcommand(1);
  auto* dom_build = dom->add_subcommand("build", "build D_N and print its summary");
  DomainArgs dargs;
  dargs.attach(dom_build);
  std::string dom_out;
  double delta = 0.0;
  dom_build->add_option("--out", dom_out, "write the domain JSON here");
  dom_build->add_option("--delta", delta, "also check admissibility with inner depth delta");

  // green compute
  auto* green = app.add_subcommand("green", "Green function");
  green->require_subcommand(1);
  auto* green_compute = green->add_subcommand("compute", "dense G_N with residual check");
  DomainArgs gargs;
  gargs.attach(green_compute);
  std::string green_out;
  green_compute->add_option("--out", green_out, "binary output (WLGREEN1)");

  // field sample
  auto* field = app.add_subcommand("field", "Gaussian free field");
  field->require_subcommand(1);
  auto* field_sample = field->add_subcommand("sample", "exact DGFF samples");
  DomainArgs fargs;
  fargs.attach(field_sample);
  std::size_t field_reps = 1;
  std::uint64_t field_seed = 1;
  std::string field_out = "field.csv";
  field_sample->add_option("--reps", field_reps)->capture_default_str();
  field_sample->add_option("--seed", field_seed)->capture_default_str();
  field_sample->add_option("--out", field_out)->capture_default_str();

  // walk run
  auto* walk = app.add_subcommand("walk", "random walk local times");
  walk->require_subcommand(1);
  auto* walk_run = walk->add_subcommand("run", "one local-time field per replicate");
  DomainArgs wargs;
  wargs.attach(walk_run);
  std::string walk_mode = "boundary", walk_start = "boundary", walk_out = "walk.csv";
  std::vector<int> walk_site;
  double walk_horizon = 1.0;
  std::size_t walk_reps = 1;
  std::uint64_t walk_seed = 1;
  walk_run->add_option("--mode", walk_mode, "discrete | continuous | boundary")->capture_default_str();
  walk_run->add_option("--horizon", walk_horizon, "steps, time or boundary local time")->capture_default_str();
  walk_run->add_option("--start", walk_start, "boundary | vertex | arbitrary")->capture_default_str();
  walk_run->add_option("--site", walk_site, "start site i j for --start vertex")->expected(2);
  walk_run->add_option("--reps", walk_reps)->capture_default_str();
  walk_run->add_option("--seed", walk_seed)->capture_default_str();
  walk_run->add_option("--out", walk_out)->capture_default_str();

  // levelsets extract / qseq
  auto* lev = app.add_subcommand("levelsets", "level-set point measures");
  lev->require_subcommand(1);
  auto* lev_extract = lev->add_subcommand("extract", "run to t_N and extract the point measure");
  DomainArgs largs;
  largs.attach(lev_extract);
  std::string lev_kind = "thick", lev_out = "levelset.csv";
  double lev_theta = 0.5, lev_lambda = 0.3;
  int lev_radius = -1;
  std::uint64_t lev_seed = 1;
  lev_extract->add_option("--kind", lev_kind, "thick | thin | light | avoided")->capture_default_str();
  lev_extract->add_option("--theta", lev_theta)->capture_default_str();
  lev_extract->add_option("--lambda", lev_lambda)->capture_default_str();
  lev_extract->add_option("--radius", lev_radius, "profile radius")->capture_default_str();
  lev_extract->add_option("--seed", lev_seed)->capture_default_str();
  lev_extract->add_option("--out", lev_out)->capture_default_str();
  auto* lev_q = lev->add_subcommand("qseq", "the q_n sequence");
  double q_theta = 0.5;
  int q_nmax = 20;
  std::string q_out;
  lev_q->add_option("--theta", q_theta)->capture_default_str();
  lev_q->add_option("--nmax", q_nmax)->capture_default_str();
  lev_q->add_option("--out", q_out, "CSV output; stdout if empty");

  // continuum
  auto* cont = app.add_subcommand("continuum", "continuum quantities");
  cont->require_subcommand(1);
  auto* cont_d = cont->add_subcommand("dfunction", "d-function grid");
  DomainArgs cargs;
  cargs.attach(cont_d);
  std::string cont_route = "green", cont_out = "dfunction.csv";
  int cont_sigma_N = 0;
  cont_d->add_option("--route", cont_route, "green | poisson")->capture_default_str();
  cont_d->add_option("--sigma-N", cont_sigma_N, "scale for sigma_D^2 (poisson route; default N)");
  cont_d->add_option("--out", cont_out)->capture_default_str();

  // experiment
  auto* exp = app.add_subcommand("experiment", "batch experiment from a JSON config");
  std::string exp_config;
  exp->add_option("--config", exp_config, "JSON config file");
  std::string e_shape, e_rule, e_kind, e_start, e_out;
  int e_N = 0, e_radius = -2;
  double e_theta = -1, e_lambda = -1;
  std::size_t e_reps = 0;
  std::uint64_t e_seed = 0;
  bool e_seed_set = false, e_svg = false, e_atoms = false;
  exp->add_option("--shape", e_shape);
  exp->add_option("--rule", e_rule);
  exp->add_option("--N", e_N);
  exp->add_option("--kind", e_kind, "thick | thin | light | avoided | cover | rayknight | sandwich");
  exp->add_option("--theta", e_theta);
  exp->add_option("--lambda", e_lambda);
  exp->add_option("--reps", e_reps);
  exp->add_option("--seed", e_seed)->each([&](const std::string&) { e_seed_set = true; });
  exp->add_option("--start", e_start, "boundary | vertex | arbitrary");
  exp->add_option("--radius", e_radius);
  exp->add_option("--out", e_out, "output prefix");
  exp->add_flag("--atoms", e_atoms, "also write point-measure atoms");
  exp->add_flag("--svg", e_svg, "write an SVG histogram of the headline column");

  // verify
  auto* ver = app.add_subcommand("verify", "named verification checks");
  std::vector<std::string> ver_checks, ver_tols;
  std::uint64_t ver_seed = VerifyOptions{}.seed;
  bool ver_list = false;
  ver->add_option("--check", ver_checks, "check name (repeatable); all if omitted");
  ver->add_option("--tol", ver_tols, "override a bound: check/item=value");
  ver->add_option("--seed", ver_seed)->capture_default_str();
  ver->add_flag("--list", ver_list, "list check names");

  CLI11_PARSE(app, argc, argv);

  try {
    if (dom_build->parsed()) {
      const DomainSpec spec = dargs.spec();
      const LatticeDomain d = build_lattice(spec, dargs.N);
      json j = d.to_json();
      if (delta > 0) {
        const ValidationReport v = validate_admissible(d, spec, delta);
        j["admissible"] = {{"margin_ok", v.margin_ok},   {"margin_violations", v.margin_violations},
                           {"inner_ok", v.inner_ok},     {"inner_missing", v.inner_missing},
                           {"connected", v.connected},   {"boundary_ratio", v.boundary_ratio}};
      }
      if (!dom_out.empty()) write_text(dom_out, j.dump(2) + "\n");
      j.erase("vertices");
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (green_compute->parsed()) {
      const LatticeDomain d = build_lattice(gargs.spec(), gargs.N);
      const GreenOperator g = compute_green(d);
      json j{{"n", g.size()}, {"residual", green_residual(d, g)}, {"symmetry", symmetry_defect(g)},
             {"total", g.total()}};
      if (!green_out.empty()) write_green_binary(g, green_out);
      std::cout << j.dump(2) << "\n";
      return 0;
    }
    if (field_sample->parsed()) {
      const LatticeDomain d = build_lattice(fargs.spec(), fargs.N);
      const auto samples = sample_dgff(compute_green(d), field_seed, field_reps);
      write_field_csv(field_out, d, samples, meta_for(field_seed, json{{"N", fargs.N}, {"shape", fargs.shape}}));
      std::cout << "wrote " << field_out << "\n";
      return 0;
    }
    if (walk_run->parsed()) {
      const DomainSpec spec = wargs.spec();
      const LatticeDomain d = build_lattice(spec, wargs.N);
      Site site{};
      if (walk_site.size() == 2) site = {walk_site[0], walk_site[1]};
      const std::uint32_t start = resolve_start(d, spec, start_rule_from_name(walk_start), site);
      const TimeMode mode = mode_from_name(walk_mode);
      json args{{"N", wargs.N}, {"shape", wargs.shape}, {"mode", walk_mode}, {"horizon", walk_horizon}};
      CsvWriter w(walk_out, meta_for(walk_seed, args), {"x_i", "x_j", "local_time", "replicate"});
      for (std::size_t r = 0; r < walk_reps; ++r) {
        const LocalTimeField f = run_walk(d, {start, mode, walk_horizon, walk_seed, r});
        for (std::uint32_t v = 0; v < d.size(); ++v)
          w.row({std::to_string(d.site(v).i), std::to_string(d.site(v).j), fmt(f.values[v]), std::to_string(r)});
        w.row({"rho", "rho", fmt(f.at_rho()), std::to_string(r)});
      }
      std::cout << "wrote " << walk_out << "\n";
      return 0;
    }
    if (lev_extract->parsed()) {
      const LatticeDomain d = build_lattice(largs.spec(), largs.N);
      const LevelKind kind = level_kind_from_name(lev_kind);
      const ScaleSequences sc = scale_sequences(largs.N, lev_theta, lev_lambda, kind);
      const auto steps = static_cast<double>(steps_for_time(d, sc.t_N));
      const LocalTimeField f = run_walk(d, {d.rho(), TimeMode::discrete, steps, lev_seed, 0});
      std::optional<int> radius;
      if (lev_radius >= 0) radius = lev_radius;
      const PointMeasure m = extract_level_measure(f, d, sc, kind, radius);
      json args{{"N", largs.N}, {"kind", lev_kind}, {"theta", lev_theta}, {"lambda", lev_lambda}};
      write_measure_csv(lev_out, m, meta_for(lev_seed, args), 0);
      std::cout << json{{"atoms", m.atoms.size()}, {"total_mass", m.total_mass()}, {"t_N", sc.t_N}}.dump(2) << "\n";
      return 0;
    }
    if (lev_q->parsed()) {
      const QSequence q = q_sequence(q_theta, q_nmax);
      if (q_out.empty()) {
        for (std::size_t n = 0; n < q.q.size(); ++n) std::cout << n << "," << fmt(q.q[n]) << "\n";
      } else {
        write_qsequence_csv(q_out, q, meta_for(0, json{{"theta", q_theta}, {"nmax", q_nmax}}));
      }
      return 0;
    }
    if (cont_d->parsed()) {
      const DomainSpec spec = cargs.spec();
      ContinuumGrid g;
      if (cont_route == "green") {
        g = d_function_green(build_lattice(spec, cargs.N));
      } else if (cont_route == "poisson") {
        const int sN = cont_sigma_N > 0 ? cont_sigma_N : cargs.N;
        g = d_function_poisson(spec, cargs.N, sigma_D2(build_lattice(spec, sN)), sN);
      } else {
        throw ParameterError("route must be green or poisson");
      }
      write_grid_csv(cont_out, g, meta_for(0, json{{"N", cargs.N}, {"route", cont_route}}));
      std::cout << json{{"integral", g.integral()}, {"min", g.min_value()}, {"sigma2", g.sigma2}}.dump(2) << "\n";
      return 0;
    }
    if (exp->parsed()) {
      ExperimentConfig c;
      if (!exp_config.empty()) {
        std::ifstream in(exp_config);
        if (!in) throw ParameterError("cannot read config '" + exp_config + "'");
        c = ExperimentConfig::from_json(json::parse(in));
      }
      if (!e_shape.empty() || !e_rule.empty()) {
        json d = to_json(c.domain);
        if (!e_shape.empty()) d["shape"] = e_shape;
        if (!e_rule.empty()) d["rule"] = e_rule;
        c.domain = domain_spec_from_json(d);
      }
      if (e_N > 0) c.N = e_N;
      if (!e_kind.empty()) c.kind = experiment_kind_from_name(e_kind);
      if (e_theta >= 0) c.theta = e_theta;
      if (e_lambda >= 0) c.lambda = e_lambda;
      if (e_reps > 0) c.reps = e_reps;
      if (e_seed_set) c.seed = e_seed;
      if (!e_start.empty()) c.start = start_rule_from_name(e_start);
      if (e_radius >= -1) c.radius = e_radius;
      if (!e_out.empty()) c.out = e_out;
      if (e_atoms) c.atoms = true;
      const ExperimentResult r = run_experiment(c);
      if (e_svg) {
        std::vector<double> col;
        const std::string name = c.kind == ExperimentKind::cover       ? "normalized"
                                 : c.kind == ExperimentKind::rayknight ? "lhs"
                                 : c.kind == ExperimentKind::sandwich  ? "t_star"
                                                                       : "total_mass";
        {
          std::ifstream in(r.csv_path);
          std::string line;
          std::getline(in, line);  // comment
          std::getline(in, line);  // header
          std::vector<std::string> header;
          std::stringstream hs(line);
          for (std::string h; std::getline(hs, h, ',');) header.push_back(h);
          const auto idx = static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
          while (std::getline(in, line)) {
            std::stringstream ls(line);
            std::string cell;
            for (std::size_t k = 0; k <= idx && std::getline(ls, cell, ','); ++k) {}
            col.push_back(std::stod(cell));
          }
          write_svg_histogram(c.out + ".svg", col, 20, name);
        }
      }
      std::cout << r.summary.dump(2) << "\n";
      return 0;
    }
    if (ver->parsed()) {
      if (ver_list) {
        for (const auto& n : check_names()) std::cout << n << "\n";
        return 0;
      }
      return run_verify(ver_checks, ver_tols, ver_seed);
    }
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
