#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "loctime/errors.hpp"
#include "loctime/experiment.hpp"
#include "loctime/verify.hpp"

using namespace loctime;

namespace {
std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::stringstream s;
  s << in.rdbuf();
  return s.str();
}

std::string tmp(const std::string& name) { return (std::filesystem::temp_directory_path() / name).string(); }
}  // namespace

TEST_CASE("experiments are byte-for-byte reproducible") {
  ExperimentConfig c;
  c.N = 16;
  c.kind = ExperimentKind::avoided;
  c.theta = 0.4;
  c.reps = 6;
  c.seed = 99;
  c.radius = 1;
  c.atoms = true;
  c.out = tmp("loctime_exp_a");
  const ExperimentResult a = run_experiment(c);
  c.out = tmp("loctime_exp_b");
  const ExperimentResult b = run_experiment(c);
  CHECK(slurp(a.csv_path) == slurp(b.csv_path));
  CHECK(slurp(a.atoms_path) == slurp(b.atoms_path));
  CHECK(a.summary["config_hash"] == b.summary["config_hash"]);

  const std::string text = slurp(a.csv_path);
  CHECK(text.rfind("# loctime ", 0) == 0);
  CHECK(text.find("seed=99") != std::string::npos);
  CHECK(text.find("\nreplicate,steps,atoms,total_mass") != std::string::npos);

  c.seed = 100;
  c.out = tmp("loctime_exp_c");
  CHECK(slurp(run_experiment(c).csv_path) != text);
}

TEST_CASE("config round trip and validation") {
  ExperimentConfig c;
  c.kind = ExperimentKind::thick;
  c.lambda = 0.4;
  c.domain = DomainSpec::disk(1.0, LatticeRule::cells);
  const ExperimentConfig d = ExperimentConfig::from_json(c.to_json());
  CHECK(d.to_json() == c.to_json());
  CHECK(d.hash() == c.hash());

  ExperimentConfig bad = c;
  bad.lambda = 1.5;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  bad = c;
  bad.kind = ExperimentKind::avoided;
  bad.theta = 2.0;
  CHECK_THROWS_AS(bad.validate(), ParameterError);
  CHECK_THROWS_AS(experiment_kind_from_name("bogus"), ParameterError);
}

TEST_CASE("cover and sandwich experiments") {
  ExperimentConfig c;
  c.N = 8;
  c.kind = ExperimentKind::cover;
  c.reps = 3;
  c.start = StartRule::arbitrary;
  c.out = tmp("loctime_cover");
  const ExperimentResult r = run_experiment(c);
  CHECK(r.summary["columns"].contains("cover_steps"));
  CHECK(r.summary["columns"]["cover_steps"]["median"].get<double>() > 63);

  c.kind = ExperimentKind::sandwich;
  c.theta = 1.0;
  c.start = StartRule::boundary;
  c.out = tmp("loctime_sandwich");
  CHECK(run_experiment(c).summary["extra"]["b_N"].get<double>() == doctest::Approx(std::log(8.0)));
}

TEST_CASE("verify registry") {
  CHECK(check_names().size() == 15);
  CHECK(is_check("q-sequence"));
  CHECK_THROWS_AS(run_check("nope"), ParameterError);
  const CheckReport r = run_check("q-sequence");
  CHECK(r.pass());
  VerifyOptions strict;
  strict.overrides["q-sequence/bessel_route_max_diff"] = -1.0;
  CHECK_FALSE(run_check("q-sequence", strict).pass());
}
