#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

#include "loctime/lattice_domain.hpp"

namespace loctime {

enum class ExperimentKind { thick, thin, light, avoided, cover, rayknight, sandwich };
enum class StartRule { boundary, vertex, arbitrary };

const char* experiment_kind_name(ExperimentKind k);
ExperimentKind experiment_kind_from_name(const std::string& s);
const char* start_rule_name(StartRule r);
StartRule start_rule_from_name(const std::string& s);

struct ExperimentConfig {
  DomainSpec domain;
  int N = 32;
  ExperimentKind kind = ExperimentKind::avoided;
  double theta = 0.5;
  double lambda = 0.3;
  std::size_t reps = 10;
  std::uint64_t seed = 1;
  StartRule start = StartRule::boundary;
  Site start_site{};     // StartRule::vertex
  int radius = -1;       // profile radius, -1 for none
  bool atoms = false;    // also write the point measures
  int histogram_max = 8; // visit-count histogram columns 0..max (4L = k)
  double t = 4.0;        // rayknight boundary time
  double b_N = 0.0;      // sandwich window; 0 means log N
  std::string out = "experiment";  // output prefix

  // Range checks per kind; throws ParameterError naming the constraint.
  void validate() const;
  nlohmann::json to_json() const;
  static ExperimentConfig from_json(const nlohmann::json& j);
  std::uint64_t hash() const;
};

struct ExperimentResult {
  std::string csv_path;
  std::string summary_path;
  std::string atoms_path;
  nlohmann::json summary;
};

// Writes <out>.csv (one row per replicate) and <out>.summary.json.
ExperimentResult run_experiment(const ExperimentConfig& config);

// Start vertex for a rule: rho, a given site, or the site nearest the
// lower-left corner of the domain.
std::uint32_t resolve_start(const LatticeDomain& domain, const DomainSpec& spec, StartRule rule, Site site);

}  // namespace loctime
