#pragma once

// Named end-to-end checks with pinned tolerances. Each check measures some
// numbers, compares them with an exact or closed-form target and reports.

#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace loctime {

enum class Relation {
  abs_within,  // |value - target| <= bound
  rel_within,  // |value - target| <= bound * |target|
  at_most,     // value <= bound
  at_least,    // value >= bound
};

struct CheckItem {
  std::string name;
  double value = 0.0;
  double target = 0.0;
  double bound = 0.0;
  Relation relation = Relation::abs_within;
  bool pass = false;
};

struct CheckReport {
  std::string name;
  std::string title;
  std::vector<CheckItem> items;
  double seconds = 0.0;
  std::string error;  // set if the check threw

  bool pass() const;
};

struct VerifyOptions {
  std::uint64_t seed = 20240607;
  // "check/item" -> replacement bound.
  std::map<std::string, double> overrides;
};

// Names in criterion order.
const std::vector<std::string>& check_names();
bool is_check(const std::string& name);

// Throws ParameterError for an unknown name.
CheckReport run_check(const std::string& name, const VerifyOptions& opt = {});

std::string describe(const CheckItem& item);
std::string format_report(const CheckReport& r);

}  // namespace loctime
