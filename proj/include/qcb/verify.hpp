#pragma once

#include <memory>
#include <string>
#include <vector>

#include "json.hpp"
#include "qcb/cache.hpp"
#include "qcb/udot.hpp"

namespace qcb {

using Json = nlohmann::ordered_json;

// "LW:1 HW:1", "HW:1,0 HW:0,1", "V:0": kind and the pairings <i, lambda>.
struct FactorSpec {
  ModuleKind kind;
  IntVec lambda;
};
std::vector<FactorSpec> parse_factors(const RootDatum& d, const std::string& spec);
// Left-nested tensor product of the factors, each truncated at depth; a single
// factor is returned as an atomic module.
std::shared_ptr<const BasedModule> build_tensor(std::shared_ptr<const CanonicalBasis> cb,
                                                const std::vector<FactorSpec>& factors, int depth);

struct CheckError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckReport {
  std::string check;
  Json params;
  bool pass = false;
  long checked = 0;
  int max_pos_deg = 0;
  int min_neg_deg = 0;
  std::string counterexample;  // first failing coefficient, empty on pass
  double seconds = 0;          // not part of the JSON line
  bool cached = false;

  Json json() const;
  static CheckReport from_json(const Json& j);
};

std::vector<std::string> check_names();
// Throws CheckError on an unknown name or bad parameters.
CheckReport run_check(const std::string& name, const Json& params);

struct CheckSpec {
  std::string name;
  Json params;
};

// Default suites for the built-in data; structure constants up to trace 4
// for data read from files.
std::vector<CheckSpec> default_suite(const std::string& datum);
// A JSON array of {"check":, "params":} objects, or an object with "checks"
// and an optional "disabled" list of names.
std::vector<CheckSpec> parse_suite(const Json& config);

// Runs the checks on `jobs` threads; the result is sorted by check name and
// parameters, so it does not depend on jobs or on the order of the config.
std::vector<CheckReport> run_suite(const std::vector<CheckSpec>& checks, int jobs = 1, const Cache& cache = {});

}  // namespace qcb
