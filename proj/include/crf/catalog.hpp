#pragma once

#include "crf/payload.hpp"

// Built-in named structures reproducing the worked examples and
// counterexamples, each tagged with its expected verdict per check.

namespace crf {

struct Fixture {
  std::string name;
  Payload payload;
  std::vector<std::pair<std::string, bool>> expected;  // check name -> pass
};

const std::vector<std::string>& catalog_names();
Fixture catalog_get(const std::string& name);  // throws InputError on unknown names

struct CatalogRunResult {
  std::string fixture;
  CheckReport report;
  bool expected_pass = true;
  bool matches() const { return report.pass == expected_pass; }
};

std::vector<CatalogRunResult> catalog_run(const std::string& name, const CheckConfig& cfg);
std::vector<CatalogRunResult> catalog_run_all(const CheckConfig& cfg);

}  // namespace crf
