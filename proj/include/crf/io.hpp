#pragma once

#include "crf/catalog.hpp"

namespace crf {

struct RunConfig {
  Payload payload;
  std::vector<CheckSpec> checks;
  int samples = 200;
  std::uint64_t seed = 42;
  double tol = 1e-9;
  std::string format = "text";

  CheckConfig check_config() const {
    CheckConfig cfg;
    cfg.samples = samples;
    cfg.seed = seed;
    cfg.tol = tol;
    return cfg;
  }
};

// Strict JSON loader: unknown keys anywhere are rejected with the field path;
// expression strings use the library grammar; antisymmetry / symmetry /
// dimension constraints are validated at probe points.
RunConfig load_definition(const std::string& path);
RunConfig parse_definition(const std::string& json_text);

// Fixture -> definition file (reloadable by load_definition).
std::string export_fixture(const Fixture& fx);

std::string render_text(const std::vector<CheckReport>& reports);
std::string render_json(const std::vector<CheckReport>& reports, bool timing);

}  // namespace crf
