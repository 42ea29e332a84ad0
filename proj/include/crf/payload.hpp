#pragma once

#include <optional>

#include "crf/contact.hpp"

// A loaded structure definition: any combination of a generalized structure,
// a generalized metric, an almost contact payload, Sasakian data or graph
// data, all over one coordinate domain. Named checks dispatch on whatever
// parts they need.

namespace crf {

struct Payload {
  CoordinateDomain dom;
  std::optional<GeneralizedF> structure;
  std::optional<GeneralizedMetric> metric;
  std::optional<AlmostContact> almost_contact;
  std::optional<SasakiInput> sasaki;
  std::optional<GraphData> graph;
};

struct CheckSpec {
  std::string name;
  std::optional<TwoFormField> B;  // bfield only
};

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const std::vector<std::string>& known_check_names();

// Runs one named check against the payload. Throws InputError when the
// payload lacks the parts the check needs, StructureError when a structural
// precondition fails.
CheckReport run_check(const Payload& p, const CheckSpec& spec, const CheckConfig& cfg);

}  // namespace crf
