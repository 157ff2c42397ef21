#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "gossipmesh/scenario.hpp"
#include "gossipmesh/trace.hpp"

namespace gossipmesh {

// Everything reported about a run is computed from its trace alone — never
// from live simulator state — so any stored trace replays to the same
// numbers. Throws std::runtime_error on a truncated or headerless trace.
nlohmann::ordered_json compute_metrics(const Trace& trace);

// Flat "path,value" rows for spreadsheet-side consumption.
std::string metrics_to_csv(const nlohmann::ordered_json& metrics);

struct ExpectationResult {
  Expectation expectation;
  double got = 0.0;
  bool found = false;  // metric path resolved to a number
  bool ok = false;
};

// Evaluate a scenario's embedded expectations against computed metrics.
std::vector<ExpectationResult> check_expectations(
    const nlohmann::ordered_json& metrics,
    const std::vector<Expectation>& expected);

}  // namespace gossipmesh
