// Python bindings: scenario execution plus the small pure functions that are
// handy to poke at from a notebook (forwarding probability, decay weights,
// pairwise averaging, fact keys).

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>

#include "gossipmesh/bundles.hpp"
#include "gossipmesh/coordination.hpp"
#include "gossipmesh/core.hpp"
#include "gossipmesh/dissemination.hpp"
#include "gossipmesh/metrics.hpp"
#include "gossipmesh/scenario.hpp"
#include "gossipmesh/simnet.hpp"
#include "gossipmesh/temporal.hpp"
#include "gossipmesh/trust.hpp"

namespace py = pybind11;
namespace gm = gossipmesh;

namespace {

gm::ScenarioConfig resolve(const std::string& ref,
                           std::optional<std::uint64_t> seed) {
  gm::ScenarioConfig cfg;
  if (auto bundled = gm::bundled_scenario(ref)) {
    cfg = *bundled;
  } else {
    cfg = gm::ScenarioConfig::from_json_text(ref);
  }
  if (seed) cfg.seed = *seed;
  return cfg;
}

std::string run_metrics(const std::string& ref,
                        std::optional<std::uint64_t> seed) {
  gm::Simulator sim(resolve(ref, seed));
  return gm::compute_metrics(sim.run()).dump();
}

py::tuple run_with_trace(const std::string& ref,
                         std::optional<std::uint64_t> seed) {
  gm::Simulator sim(resolve(ref, seed));
  gm::Trace trace = sim.run();
  std::ostringstream ndjson;
  trace.write_ndjson(ndjson);
  std::string metrics = gm::compute_metrics(trace).dump();
  return py::make_tuple(std::move(metrics), ndjson.str());
}

std::uint64_t trace_hash(const std::string& ref,
                         std::optional<std::uint64_t> seed) {
  gm::Simulator sim(resolve(ref, seed));
  return sim.run().hash();
}

double forward_probability_str(const std::string& priority,
                               std::uint32_t rounds_seen) {
  auto p = gm::priority_from_string(priority);
  if (!p) throw std::invalid_argument("unknown priority: " + priority);
  return gm::forward_probability(*p, rounds_seen);
}

std::uint64_t fact_key_of(const std::string& topic,
                          const std::string& payload) {
  gm::Rumor r;
  r.topic = topic;
  r.payload = payload;
  return gm::ConfirmationTracker::fact_key(r);
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "gossip-based coordination substrate (native core)";

  m.def("bundled_scenarios", &gm::bundled_scenario_names,
        "Names of the scenarios compiled into the library.");
  m.def("scenario_json", [](const std::string& name) {
    auto cfg = gm::bundled_scenario(name);
    if (!cfg) throw std::invalid_argument("no bundled scenario: " + name);
    return cfg->to_json_text();
  },
        py::arg("name"),
        "Full config of a bundled scenario as a JSON string.");
  m.def("run", &run_metrics, py::arg("scenario"),
        py::arg("seed") = std::nullopt,
        "Run a scenario (bundled name or JSON text); returns metrics JSON.");
  m.def("run_with_trace", &run_with_trace, py::arg("scenario"),
        py::arg("seed") = std::nullopt,
        "Run a scenario; returns (metrics JSON, trace NDJSON).");
  m.def("trace_hash", &trace_hash, py::arg("scenario"),
        py::arg("seed") = std::nullopt,
        "Run a scenario and return the 64-bit hash of its event trace.");

  m.def("forward_probability", &forward_probability_str, py::arg("priority"),
        py::arg("rounds_seen"),
        "Per-round relay probability for a rumor of the given priority that "
        "has sat in the hot buffer for rounds_seen rounds.");
  m.def("decay_weight", &gm::decay_weight, py::arg("age"),
        py::arg("ttl_rounds"), py::arg("lambda_"),
        "Relevance weight of a fact aged `age` rounds.");
  m.def("averaging_step", &gm::averaging_step, py::arg("a"), py::arg("b"),
        "One pairwise averaging exchange; returns the two updated values.");
  m.def("ceil_log2", &gm::ceil_log2, py::arg("n"));
  m.def("fact_key", &fact_key_of, py::arg("topic"), py::arg("payload"),
        "Content key used to pool confirmations across independent rumors.");
}
