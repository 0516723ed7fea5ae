#include "chb/state.hpp"

#include <stdexcept>
#include <string>

namespace chb {

std::string_view to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::PressureDrop: return "PressureDrop";
    case ScenarioKind::ZeroPressure: return "ZeroPressure";
    case ScenarioKind::CahnLarche: return "CahnLarche";
  }
  return "?";
}

ScenarioKind parse_scenario_kind(std::string_view name) {
  for (auto kind : {ScenarioKind::PressureDrop, ScenarioKind::ZeroPressure, ScenarioKind::CahnLarche}) {
    if (name == to_string(kind)) return kind;
  }
  throw std::invalid_argument("unknown scenario '" + std::string(name) +
                              "' (expected PressureDrop, ZeroPressure or CahnLarche)");
}

Scenario Scenario::make(ScenarioKind kind) {
  return {kind, kind == ScenarioKind::PressureDrop ? 0.25 : 0.0};
}

SimState zero_state(const StructuredGrid& grid) {
  SimState s;
  s.phi = Vector::Zero(grid.num_nodes());
  s.mu = Vector::Zero(grid.num_nodes());
  s.u = Vector::Zero(2 * grid.num_nodes());
  s.p = Vector::Zero(grid.num_cells());
  s.q = Vector::Zero(grid.num_edges());
  s.theta = Vector::Zero(grid.num_cells());
  return s;
}

}  // namespace chb
