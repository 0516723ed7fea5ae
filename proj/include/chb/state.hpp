#pragma once

#include <string>
#include <string_view>

#include "chb/fem.hpp"

namespace chb {

enum class ScenarioKind { PressureDrop, ZeroPressure, CahnLarche };

std::string_view to_string(ScenarioKind kind);
/// Throws std::invalid_argument for unknown names.
ScenarioKind parse_scenario_kind(std::string_view name);

struct Scenario {
  ScenarioKind kind = ScenarioKind::PressureDrop;
  /// Pressure imposed on the top boundary; the bottom is held at zero.
  double p_top = 0.25;

  bool flow_enabled() const { return kind != ScenarioKind::CahnLarche; }
  /// Default boundary data for each kind (0.25 for PressureDrop, 0 otherwise).
  static Scenario make(ScenarioKind kind);

  bool operator==(const Scenario&) const = default;
};

/// Discrete fields at one time level.
///  phi, mu : Q1 nodal
///  u       : vector Q1, interleaved [ux0, uy0, ux1, ...]
///  p, theta: P0, theta is the cell-averaged fluid content
///  q       : RT0 normal velocities in edge orientation
struct SimState {
  Vector phi;
  Vector mu;
  Vector u;
  Vector p;
  Vector q;
  Vector theta;
  double time = 0.0;
};

SimState zero_state(const StructuredGrid& grid);

}  // namespace chb
