#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "chb/solvers.hpp"

namespace chb {

/// Parse or validation failure; `line` is 1-based, 0 when not applicable.
class ConfigError : public std::runtime_error {
 public:
  ConfigError(const std::string& what, std::string key, int line)
      : std::runtime_error(what), key_(std::move(key)), line_(line) {}
  const std::string& key() const { return key_; }
  int line() const { return line_; }

 private:
  std::string key_;
  int line_;
};

/// Fully explicit run configuration.
struct SimConfig {
  Index nx = 65;
  Index ny = 65;
  MaterialTable material;
  CouplingConfig coupling;
  Scenario scenario;
  Sources sources;
  std::vector<Circle> circles = default_circles();
  double interface_width = 2.0 / 65.0;
  Index snapshot_interval = 25;
  std::string output_dir = "output";
  std::uint64_t seed = 42;

  bool operator==(const SimConfig&) const = default;
};

/// Parses a YAML mapping. Absent keys take their defaults; `p_top` defaults
/// per scenario and `interface_width` to 2 / nx. Unknown keys are rejected.
SimConfig parse_config(std::string_view text);
SimConfig load_config(const std::string& path);
std::string serialize_config(const SimConfig& config);
/// Throws ConfigError naming the first invalid field.
void validate_config(const SimConfig& config);

}  // namespace chb
