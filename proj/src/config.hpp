#pragma once

#include <string>

#include "network.hpp"

namespace corridor {

struct ParseError : SolverError {
  using SolverError::SolverError;
};

struct InstanceConfig {
  Corridor corridor;
  ScheduleDelay schedule = ScheduleDelay::piecewise_linear(0.5, 0.5);
  double dt = 0.01;
  double padding = 0.5;
  std::string output_dir;
};

/// Strict JSON instance description: unknown keys are rejected at every
/// level, all corridor arrays are required.
InstanceConfig parse_config(const std::string& json_text);
InstanceConfig load_config(const std::string& path);

}  // namespace corridor
