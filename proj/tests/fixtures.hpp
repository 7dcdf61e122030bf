#pragma once

#include "network.hpp"

namespace fixtures {

// Two bottlenecks, two groups; the worked instance used throughout the tests.
inline corridor::Corridor ex1() {
  corridor::Corridor c;
  c.capacities = {2.0, 1.0};
  c.free_flow_times = {1.0, 2.0};
  c.betas = {1.0, 0.5};
  c.demands = {{1.0, 1.0}, {2.0, 2.0}};
  return c;
}

inline corridor::ScheduleDelay ex1_schedule() {
  return corridor::ScheduleDelay::piecewise_linear(0.4, 0.9);
}

// Classic single-bottleneck homogeneous instance.
inline corridor::Corridor single() {
  corridor::Corridor c;
  c.capacities = {1.0};
  c.free_flow_times = {0.0};
  c.betas = {1.0};
  c.demands = {{2.0}};
  return c;
}

}  // namespace fixtures
