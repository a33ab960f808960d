#pragma once

#include <cstdint>
#include <vector>

namespace wingsched {

// Normal-distribution parameters for intermittent robot failures: time to the
// first failure, recurrence (measured start-to-start), and repair duration.
// Samples below the floor are redrawn — negative or zero durations are
// unphysical.
struct FailureModel {
  double first_mean = 5073.0;
  double first_sigma = 1602.0;
  double recurrence_mean = 6942.0;
  double recurrence_sigma = 1068.0;
  double repair_mean = 480.0;
  double repair_sigma = 80.0;
  double floor = 1.0;
  std::uint64_t seed = 0;
};

struct FailureEvent {
  double start = 0.0;
  double repair = 0.0;
  double end() const { return start + repair; }
};

struct FailureTrace {
  std::vector<std::vector<FailureEvent>> robots; // ordered, disjoint per robot
  std::vector<double> total_repair;              // sum of repair durations
  std::uint64_t seed = 0;
};

// Per-robot failure streams out to the horizon. Each robot draws from its own
// substream, so the trace for robot k does not depend on how many robots
// follow it. Deterministic for a fixed (seed, robot_count, horizon).
FailureTrace sample_failures(const FailureModel& model, int robot_count, double horizon);

} // namespace wingsched
