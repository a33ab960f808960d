#pragma once

#include "wingsched/nominal.hpp"
#include "wingsched/workpart.hpp"

namespace wingsched {

// Claim scoring for the greedy baseline: a robot picks the unclaimed
// reachable task minimizing distance_weight * travel distance plus
// wait_penalty_weight * enforced wait. With conflict_check on, a claim is
// scheduled at the earliest start that keeps the task clear of every
// already-committed service interval of the other robots; the gaps appear in
// the timeline as waits (spent parked at base).
struct GreedyConfig {
  double distance_weight = 1.0;
  double wait_penalty_weight = 0.05; // score units per second of waiting
  bool conflict_check = true;
};

// Event-driven greedy dispatcher over the active task set. The freest robot
// (earliest available, ties to the lower id) claims next; every task ends up
// claimed exactly once. The result reuses the nominal-schedule shape: no
// offsets, possibly non-contiguous entries (waits), per-robot makespan = end
// of the last claim.
NominalSchedule greedy_schedule(const std::vector<Task>& tasks, const RobotGeometry& geom,
                                const GreedyConfig& cfg = {});

} // namespace wingsched
