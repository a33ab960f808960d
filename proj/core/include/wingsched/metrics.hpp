#pragma once

#include <vector>

#include "wingsched/execution.hpp"
#include "wingsched/leftover.hpp"

namespace wingsched {

// The leftover stage reduced to what efficiency needs. Both stage shapes
// collapse to this: matrix rows are back-to-back (duration == busy), a
// greedy re-dispatch can hold waits (duration >= busy). Durations count from
// the common stage start (the nominal completion time).
struct LeftoverStage {
  std::vector<double> busy;     // per robot, service time inside the stage
  std::vector<double> duration; // per robot, stage span including waits
  std::vector<TaskId> tasks;    // every task serviced in the stage
  double makespan = 0.0;        // max duration
  // repair time absorbed inside the stage (exploratory runs only; empty
  // means none). Counts toward the ideal-duration numerator like any other
  // applied repair, and is already included in `duration`.
  std::vector<double> repair;
};

LeftoverStage stage_from_matrix(const ScheduleMatrix& m, const std::vector<City>& cities);
LeftoverStage stage_from_schedule(const NominalSchedule& s);

struct EfficiencyResult {
  double t_min = 0.0;     // ideal duration: (total service + total repair) / robots
  double t_act = 0.0;     // finish of the last robot across both stages
  double efficiency = 0.0;
  double leftover_start = 0.0;      // stage start (nominal completion)
  std::vector<double> service_time; // per robot, both stages
  std::vector<double> repair_time;  // per robot, applied repairs
};

// Efficiency of one complete run: nominal execution plus the leftover stage,
// started together at the nominal completion time. Errors if any active task
// is left unserviced or serviced twice, so an incomplete run cannot score.
EfficiencyResult compute_efficiency(const ExecutionLog& log, const LeftoverStage& stage,
                                    const FailureTrace& trace,
                                    const std::vector<Task>& active);

} // namespace wingsched
