#pragma once

#include <vector>

#include "wingsched/failure.hpp"
#include "wingsched/nominal.hpp"

namespace wingsched {

// Outcome of running a nominal schedule against a failure trace with the
// skip-ahead policy: the planned clock never shifts; a robot under repair
// skips every task whose planned interval overlaps the repair interval and
// resumes with the first task planned to start after the repair ends.
struct ExecutionLog {
  // executed service intervals at their planned times, per robot
  std::vector<std::vector<ScheduleEntry>> executed;
  // repair events actually applied (those starting inside the robot's
  // planned window), per robot
  std::vector<std::vector<FailureEvent>> repairs;
  std::vector<std::vector<TaskId>> skipped; // per robot, in planned order
  // a robot is finished when both its last executed task and its last
  // applied repair are over
  std::vector<double> finish;
  double completion = 0.0; // max over robots
  // distance certificate for the executed timelines (robots park at their
  // base while idle or under repair)
  MonitorResult monitor;
};

ExecutionLog execute(const NominalSchedule& s, const FailureTrace& trace,
                     const RobotGeometry& geom);

// Piecewise-constant position timelines of an executed run, parked at base
// outside service, out to the given horizon (>= log.completion).
std::vector<Timeline> execution_timelines(const ExecutionLog& log,
                                          const RobotGeometry& geom, double horizon);

} // namespace wingsched
