#include "wingsched/execution.hpp"

#include <algorithm>

#include "wingsched/error.hpp"

namespace wingsched {

std::vector<Timeline> execution_timelines(const ExecutionLog& log,
                                          const RobotGeometry& geom, double horizon) {
  if (log.executed.size() != geom.robots.size())
    fail(ErrorKind::Validation, "execution timelines: robot count mismatch");
  std::vector<Timeline> lines(log.executed.size());
  for (std::size_t r = 0; r < log.executed.size(); ++r) {
    Timeline busy;
    busy.reserve(log.executed[r].size());
    for (const auto& e : log.executed[r]) busy.push_back({e.start, e.end, e.pos});
    lines[r] = with_parking(busy, geom.robots[r].base, 0.0, horizon);
  }
  return lines;
}

ExecutionLog execute(const NominalSchedule& s, const FailureTrace& trace,
                     const RobotGeometry& geom) {
  const std::size_t nr = s.robots.size();
  if (trace.robots.size() < nr)
    fail(ErrorKind::Validation, "execute: trace covers fewer robots than the schedule");

  ExecutionLog log;
  log.executed.resize(nr);
  log.repairs.resize(nr);
  log.skipped.resize(nr);
  log.finish.assign(nr, 0.0);

  for (std::size_t r = 0; r < nr; ++r) {
    const RobotSchedule& rs = s.robots[r];
    // failures are only considered while the robot still has planned work
    for (const auto& ev : trace.robots[r]) {
      if (ev.repair <= 0.0) fail(ErrorKind::Validation, "execute: non-positive repair");
      if (ev.start < rs.makespan) log.repairs[r].push_back(ev);
    }
    for (std::size_t i = 1; i < log.repairs[r].size(); ++i)
      if (log.repairs[r][i].start < log.repairs[r][i - 1].end())
        fail(ErrorKind::Validation, "execute: overlapping failure intervals");

    const auto& evs = log.repairs[r];
    std::size_t k = 0;
    for (const auto& e : rs.entries) {
      while (k < evs.size() && evs[k].end() <= e.start) ++k;
      // half-open overlap: [start, end) vs [ev.start, ev.end())
      if (k < evs.size() && evs[k].start < e.end && e.start < evs[k].end()) {
        log.skipped[r].push_back(e.task);
      } else {
        log.executed[r].push_back(e);
      }
    }
    double fin = log.executed[r].empty() ? 0.0 : log.executed[r].back().end;
    if (!evs.empty()) fin = std::max(fin, evs.back().end());
    log.finish[r] = fin;
    log.completion = std::max(log.completion, fin);
  }

  const double horizon = std::max(log.completion, s.makespan);
  log.monitor = collision_monitor(execution_timelines(log, geom, horizon), geom.proximity());
  return log;
}

} // namespace wingsched
