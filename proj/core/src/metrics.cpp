#include "wingsched/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "wingsched/error.hpp"

namespace wingsched {

LeftoverStage stage_from_matrix(const ScheduleMatrix& m, const std::vector<City>& cities) {
  LeftoverStage st;
  st.busy = row_durations(m.rows, cities);
  st.duration = st.busy; // back-to-back rows: no waits
  for (const auto& row : m.rows)
    for (int cid : row)
      for (TaskId t : cities[cid].members) st.tasks.push_back(t);
  for (double d : st.duration) st.makespan = std::max(st.makespan, d);
  return st;
}

LeftoverStage stage_from_schedule(const NominalSchedule& s) {
  LeftoverStage st;
  st.busy.resize(s.robots.size(), 0.0);
  st.duration.resize(s.robots.size(), 0.0);
  for (std::size_t r = 0; r < s.robots.size(); ++r) {
    for (const ScheduleEntry& e : s.robots[r].entries) {
      st.busy[r] += e.end - e.start;
      st.tasks.push_back(e.task);
    }
    st.duration[r] = s.robots[r].makespan;
  }
  st.makespan = s.makespan;
  return st;
}

EfficiencyResult compute_efficiency(const ExecutionLog& log, const LeftoverStage& stage,
                                    const FailureTrace& trace,
                                    const std::vector<Task>& active) {
  const std::size_t nr = log.executed.size();
  if (nr == 0) fail(ErrorKind::Validation, "efficiency: empty execution log");
  if (!stage.busy.empty() && stage.busy.size() != nr)
    fail(ErrorKind::Validation, "efficiency: stage robot count differs from the log");
  if (!stage.repair.empty() && stage.repair.size() != nr)
    fail(ErrorKind::Validation, "efficiency: stage repair count differs from the log");
  if (trace.robots.size() < nr)
    fail(ErrorKind::Validation, "efficiency: trace covers fewer robots than the log");

  // every active task serviced exactly once, across both stages
  TaskId max_id = 0;
  for (const Task& t : active) max_id = std::max(max_id, t.id);
  std::vector<int> seen(max_id + 1, 0);
  std::vector<char> is_active(max_id + 1, 0);
  for (const Task& t : active) is_active[t.id] = 1;
  auto mark = [&](TaskId id) {
    if (id < 0 || id > max_id || !is_active[id])
      fail(ErrorKind::Validation, "efficiency: serviced task " + std::to_string(id) +
                                      " is not in the active set");
    ++seen[id];
  };
  for (const auto& robot : log.executed)
    for (const ScheduleEntry& e : robot) mark(e.task);
  for (TaskId id : stage.tasks) mark(id);
  for (const Task& t : active) {
    if (seen[t.id] == 0)
      fail(ErrorKind::Validation,
           "efficiency: incomplete run, task " + std::to_string(t.id) + " never serviced");
    if (seen[t.id] > 1)
      fail(ErrorKind::Validation,
           "efficiency: task " + std::to_string(t.id) + " serviced more than once");
  }

  EfficiencyResult out;
  out.service_time.resize(nr, 0.0);
  out.repair_time.resize(nr, 0.0);
  double total_service = 0.0;
  double total_repair = 0.0;
  for (std::size_t r = 0; r < nr; ++r) {
    for (const ScheduleEntry& e : log.executed[r]) out.service_time[r] += e.end - e.start;
    if (!stage.busy.empty()) out.service_time[r] += stage.busy[r];
    for (const FailureEvent& ev : log.repairs[r]) out.repair_time[r] += ev.repair;
    if (!stage.repair.empty()) out.repair_time[r] += stage.repair[r];
    total_service += out.service_time[r];
    total_repair += out.repair_time[r];
  }

  out.leftover_start = log.completion;
  out.t_min = (total_service + total_repair) / static_cast<double>(nr);
  out.t_act = log.completion + stage.makespan;
  if (out.t_act <= 0.0) fail(ErrorKind::Validation, "efficiency: run has zero duration");
  out.efficiency = out.t_min / out.t_act;
  if (out.efficiency > 1.0 + 1e-9)
    fail(ErrorKind::Validation, "efficiency: ratio exceeds 1, the run is inconsistent");
  return out;
}

} // namespace wingsched
