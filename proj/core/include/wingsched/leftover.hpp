#pragma once

#include <cstdint>
#include <vector>

#include "wingsched/partition.hpp"
#include "wingsched/timeline.hpp"
#include "wingsched/workpart.hpp"

namespace wingsched {

// A city: an axially contiguous run of leftover tasks on one feature whose
// members all share the same reachable-robot set. Sized 2..16 under the
// default clustering; isolated tasks become flagged singletons.
struct City {
  int id = 0;
  Feature feature{};
  std::vector<TaskId> members; // ascending feature ordinal
  double service = 0.0;        // sum of member service times
  Point rep{};                 // mean member position
  double x_min = 0.0;
  double x_max = 0.0;
  std::uint32_t reach = 0; // common reachable-robot mask
  bool singleton_flagged = false;
};

// Per-robot city sequences. Rows are executed back-to-back from a common
// start; slot_count is the padded row capacity: the larger of the longest
// row and the smallest number of cheapest cities that exceeds an equal
// workload share.
struct ScheduleMatrix {
  std::vector<std::vector<int>> rows; // city ids, service order
  int slot_count = 0;
  int deconflict_moves = 0; // cities moved while clearing the initial schedule
};

// Groups leftover tasks into cities: runs of contiguous ordinals per feature
// are cut at reach-class changes, then chunked to roughly target_size
// members (clamped to 2..16). Singleton runs merge into the nearest city of
// the same feature and reach class with spare capacity, else stay flagged.
std::vector<City> cluster_cities(const std::vector<Task>& leftovers,
                                 const RobotGeometry& geom, int target_size = 9);

// Offset-style initial leftover schedule. Each pair's axial interval is
// split at a fresh offset point: cities in the cross-reach overlap band go
// to the pair's bottom robot below the split and to the top robot above it;
// cities outside the band go to their side's robot, extended part first.
// The split is chosen to balance the two rows' totals, preferring splits
// where the bottom robot leaves the band no later than the top one, with
// band-exit times staggered across pairs; the result is then cleared under
// the collision monitor by deferring conflicting cities (bounded by
// city_count^2 moves, else a hard error). Requires the overlap band to be
// strictly wider than the proximity envelope.
ScheduleMatrix build_initial_leftover(const std::vector<City>& cities,
                                      const PartitionSet& ps,
                                      const std::vector<Task>& tasks,
                                      const RobotGeometry& geom);

// Task-level position timelines of a leftover schedule: rows back-to-back
// from t = 0, parked at base once a row is done, out to the longest row.
std::vector<Timeline> leftover_timelines(const std::vector<std::vector<int>>& rows,
                                         const std::vector<City>& cities,
                                         const std::vector<Task>& tasks,
                                         const RobotGeometry& geom);

std::vector<double> row_durations(const std::vector<std::vector<int>>& rows,
                                  const std::vector<City>& cities);

// A row execution where safety comes from waiting instead of construction:
// cities run in row order, but a robot holds its next hole while any
// earlier-committed work of another robot sits inside the proximity radius.
// Any row assignment yields a monitor-clean timeline this way; the waits
// show up as idle time in `finish`.
struct WaitedRows {
  std::vector<Timeline> lines;  // per robot, parked at base when idle
  std::vector<double> busy;     // per robot, service time only
  std::vector<double> finish;   // per robot, last service end incl. waits
  double makespan = 0.0;        // max finish
};

WaitedRows execute_rows_waited(const std::vector<std::vector<int>>& rows,
                               const std::vector<City>& cities,
                               const std::vector<Task>& tasks,
                               const RobotGeometry& geom);

// Clears a row assignment under the collision monitor by moving one of the
// two cities at the earliest conflict to the end (or front) of its row,
// never revisiting an arrangement. Returns the number of moves; errors if
// the move budget (city_count^2) runs out or every rewrite is a revisit.
int deconflict_rows(std::vector<std::vector<int>>& rows, const std::vector<City>& cities,
                    const std::vector<Task>& tasks, const RobotGeometry& geom);

int padded_slot_count(const std::vector<std::vector<int>>& rows,
                      const std::vector<City>& cities);

} // namespace wingsched
