#pragma once

#include <optional>
#include <vector>

#include "wingsched/partition.hpp"
#include "wingsched/timeline.hpp"
#include "wingsched/workpart.hpp"

namespace wingsched {

// One planned service interval. Positions are carried along so downstream
// consumers (rate profiles, collision sweeps, reports) never need the task
// table again.
struct ScheduleEntry {
  TaskId task = -1;
  Point pos{};
  double start = 0.0;
  double end = 0.0;
};

// Axial traversal profile of one robot's route. q is the total swept axial
// distance over the makespan; delta_q is the largest deviation of any
// window-scale local rate from q. Degenerate routes (no axial extent or no
// duration) are flagged and report q = delta_q = 0.
struct RobotRate {
  double q = 0.0;
  double delta_q = 0.0;
  bool degenerate = false;
};

struct RobotSchedule {
  RobotId robot = 0;
  int pair = 0;
  Side side = Side::Bottom;
  double x_start = 0.0;
  double x_end = 0.0;
  // Offset-start robots run the tail of their axial order first, wrap back,
  // then run the head. wrap_index is the entry index where the head leg
  // begins (0 when the robot runs straight through).
  std::optional<OffsetInfo> offset;
  int wrap_index = 0;
  std::vector<ScheduleEntry> entries;
  double makespan = 0.0;
  RobotRate rate;
};

struct NominalSchedule {
  std::vector<RobotSchedule> robots; // indexed by robot id
  double makespan = 0.0;
};

// Slack of the two start-spacing legs of one offset robot against the
// proximity envelope (positive = satisfied, strict).
struct C1Slack {
  RobotId robot = 0;
  double l_slack = 0.0;
  double l_star_slack = 0.0;
};

// Slack of the return-ordering requirement between consecutive offset pairs:
// the later pair's wrap time minus the earlier pair's (positive = satisfied).
struct C2Slack {
  int pair_prev = 0;
  int pair = 0;
  double slack = 0.0;
};

// A-priori robustness margins for one robot pair, each the minimum over time
// of (predicted separation - proximity envelope), in feet. boundary_margin
// covers the pair's sweeping robot against the previous pair's offset robot
// while that one closes on the shared boundary; offset_margin covers the two
// pair members before the offset robot wraps; return_margin covers them
// afterwards. Margins use the measured (q, delta_q) profiles, so they are
// conservative: a negative margin does not imply a conflict, it only means
// the rate-based argument cannot certify the schedule on its own.
struct PairRobustness {
  int pair = 0;
  std::optional<double> boundary_margin;
  double offset_margin = 0.0;
  double return_margin = 0.0;
};

struct ConstraintReport {
  std::vector<C1Slack> c1_slacks;
  std::vector<C2Slack> c2_slacks;
  bool c1_pass = false;
  bool c2_pass = false;
  std::vector<PairRobustness> margins;
  double min_margin = 0.0;
  bool apriori_pass = false; // all slacks and margins strictly positive
  MonitorResult sweep;       // exhaustive piecewise-position distance check
  bool pass = false;         // sweep stayed above the proximity envelope
};

// Expands a partition set into per-robot timed sequences. Offset robots wrap
// as recorded in the partition; all service is back-to-back, so per-robot
// makespans equal the partition service totals. Throws a constraint error if
// a two-robot pair has no usable offset, an offset leg does not clear the
// proximity envelope, or wrap times fail to increase strictly across pairs.
// rate_window is the axial span over which local traversal rates are
// measured for delta_q (a workpart's rib pitch is the natural choice).
NominalSchedule build_nominal(const PartitionSet& ps, const std::vector<Task>& active,
                              const RobotGeometry& geom, double rate_window = 2.0);

RobotRate axial_rate_profile(const RobotSchedule& rs, double window);

// Piecewise-constant position timelines for the whole crew: at the task
// position while serving, parked at the robot's base otherwise, out to the
// given horizon.
std::vector<Timeline> schedule_timelines(const NominalSchedule& s,
                                         const RobotGeometry& geom, double horizon);

// Evaluates start-spacing and return-ordering slacks, the rate-based
// robustness margins, and the exhaustive pairwise distance sweep. The sweep
// is the certifying check: pass is true iff every pairwise distance stays
// strictly above the proximity envelope at all times.
ConstraintReport check_constraints(const NominalSchedule& s, const RobotGeometry& geom);

} // namespace wingsched
