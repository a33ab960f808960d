#pragma once

#include <vector>

#include "wingsched/workpart.hpp"

namespace wingsched {

// A robot's position over [t0, t1). Robots occupy task positions for the
// whole service interval and relocate instantaneously in between, so a
// timeline is a piecewise-constant position function.
struct Segment {
  double t0 = 0.0;
  double t1 = 0.0;
  Point pos;
};

using Timeline = std::vector<Segment>; // ascending, non-overlapping

// Fills every gap in [t0, t1) with the parked position, so the timeline is
// total over the window. `busy` must be sorted and non-overlapping.
Timeline with_parking(const std::vector<Segment>& busy, Point park, double t0,
                      double t1);

struct PairDistance {
  double min_distance;      // +inf when the timelines never coexist
  double at_time;           // start of the interval achieving the minimum
  double first_violation;   // earliest time distance <= threshold, -1 if never
};

// Exact minimum distance between two piecewise-constant timelines.
// `threshold` feeds first_violation; `abort_below` allows early exit once the
// running minimum drops below a bound (first_violation is not tracked then).
PairDistance pair_min_distance(const Timeline& a, const Timeline& b,
                               double threshold = -1.0,
                               double abort_below = -1.0);

struct MonitorResult {
  double min_distance;
  double at_time;
  int robot_a;
  int robot_b;
  double first_violation; // earliest violation instant across pairs, -1 if none
  bool clear(double threshold) const { return min_distance > threshold; }
};

// Ground-truth proximity check over all robot pairs.
MonitorResult collision_monitor(const std::vector<Timeline>& robots,
                                double threshold = -1.0,
                                double abort_below = -1.0);

} // namespace wingsched
