#include "wingsched/timeline.hpp"

#include <algorithm>
#include <limits>

#include "wingsched/error.hpp"

namespace wingsched {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

Timeline with_parking(const std::vector<Segment>& busy, Point park, double t0,
                      double t1) {
  Timeline out;
  out.reserve(busy.size() * 2 + 1);
  double cursor = t0;
  for (const auto& s : busy) {
    if (s.t1 <= s.t0) continue; // ignore zero-length entries
    if (s.t0 < cursor)
      fail(ErrorKind::Precondition, "timeline: busy segments overlap or unsorted");
    if (s.t0 > cursor) out.push_back({cursor, s.t0, park});
    out.push_back(s);
    cursor = s.t1;
  }
  if (cursor < t1) out.push_back({cursor, t1, park});
  return out;
}

PairDistance pair_min_distance(const Timeline& a, const Timeline& b,
                               double threshold, double abort_below) {
  PairDistance best{kInf, -1.0, -1.0};
  std::size_t i = 0, j = 0;
  while (i < a.size() && j < b.size()) {
    const double lo = std::max(a[i].t0, b[j].t0);
    const double hi = std::min(a[i].t1, b[j].t1);
    if (hi > lo) {
      const double d = distance(a[i].pos, b[j].pos);
      if (d < best.min_distance) {
        best.min_distance = d;
        best.at_time = lo;
        if (abort_below >= 0.0 && d < abort_below) return best;
      }
      if (threshold >= 0.0 && d <= threshold && best.first_violation < 0.0)
        best.first_violation = lo;
    }
    if (a[i].t1 <= b[j].t1)
      ++i;
    else
      ++j;
  }
  return best;
}

MonitorResult collision_monitor(const std::vector<Timeline>& robots,
                                double threshold, double abort_below) {
  MonitorResult res{kInf, -1.0, -1, -1, -1.0};
  const int n = static_cast<int>(robots.size());
  for (int a = 0; a < n; ++a) {
    for (int b = a + 1; b < n; ++b) {
      const PairDistance pd =
          pair_min_distance(robots[a], robots[b], threshold, abort_below);
      if (pd.min_distance < res.min_distance) {
        res.min_distance = pd.min_distance;
        res.at_time = pd.at_time;
        res.robot_a = a;
        res.robot_b = b;
        if (abort_below >= 0.0 && res.min_distance < abort_below) return res;
      }
      if (pd.first_violation >= 0.0 &&
          (res.first_violation < 0.0 || pd.first_violation < res.first_violation))
        res.first_violation = pd.first_violation;
    }
  }
  return res;
}

} // namespace wingsched
