#include "wingsched/greedy.hpp"

#include "wingsched/error.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <unordered_map>
#include <vector>

namespace wingsched {

namespace {

struct seg_ref {
  int robot = 0;
  double t0 = 0.0;
  double t1 = 0.0;
  Point pos;
};

// Uniform grid over task positions; cell size equals the query radius so a
// 3x3 neighborhood always covers the disc.
struct spatial_hash {
  double cell = 1.0;
  std::unordered_map<std::int64_t, std::vector<seg_ref>> cells;

  static std::int64_t key(std::int64_t cx, std::int64_t cy) { return cx * 1000003 + cy; }

  std::int64_t coord(double v) const { return static_cast<std::int64_t>(std::floor(v / cell)); }

  void insert(const seg_ref& s) { cells[key(coord(s.pos.x), coord(s.pos.y))].push_back(s); }

  template <typename F>
  void query(const Point& p, double radius, F&& fn) const {
    const std::int64_t cx = coord(p.x);
    const std::int64_t cy = coord(p.y);
    for (std::int64_t dx = -1; dx <= 1; ++dx) {
      for (std::int64_t dy = -1; dy <= 1; ++dy) {
        auto it = cells.find(key(cx + dx, cy + dy));
        if (it == cells.end()) continue;
        for (const seg_ref& s : it->second) {
          if (distance(s.pos, p) <= radius) fn(s);
        }
      }
    }
  }
};

// Earliest start >= t_ready such that [s, s + dur) overlaps no committed
// interval of another robot within the proximity radius. Forbidden windows
// are open intervals (t0 - dur, t1); a single pass over them sorted by lower
// end settles s because s only ever moves right.
double earliest_start(const spatial_hash& index, int robot, const Point& p, double dur,
                      double prox, double t_ready) {
  std::vector<std::pair<double, double>> forbid;
  index.query(p, prox, [&](const seg_ref& s) {
    if (s.robot != robot) forbid.emplace_back(s.t0 - dur, s.t1);
  });
  std::sort(forbid.begin(), forbid.end());
  double s = t_ready;
  for (const auto& [a, b] : forbid) {
    if (a < s && s < b) s = b;
  }
  return s;
}

} // namespace

NominalSchedule greedy_schedule(const std::vector<Task>& tasks, const RobotGeometry& geom,
                                const GreedyConfig& cfg) {
  if (cfg.distance_weight < 0.0 || cfg.wait_penalty_weight < 0.0)
    fail(ErrorKind::InvalidConfig, "greedy weights must be non-negative");
  validate_geometry(geom, tasks);

  const int nr = static_cast<int>(geom.robots.size());
  const double prox = geom.proximity();
  std::vector<std::uint32_t> masks(tasks.size(), 0);
  for (std::size_t j = 0; j < tasks.size(); ++j) masks[j] = reach_mask(geom, tasks[j]);

  struct robot_state {
    double t_free = 0.0;
    Point pos;
    bool active = true;
  };
  std::vector<robot_state> rs(nr);
  for (int r = 0; r < nr; ++r) rs[r].pos = geom.robots[r].base;

  std::vector<char> claimed(tasks.size(), 0);
  std::vector<std::vector<ScheduleEntry>> entries(nr);
  spatial_hash index;
  index.cell = std::max(prox, 1e-6);

  // Candidate order per claim: ascending distance-only lower bound, so the
  // scan can stop once the bound exceeds the best full score seen (waits only
  // add to the score).
  std::vector<std::pair<double, std::size_t>> cand;
  cand.reserve(tasks.size());

  std::size_t remaining = tasks.size();
  while (remaining > 0) {
    int r = -1;
    for (int i = 0; i < nr; ++i) {
      if (!rs[i].active) continue;
      if (r < 0 || rs[i].t_free < rs[r].t_free) r = i;
    }
    if (r < 0)
      fail(ErrorKind::Validation, "greedy dispatch stalled with " + std::to_string(remaining) +
                                      " unclaimed tasks (unreachable by every robot)");

    cand.clear();
    for (std::size_t j = 0; j < tasks.size(); ++j) {
      if (claimed[j]) continue;
      if (!(masks[j] & (1u << r))) continue;
      cand.emplace_back(cfg.distance_weight * distance(rs[r].pos, tasks[j].pos), j);
    }
    if (cand.empty()) {
      rs[r].active = false;
      continue;
    }
    std::sort(cand.begin(), cand.end(), [&](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first < b.first;
      return tasks[a.second].id < tasks[b.second].id;
    });

    double best_score = std::numeric_limits<double>::infinity();
    std::size_t best_j = 0;
    double best_start = 0.0;
    for (const auto& [lb, j] : cand) {
      if (lb >= best_score) break;
      const Task& t = tasks[j];
      double start = rs[r].t_free;
      if (cfg.conflict_check)
        start = earliest_start(index, r, t.pos, t.service_time, prox, rs[r].t_free);
      const double score = lb + cfg.wait_penalty_weight * (start - rs[r].t_free);
      if (score < best_score) {
        best_score = score;
        best_j = j;
        best_start = start;
      }
    }

    const Task& t = tasks[best_j];
    claimed[best_j] = 1;
    --remaining;
    entries[r].push_back({t.id, t.pos, best_start, best_start + t.service_time});
    index.insert({r, best_start, best_start + t.service_time, t.pos});
    rs[r].t_free = best_start + t.service_time;
    rs[r].pos = t.pos;
  }

  NominalSchedule out;
  out.robots.resize(nr);
  for (int r = 0; r < nr; ++r) {
    RobotSchedule& sched = out.robots[r];
    sched.robot = r;
    sched.pair = geom.robots[r].pair;
    sched.side = geom.robots[r].side;
    sched.entries = std::move(entries[r]);
    sched.wrap_index = 0;
    if (!sched.entries.empty()) {
      sched.makespan = sched.entries.back().end;
      double lo = sched.entries.front().pos.x;
      double hi = lo;
      for (const ScheduleEntry& e : sched.entries) {
        lo = std::min(lo, e.pos.x);
        hi = std::max(hi, e.pos.x);
      }
      sched.x_start = lo;
      sched.x_end = hi;
      sched.rate = axial_rate_profile(sched, 2.0);
    }
    out.makespan = std::max(out.makespan, sched.makespan);
  }
  return out;
}

} // namespace wingsched
