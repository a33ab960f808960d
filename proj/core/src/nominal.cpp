#include "wingsched/nominal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wingsched/error.hpp"

namespace wingsched {

namespace {

struct PhaseStations {
  // (axial position, first service start) per distinct station, in sweep order
  std::vector<std::pair<double, double>> stations;
};

std::vector<PhaseStations> route_phases(const RobotSchedule& rs) {
  std::vector<PhaseStations> phases;
  const int n = static_cast<int>(rs.entries.size());
  const int wrap = (rs.wrap_index > 0 && rs.wrap_index < n) ? rs.wrap_index : n;
  auto collect = [&](int lo, int hi) {
    PhaseStations ph;
    for (int i = lo; i < hi; ++i) {
      const double x = rs.entries[i].pos.x;
      if (ph.stations.empty() || ph.stations.back().first != x)
        ph.stations.emplace_back(x, rs.entries[i].start);
    }
    if (!ph.stations.empty()) phases.push_back(std::move(ph));
  };
  collect(0, wrap);
  if (wrap < n) collect(wrap, n);
  return phases;
}

} // namespace

RobotRate axial_rate_profile(const RobotSchedule& rs, double window) {
  if (window <= 0.0) fail(ErrorKind::InvalidConfig, "rate profile: window must be positive");
  RobotRate out;
  const auto phases = route_phases(rs);
  double dist = 0.0;
  for (const auto& ph : phases)
    dist += ph.stations.back().first - ph.stations.front().first;
  if (rs.makespan <= 0.0 || dist <= 0.0) {
    out.degenerate = true;
    return out;
  }
  out.q = dist / rs.makespan;
  for (const auto& ph : phases) {
    const auto& st = ph.stations;
    const int k = static_cast<int>(st.size());
    for (int i = 0; i < k; ++i) {
      int j = i + 1;
      while (j < k && st[j].first - st[i].first < window) ++j;
      if (j >= k) {
        if (i == 0 && k >= 2) j = k - 1; // short phase: one whole-span window
        else break;
      }
      const double dx = st[j].first - st[i].first;
      const double dt = st[j].second - st[i].second;
      if (dt <= 0.0) continue;
      out.delta_q = std::max(out.delta_q, std::abs(dx / dt - out.q));
    }
  }
  return out;
}

NominalSchedule build_nominal(const PartitionSet& ps, const std::vector<Task>& active,
                              const RobotGeometry& geom, double rate_window) {
  if (ps.partitions.empty()) fail(ErrorKind::Validation, "nominal: empty partition set");

  TaskId max_id = 0;
  for (const auto& t : active) max_id = std::max(max_id, t.id);
  std::vector<const Task*> table(max_id + 1, nullptr);
  for (const auto& t : active) table[t.id] = &t;

  const double prox = geom.proximity();
  NominalSchedule sched;
  sched.robots.resize(ps.partitions.size());

  // A two-robot pair without a usable offset cannot be sequenced safely.
  std::vector<int> pair_robot_count(geom.pair_count(), 0);
  for (const auto& r : geom.robots) ++pair_robot_count[r.pair];

  for (const auto& part : ps.partitions) {
    if (pair_robot_count[part.pair] == 2 && part.side == Side::Top && !part.offset) {
      std::string why = ps.offset_failure.empty() ? "offset missing" : ps.offset_failure;
      fail(ErrorKind::Constraint,
           "nominal: pair " + std::to_string(part.pair) + " has no start offset (" + why + ")");
    }
    if (part.offset) {
      if (!(part.offset->l > prox) || !(part.offset->l_star > prox))
        fail(ErrorKind::Constraint,
             "nominal: pair " + std::to_string(part.pair) +
                 " offset legs do not clear the proximity envelope");
    }

    RobotSchedule rs;
    rs.robot = part.robot;
    rs.pair = part.pair;
    rs.side = part.side;
    rs.x_start = part.x_start;
    rs.x_end = part.x_end;
    rs.offset = part.offset;

    const int n = static_cast<int>(part.tasks.size());
    const int split = part.offset ? part.offset->split_index : 0;
    if (part.offset && (split <= 0 || split >= n))
      fail(ErrorKind::Validation, "nominal: offset split outside the task sequence");

    auto append = [&](int lo, int hi, double& cursor) {
      for (int i = lo; i < hi; ++i) {
        const TaskId id = part.tasks[i];
        if (id < 0 || id > max_id || table[id] == nullptr)
          fail(ErrorKind::Validation, "nominal: partition references unknown task");
        const Task& t = *table[id];
        rs.entries.push_back({id, t.pos, cursor, cursor + t.service_time});
        cursor += t.service_time;
      }
    };
    double cursor = 0.0;
    if (part.offset) {
      append(split, n, cursor);
      rs.wrap_index = static_cast<int>(rs.entries.size());
      const double wrap_time = cursor;
      append(0, split, cursor);
      if (std::abs(wrap_time - part.offset->t_star) > 1e-6)
        fail(ErrorKind::Validation, "nominal: offset wrap time disagrees with partition");
    } else {
      append(0, n, cursor);
      rs.wrap_index = 0;
    }
    rs.makespan = cursor;
    rs.rate = axial_rate_profile(rs, rate_window);
    sched.makespan = std::max(sched.makespan, rs.makespan);
    sched.robots[part.robot] = std::move(rs);
  }

  // Wrap times must increase strictly along the axial pair order.
  double prev_tstar = 0.0;
  int prev_pair = -1;
  for (const auto& rs : sched.robots) {
    if (!rs.offset) continue;
    if (prev_pair >= 0 && !(rs.offset->t_star > prev_tstar))
      fail(ErrorKind::Constraint,
           "nominal: pair " + std::to_string(rs.pair) + " wraps no later than pair " +
               std::to_string(prev_pair));
    prev_tstar = rs.offset->t_star;
    prev_pair = rs.pair;
  }
  return sched;
}

std::vector<Timeline> schedule_timelines(const NominalSchedule& s,
                                         const RobotGeometry& geom, double horizon) {
  std::vector<Timeline> lines(s.robots.size());
  for (const auto& rs : s.robots) {
    Timeline busy;
    busy.reserve(rs.entries.size());
    for (const auto& e : rs.entries) busy.push_back({e.start, e.end, e.pos});
    lines[rs.robot] = with_parking(busy, geom.robots[rs.robot].base, 0.0, horizon);
  }
  return lines;
}

ConstraintReport check_constraints(const NominalSchedule& s, const RobotGeometry& geom) {
  ConstraintReport rep;
  const double prox = geom.proximity();

  rep.c1_pass = true;
  for (const auto& rs : s.robots) {
    if (!rs.offset) continue;
    C1Slack slack{rs.robot, rs.offset->l - prox, rs.offset->l_star - prox};
    rep.c1_pass = rep.c1_pass && slack.l_slack > 0.0 && slack.l_star_slack > 0.0;
    rep.c1_slacks.push_back(slack);
  }

  rep.c2_pass = true;
  {
    int prev_pair = -1;
    double prev_tstar = 0.0;
    for (const auto& rs : s.robots) {
      if (!rs.offset) continue;
      if (prev_pair >= 0) {
        C2Slack slack{prev_pair, rs.pair, rs.offset->t_star - prev_tstar};
        rep.c2_pass = rep.c2_pass && slack.slack > 0.0;
        rep.c2_slacks.push_back(slack);
      }
      prev_pair = rs.pair;
      prev_tstar = rs.offset->t_star;
    }
  }

  // Rate-based margins per two-robot pair, against the proximity envelope.
  // Two routes can close on each other no faster than the sum of their rate
  // deviations plus the mismatch of their average rates.
  rep.min_margin = std::numeric_limits<double>::infinity();
  const RobotSchedule* prev_top = nullptr;
  for (int p = 0; p < geom.pair_count(); ++p) {
    const RobotSchedule* bottom = nullptr;
    const RobotSchedule* top = nullptr;
    for (const auto& rs : s.robots) {
      if (rs.pair != p) continue;
      (rs.side == Side::Bottom ? bottom : top) = &rs;
    }
    if (bottom == nullptr || top == nullptr || !top->offset) {
      prev_top = (top && top->offset) ? top : nullptr;
      continue;
    }
    PairRobustness pm;
    pm.pair = p;
    const double tstar = top->offset->t_star;
    const double t_total = std::max(bottom->makespan, top->makespan);
    auto closing_rate = [](const RobotRate& a, const RobotRate& b) {
      return a.delta_q + b.delta_q + std::abs(a.q - b.q);
    };
    if (prev_top != nullptr) {
      const double rate = closing_rate(bottom->rate, prev_top->rate);
      pm.boundary_margin =
          prev_top->offset->l_star - rate * prev_top->offset->t_star - prox;
      rep.min_margin = std::min(rep.min_margin, *pm.boundary_margin);
    }
    const double rate_in = closing_rate(bottom->rate, top->rate);
    pm.offset_margin = top->offset->l - rate_in * tstar - prox;
    const double lead = (bottom->rate.q - bottom->rate.delta_q) * tstar;
    pm.return_margin = lead - rate_in * (t_total - tstar) - prox;
    rep.min_margin = std::min({rep.min_margin, pm.offset_margin, pm.return_margin});
    rep.margins.push_back(pm);
    prev_top = top;
  }
  if (rep.margins.empty()) rep.min_margin = 0.0;

  rep.apriori_pass = rep.c1_pass && rep.c2_pass;
  for (const auto& pm : rep.margins) {
    if (pm.boundary_margin && !(*pm.boundary_margin > 0.0)) rep.apriori_pass = false;
    if (!(pm.offset_margin > 0.0) || !(pm.return_margin > 0.0)) rep.apriori_pass = false;
  }

  const auto lines = schedule_timelines(s, geom, s.makespan);
  rep.sweep = collision_monitor(lines, prox);
  rep.pass = rep.sweep.clear(prox);
  return rep;
}

} // namespace wingsched
