#include "wingsched/leftover.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <set>
#include <string>

#include "wingsched/error.hpp"

namespace wingsched {

namespace {

// Minimum gap between consecutive pairs' band-exit times, roughly one band
// city's worth of service. See the split chooser below for why.
constexpr double kBandExitStagger = 240.0;

std::vector<const Task*> make_table(const std::vector<Task>& tasks) {
  TaskId max_id = 0;
  for (const auto& t : tasks) max_id = std::max(max_id, t.id);
  std::vector<const Task*> table(max_id + 1, nullptr);
  for (const auto& t : tasks) table[t.id] = &t;
  return table;
}

const Task& task_at(const std::vector<const Task*>& table, TaskId id) {
  if (id < 0 || id >= static_cast<TaskId>(table.size()) || table[id] == nullptr)
    fail(ErrorKind::Validation, "leftover: unknown task id " + std::to_string(id));
  return *table[id];
}

void finalize_city(City& c, const std::vector<const Task*>& table) {
  c.service = 0.0;
  c.x_min = std::numeric_limits<double>::infinity();
  c.x_max = -std::numeric_limits<double>::infinity();
  double sx = 0.0, sy = 0.0;
  for (TaskId id : c.members) {
    const Task& t = task_at(table, id);
    c.service += t.service_time;
    sx += t.pos.x;
    sy += t.pos.y;
    c.x_min = std::min(c.x_min, t.pos.x);
    c.x_max = std::max(c.x_max, t.pos.x);
  }
  c.rep = {sx / c.members.size(), sy / c.members.size()};
}

} // namespace

std::vector<City> cluster_cities(const std::vector<Task>& leftovers,
                                 const RobotGeometry& geom, int target_size) {
  std::vector<City> cities;
  if (leftovers.empty()) return cities;
  const auto table = make_table(leftovers);

  // contiguous same-reach runs per feature
  std::map<std::pair<int, int>, std::vector<const Task*>> groups;
  for (const auto& t : leftovers)
    groups[{static_cast<int>(t.feature.kind), t.feature.index}].push_back(&t);

  struct Run {
    Feature feature;
    std::uint32_t mask = 0;
    std::vector<const Task*> members;
  };
  std::vector<Run> runs;
  for (auto& [key, vec] : groups) {
    std::sort(vec.begin(), vec.end(), [](const Task* a, const Task* b) {
      return a->feature_ordinal < b->feature_ordinal;
    });
    Run cur;
    int prev_ord = 0;
    for (const Task* t : vec) {
      const std::uint32_t mask = reach_mask(geom, *t);
      if (cur.members.empty() || t->feature_ordinal != prev_ord + 1 || mask != cur.mask) {
        if (!cur.members.empty()) runs.push_back(std::move(cur));
        cur = Run{t->feature, mask, {}};
      }
      cur.members.push_back(t);
      prev_ord = t->feature_ordinal;
    }
    if (!cur.members.empty()) runs.push_back(std::move(cur));
  }

  std::vector<const Run*> singles;
  auto emit = [&](const Run& run, std::size_t lo, std::size_t hi) {
    City c;
    c.feature = run.feature;
    c.reach = run.mask;
    for (std::size_t i = lo; i < hi; ++i) c.members.push_back(run.members[i]->id);
    cities.push_back(std::move(c));
  };
  for (const Run& run : runs) {
    const int n = static_cast<int>(run.members.size());
    if (target_size <= 1) {
      for (int i = 0; i < n; ++i) emit(run, i, i + 1);
      continue;
    }
    if (n == 1) {
      singles.push_back(&run);
      continue;
    }
    const int k_min = (n + 15) / 16;
    const int k_max = std::max(1, n / 2);
    int k = static_cast<int>(std::llround(static_cast<double>(n) / target_size));
    k = std::clamp(k, k_min, k_max);
    const int base = n / k, extra = n % k;
    int at = 0;
    for (int i = 0; i < k; ++i) {
      const int len = base + (i < extra ? 1 : 0);
      emit(run, at, at + len);
      at += len;
    }
  }
  for (auto& c : cities) finalize_city(c, table);

  // isolated holes join the nearest same-feature, same-reach city with room;
  // contiguity is knowingly relaxed there
  for (const Run* run : singles) {
    const Task* t = run->members.front();
    City* best = nullptr;
    double best_d = std::numeric_limits<double>::infinity();
    for (auto& c : cities) {
      if (!(c.feature == run->feature) || c.reach != run->mask) continue;
      if (static_cast<int>(c.members.size()) >= 16) continue;
      const double d = std::abs(c.rep.x - t->pos.x) * 1e6 + std::abs(c.rep.y - t->pos.y);
      if (d < best_d) {
        best_d = d;
        best = &c;
      }
    }
    if (best != nullptr) {
      best->members.push_back(t->id);
      std::sort(best->members.begin(), best->members.end(), [&](TaskId a, TaskId b) {
        return task_at(table, a).feature_ordinal < task_at(table, b).feature_ordinal;
      });
      finalize_city(*best, table);
    } else {
      City c;
      c.feature = run->feature;
      c.reach = run->mask;
      c.members.push_back(t->id);
      c.singleton_flagged = true;
      finalize_city(c, table);
      cities.push_back(std::move(c));
    }
  }

  std::sort(cities.begin(), cities.end(), [](const City& a, const City& b) {
    if (a.feature.kind != b.feature.kind) return a.feature.kind < b.feature.kind;
    if (a.feature.index != b.feature.index) return a.feature.index < b.feature.index;
    return a.x_min < b.x_min;
  });
  for (std::size_t i = 0; i < cities.size(); ++i) cities[i].id = static_cast<int>(i);
  return cities;
}

std::vector<double> row_durations(const std::vector<std::vector<int>>& rows,
                                  const std::vector<City>& cities) {
  std::vector<double> out(rows.size(), 0.0);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (int cid : rows[r]) out[r] += cities[cid].service;
  return out;
}

std::vector<Timeline> leftover_timelines(const std::vector<std::vector<int>>& rows,
                                         const std::vector<City>& cities,
                                         const std::vector<Task>& tasks,
                                         const RobotGeometry& geom) {
  if (rows.size() != geom.robots.size())
    fail(ErrorKind::Validation, "leftover timelines: row count != robot count");
  const auto table = make_table(tasks);
  const auto durations = row_durations(rows, cities);
  const double horizon = durations.empty()
                             ? 0.0
                             : *std::max_element(durations.begin(), durations.end());
  std::vector<Timeline> lines(rows.size());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    Timeline busy;
    double t = 0.0;
    for (int cid : rows[r]) {
      for (TaskId id : cities[cid].members) {
        const Task& task = task_at(table, id);
        busy.push_back({t, t + task.service_time, task.pos});
        t += task.service_time;
      }
    }
    lines[r] = with_parking(busy, geom.robots[r].base, 0.0, horizon);
  }
  return lines;
}

WaitedRows execute_rows_waited(const std::vector<std::vector<int>>& rows,
                               const std::vector<City>& cities,
                               const std::vector<Task>& tasks,
                               const RobotGeometry& geom) {
  if (rows.size() != geom.robots.size())
    fail(ErrorKind::Validation, "leftover timelines: row count != robot count");
  const auto table = make_table(tasks);
  const double prox = geom.proximity();
  const int nr = static_cast<int>(rows.size());

  std::vector<std::vector<const Task*>> queue(nr);
  for (int r = 0; r < nr; ++r)
    for (int cid : rows[r])
      for (TaskId id : cities[cid].members) queue[r].push_back(&task_at(table, id));

  WaitedRows out;
  out.busy.assign(nr, 0.0);
  out.finish.assign(nr, 0.0);

  // Commit one hole at a time, always for the robot whose clock is furthest
  // behind. Each start dodges every already-committed segment within the
  // proximity radius, and commits happen in nondecreasing clock order, so any
  // close pair has the later commit scheduled around the earlier one.
  Timeline committed;
  std::vector<Timeline> busy_lines(nr);
  std::vector<std::size_t> next(nr, 0);
  std::vector<double> t(nr, 0.0);
  for (;;) {
    int r = -1;
    for (int i = 0; i < nr; ++i) {
      if (next[i] >= queue[i].size()) continue;
      if (r < 0 || t[i] < t[r]) r = i;
    }
    if (r < 0) break;
    const Task& task = *queue[r][next[r]++];

    // forbidden start windows are open (t0 - dur, t1); sorted by lower end,
    // one pass settles the start because it only ever moves right
    std::vector<std::pair<double, double>> forbid;
    for (const Segment& s : committed)
      if (distance(s.pos, task.pos) <= prox)
        forbid.emplace_back(s.t0 - task.service_time, s.t1);
    std::sort(forbid.begin(), forbid.end());
    double s = t[r];
    for (const auto& [a, b] : forbid)
      if (a < s && s < b) s = b;

    busy_lines[r].push_back({s, s + task.service_time, task.pos});
    committed.push_back({s, s + task.service_time, task.pos});
    out.busy[r] += task.service_time;
    t[r] = s + task.service_time;
    out.finish[r] = t[r];
  }
  for (double f : out.finish) out.makespan = std::max(out.makespan, f);
  out.lines.resize(nr);
  for (int r = 0; r < nr; ++r)
    out.lines[r] = with_parking(busy_lines[r], geom.robots[r].base, 0.0, out.makespan);
  return out;
}

namespace {

struct PairCtx {
  int index = 0;
  const RobotReach* bottom = nullptr;
  const RobotReach* top = nullptr; // null for single-robot pairs
  double x_lo = 0.0, x_hi = 0.0;   // nominal content bounds
  double band_lo = 0.0, band_hi = 0.0;
};

std::vector<PairCtx> pair_contexts(const PartitionSet& ps, const RobotGeometry& geom) {
  std::vector<PairCtx> pairs(geom.pair_count());
  for (int p = 0; p < geom.pair_count(); ++p) pairs[p].index = p;
  for (const auto& r : geom.robots) {
    PairCtx& pc = pairs[r.pair];
    if (pc.bottom == nullptr) pc.bottom = &r;
    else if (pc.top == nullptr) pc.top = &r;
    else fail(ErrorKind::Validation, "leftover: more than two robots in a pair");
  }
  for (auto& pc : pairs) {
    if (pc.bottom == nullptr)
      fail(ErrorKind::Validation, "leftover: robot pair without robots");
    if (pc.top != nullptr && pc.bottom->side == Side::Top) std::swap(pc.bottom, pc.top);
    const Partition& part = ps.partitions[pc.bottom->id];
    pc.x_lo = part.x_start;
    pc.x_hi = part.x_end;
    if (pc.top != nullptr) {
      pc.band_lo = pc.top->y_min;
      pc.band_hi = pc.bottom->y_max;
    }
  }
  return pairs;
}

} // namespace

ScheduleMatrix build_initial_leftover(const std::vector<City>& cities,
                                      const PartitionSet& ps,
                                      const std::vector<Task>& tasks,
                                      const RobotGeometry& geom) {
  ScheduleMatrix S;
  S.rows.assign(geom.robots.size(), {});
  if (cities.empty()) return S;
  for (std::size_t i = 0; i < cities.size(); ++i)
    if (cities[i].id != static_cast<int>(i))
      fail(ErrorKind::Validation, "leftover: city ids must be dense and ordered");

  const double prox = geom.proximity();
  auto pairs = pair_contexts(ps, geom);
  for (const auto& pc : pairs) {
    if (pc.top == nullptr) continue;
    if (!(pc.band_hi - pc.band_lo > prox))
      fail(ErrorKind::Precondition,
           "leftover: overlap band of pair " + std::to_string(pc.index) +
               " is not wider than the proximity envelope");
  }

  struct PairCities {
    std::vector<const City*> band;   // splittable between the pair's robots
    std::vector<const City*> bottom; // bottom side only
    std::vector<const City*> top;
  };
  std::vector<PairCities> content(pairs.size());

  // which list a city would join in pair pc, or null if out of reach there
  auto dest_list = [&](const City& c, const PairCtx& pc) -> std::vector<const City*>* {
    PairCities& pcs = content[pc.index];
    const bool two = pc.top != nullptr;
    if (two && c.rep.y >= pc.band_lo && c.rep.y <= pc.band_hi &&
        (c.reach & (1u << pc.bottom->id)) && (c.reach & (1u << pc.top->id)))
      return &pcs.band;
    if (!two || c.rep.y < 0.0)
      return (c.reach & (1u << pc.bottom->id)) ? &pcs.bottom : nullptr;
    return (c.reach & (1u << pc.top->id)) ? &pcs.top : nullptr;
  };

  // Cities go to pairs as contiguous axial segments, cut to equalize pair
  // workloads per robot. The cuts are where cross-pair balance is decided:
  // the market trades only within reach, so a skewed pair assignment here
  // is the one imbalance it could never repair.
  std::vector<const City*> ordered;
  for (const auto& c : cities) ordered.push_back(&c);
  std::sort(ordered.begin(), ordered.end(), [](const City* a, const City* b) {
    if (a->rep.x != b->rep.x) return a->rep.x < b->rep.x;
    return a->id < b->id;
  });
  const int nc = static_cast<int>(ordered.size());
  const int m = static_cast<int>(pairs.size());
  {
    double total_service = 0.0;
    for (const auto& c : cities) total_service += c.service;
    int robot_count = 0;
    for (const auto& pc : pairs) robot_count += pc.top == nullptr ? 1 : 2;
    std::vector<double> prefix(nc + 1, 0.0);
    for (int i = 0; i < nc; ++i) prefix[i + 1] = prefix[i] + ordered[i]->service;

    std::vector<int> cuts(m + 1, 0);
    cuts[m] = nc;
    bool ok = true;
    int prev = 0;
    double cum_target = 0.0;
    for (int p = 0; p + 1 < m && ok; ++p) {
      cum_target += total_service * (pairs[p].top == nullptr ? 1 : 2) / robot_count;
      int lo = prev + 1; // every pair keeps at least one city
      while (lo <= nc - (m - 1 - p) &&
             dest_list(*ordered[lo - 1], pairs[p]) == nullptr)
        ++lo;
      int hi = lo;
      const int hi_max = nc - (m - 1 - p);
      while (hi < hi_max && dest_list(*ordered[hi], pairs[p]) != nullptr) ++hi;
      if (lo > hi_max) {
        ok = false;
        break;
      }
      int best = lo;
      double best_err = std::numeric_limits<double>::infinity();
      for (int k = lo; k <= hi; ++k) {
        const double err = std::abs(prefix[k] - cum_target);
        if (err < best_err - 1e-12) {
          best_err = err;
          best = k;
        }
      }
      cuts[p + 1] = best;
      prev = best;
    }
    if (ok) {
      for (int p = 0; p < m && ok; ++p)
        for (int i = cuts[p]; i < cuts[p + 1] && ok; ++i)
          if (dest_list(*ordered[i], pairs[p]) == nullptr) ok = false;
    }
    if (ok) {
      for (int p = 0; p < m; ++p)
        for (int i = cuts[p]; i < cuts[p + 1]; ++i)
          dest_list(*ordered[i], pairs[p])->push_back(ordered[i]);
    } else {
      // segmented assignment impossible (oddly shaped reach); fall back to
      // nearest-interval containment and let the reach check below complain
      for (const City* c : ordered) {
        int best = -1;
        double best_d = std::numeric_limits<double>::infinity();
        for (const auto& pc : pairs) {
          if (dest_list(*c, pc) == nullptr) continue;
          double d;
          if (c->rep.x < pc.x_lo) d = pc.x_lo - c->rep.x;
          else if (c->rep.x > pc.x_hi) d = c->rep.x - pc.x_hi;
          else d = 0.0;
          if (d < best_d) {
            best_d = d;
            best = pc.index;
          }
        }
        if (best < 0)
          fail(ErrorKind::Infeasible,
               "leftover: city " + std::to_string(c->id) + " is out of every pair's reach");
        dest_list(*c, pairs[best])->push_back(c);
      }
    }
  }
  auto by_x = [](const City* a, const City* b) {
    if (a->rep.x != b->rep.x) return a->rep.x < b->rep.x;
    return a->id < b->id;
  };
  for (auto& pcs : content) {
    std::sort(pcs.band.begin(), pcs.band.end(), by_x);
    std::sort(pcs.bottom.begin(), pcs.bottom.end(), by_x);
    std::sort(pcs.top.begin(), pcs.top.end(), by_x);
  }

  // fresh leftover-stage split per pair: bottom takes the head of the band,
  // top the tail; extended parts go first in each row
  double prev_tb = 0.0;
  bool have_prev = false;
  for (const auto& pc : pairs) {
    PairCities& pcs = content[pc.index];
    if (pc.top == nullptr) {
      auto& row = S.rows[pc.bottom->id];
      for (const City* c : pcs.bottom) row.push_back(c->id);
      continue;
    }
    const double pair_total = [&] {
      double v = 0.0;
      for (const City* c : pcs.band) v += c->service;
      for (const City* c : pcs.bottom) v += c->service;
      for (const City* c : pcs.top) v += c->service;
      return v;
    }();
    if (pair_total == 0.0) continue;

    // The band is sliced between the two robots and serviced first; each
    // robot only turns to its exclusive side once its band slice is done.
    // Cutting so both robots leave the band at about the same time keeps
    // them out of each other's way for the whole rest of the stage: after
    // the slices finish, the rows are separated by the band width.
    const int nb = static_cast<int>(pcs.band.size());
    double gray_b = 0.0, gray_t = 0.0;
    for (const City* c : pcs.bottom) gray_b += c->service;
    for (const City* c : pcs.top) gray_t += c->service;
    struct Split {
      int s = -1;
      double x = 0.0, tb = 0.0, tt = 0.0, skew = 0.0;
      bool spacing = false;
    };
    std::vector<Split> splits;
    for (int s = 0; s <= nb; ++s) {
      Split sp;
      sp.s = s;
      if (s == 0) sp.x = pc.x_lo;
      else if (s == nb) sp.x = pc.x_hi;
      else sp.x = 0.5 * (pcs.band[s - 1]->rep.x + pcs.band[s]->rep.x);
      for (int i = 0; i < s; ++i) sp.tb += pcs.band[i]->service;
      for (int i = s; i < nb; ++i) sp.tt += pcs.band[i]->service;
      sp.skew = std::abs((sp.tb + gray_b) - (sp.tt + gray_t));
      sp.spacing = (sp.x - pc.x_lo > prox) && (pc.x_hi - sp.x > prox);
      splits.push_back(sp);
    }
    const Split* chosen = nullptr;
    // most-balanced rows first; among near-ties prefer the bottom robot
    // leaving the band no later than the top one. Split-point spacing and
    // the staircase of exit times across pairs are kept while possible.
    // The staircase step is about one band city: it keeps the seam between
    // pairs quiet, and the step lands on the seam cities every robot around
    // the seam can reach, so the sale market can buy the step back later.
    auto pick = [&](bool need_spacing, bool need_order) -> const Split* {
      const Split* best = nullptr;
      for (const auto& sp : splits) {
        if (need_spacing && !sp.spacing) continue;
        if (need_order && have_prev && !(sp.tb > prev_tb + kBandExitStagger)) continue;
        if (best == nullptr) {
          best = &sp;
          continue;
        }
        const bool sp_first = sp.tb <= sp.tt + 1e-9;
        const bool best_first = best->tb <= best->tt + 1e-9;
        if (sp.skew < best->skew - 1e-9) best = &sp;
        else if (sp.skew < best->skew + 1e-9 && sp_first && !best_first) best = &sp;
      }
      return best;
    };
    chosen = pick(true, true);
    if (chosen == nullptr) chosen = pick(true, false);
    if (chosen == nullptr) chosen = pick(false, false);
    if (chosen == nullptr)
      fail(ErrorKind::Infeasible,
           "leftover: pair " + std::to_string(pc.index) + " admits no band split (" +
               std::to_string(nb) + " band cities, pair total " +
               std::to_string(pair_total) + " s)");
    prev_tb = std::max(prev_tb, chosen->tb);
    have_prev = true;

    auto& brow = S.rows[pc.bottom->id];
    auto& trow = S.rows[pc.top->id];
    for (int i = 0; i < chosen->s; ++i) brow.push_back(pcs.band[i]->id);
    for (const City* c : pcs.bottom) brow.push_back(c->id);
    for (int i = chosen->s; i < nb; ++i) trow.push_back(pcs.band[i]->id);
    for (const City* c : pcs.top) trow.push_back(c->id);
  }

  S.deconflict_moves = deconflict_rows(S.rows, cities, tasks, geom);
  S.slot_count = padded_slot_count(S.rows, cities);
  return S;
}

int deconflict_rows(std::vector<std::vector<int>>& rows, const std::vector<City>& cities,
                    const std::vector<Task>& tasks, const RobotGeometry& geom) {
  // push the later-starting city of any conflict to the end of its row until
  // the monitor is clean
  const double prox = geom.proximity();
  const long cap = std::max<long>(16, static_cast<long>(cities.size()) *
                                          static_cast<long>(cities.size()));
  std::set<std::vector<std::vector<int>>> seen;
  seen.insert(rows);
  long moves = 0;
  for (;; ++moves) {
    const auto lines = leftover_timelines(rows, cities, tasks, geom);
    const auto mon = collision_monitor(lines, prox);
    if (mon.clear(prox)) break;
    if (moves >= cap)
      fail(ErrorKind::Infeasible,
           "leftover: could not clear the initial schedule after " + std::to_string(moves) +
               " moves (robots " + std::to_string(mon.robot_a) + "/" +
               std::to_string(mon.robot_b) + " at t=" + std::to_string(mon.first_violation) +
               ")");
    const double v = mon.first_violation;
    auto city_at = [&](int robot) -> std::pair<int, double> {
      double t = 0.0;
      for (std::size_t i = 0; i < rows[robot].size(); ++i) {
        const double d = cities[rows[robot][i]].service;
        if (v >= t && v < t + d) return {static_cast<int>(i), t};
        t += d;
      }
      return {-1, 0.0};
    };
    const auto [ia, ta] = city_at(mon.robot_a);
    const auto [ib, tb] = city_at(mon.robot_b);
    if (ia < 0 && ib < 0)
      fail(ErrorKind::Validation, "leftover: conflict between parked robots");
    int later, lidx, other, oidx;
    if (ib < 0 || (ia >= 0 && (ta > tb || (ta == tb && mon.robot_a > mon.robot_b)))) {
      later = mon.robot_a; lidx = ia; other = mon.robot_b; oidx = ib;
    } else {
      later = mon.robot_b; lidx = ib; other = mon.robot_a; oidx = ia;
    }
    // candidate rewrites, mildest first; skip any that revisits an earlier
    // arrangement so paired tail cities cannot swap back and forth forever
    struct Move {
      int robot, idx;
      bool front;
    };
    Move cand[4] = {{later, lidx, false}, {other, oidx, false},
                    {later, lidx, true}, {other, oidx, true}};
    bool applied = false;
    for (const Move& mv : cand) {
      if (mv.idx < 0) continue;
      auto& row = rows[mv.robot];
      const int cid = row[mv.idx];
      row.erase(row.begin() + mv.idx);
      if (mv.front) row.insert(row.begin(), cid);
      else row.push_back(cid);
      if (seen.insert(rows).second) {
        applied = true;
        break;
      }
      // been here before; restore and try the next candidate
      row.erase(mv.front ? row.begin() : row.end() - 1);
      row.insert(row.begin() + mv.idx, cid);
    }
    if (!applied)
      fail(ErrorKind::Infeasible,
           "leftover: the initial schedule cannot be cleared by deferring cities (robots " +
               std::to_string(mon.robot_a) + "/" + std::to_string(mon.robot_b) + " at t=" +
               std::to_string(mon.first_violation) + ")");
  }
  return static_cast<int>(moves);
}

int padded_slot_count(const std::vector<std::vector<int>>& rows,
                      const std::vector<City>& cities) {
  // padded width: longest row vs cheapest-cities-to-exceed-equal-share
  if (rows.empty()) return 0;
  double total = 0.0;
  std::vector<double> services;
  for (const auto& c : cities) {
    total += c.service;
    services.push_back(c.service);
  }
  std::sort(services.begin(), services.end());
  const double share = total / static_cast<double>(rows.size());
  double acc = 0.0;
  int k = 0;
  for (double v : services) {
    if (acc > share) break;
    acc += v;
    ++k;
  }
  std::size_t longest = 0;
  for (const auto& row : rows) longest = std::max(longest, row.size());
  return std::max<int>(k, static_cast<int>(longest));
}

} // namespace wingsched
