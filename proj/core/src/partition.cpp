#include "wingsched/partition.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>

#include "wingsched/error.hpp"

namespace wingsched {

namespace {

constexpr double kEps = 1e-9;

struct PairInfo {
  int index = 0;
  const RobotReach* bottom = nullptr; // single-robot pairs use bottom only
  const RobotReach* top = nullptr;
  double lo = 0.0, hi = 0.0; // intersected axial reach
  bool two() const { return top != nullptr; }
};

std::vector<PairInfo> collect_pairs(const RobotGeometry& geom) {
  const int m = geom.pair_count();
  std::vector<PairInfo> pairs(m);
  for (int p = 0; p < m; ++p) pairs[p].index = p;
  for (const auto& r : geom.robots) {
    PairInfo& pi = pairs[r.pair];
    if (r.side == Side::Top && pi.top == nullptr && pi.bottom != nullptr) {
      pi.top = &r;
    } else if (pi.bottom == nullptr) {
      pi.bottom = &r;
    } else if (pi.top == nullptr) {
      pi.top = &r;
    } else {
      fail(ErrorKind::Validation, "partition: more than two robots in a pair");
    }
  }
  for (auto& pi : pairs) {
    if (pi.bottom == nullptr)
      fail(ErrorKind::Validation, "partition: empty robot pair");
    // Keep bottom/top roles consistent with the declared sides.
    if (pi.two() && pi.bottom->side == Side::Top) std::swap(pi.bottom, pi.top);
    pi.lo = pi.bottom->x_min;
    pi.hi = pi.bottom->x_max;
    if (pi.two()) {
      pi.lo = std::max(pi.lo, pi.top->x_min);
      pi.hi = std::min(pi.hi, pi.top->x_max);
    }
  }
  for (std::size_t p = 1; p < pairs.size(); ++p)
    if (pairs[p].lo < pairs[p - 1].lo)
      fail(ErrorKind::Validation, "partition: pairs must be indexed in axial order");
  return pairs;
}

// Deterministic even-spread selection of the relegated overlap subset.
std::vector<TaskId> pick_relegated(const std::vector<Task>& active, double fraction) {
  std::vector<const Task*> overlap;
  for (const auto& t : active)
    if (t.overlap_feature) overlap.push_back(&t);
  std::sort(overlap.begin(), overlap.end(), [](const Task* a, const Task* b) {
    if (a->pos.x != b->pos.x) return a->pos.x < b->pos.x;
    return a->id < b->id;
  });
  const int n = static_cast<int>(overlap.size());
  const int count = static_cast<int>(std::lround(fraction * n));
  std::vector<TaskId> out;
  out.reserve(count);
  if (count <= 0) return out;
  for (int i = 0; i < count; ++i) {
    const int idx = static_cast<int>((i + 0.5) * n / count);
    out.push_back(overlap[std::min(idx, n - 1)]->id);
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

// Sweep order within each side: axial position, then outward from the
// centre line, then id. A robot services its tasks in exactly this order.
bool key_less(const Task* a, const Task* b) {
  if (a->pos.x != b->pos.x) return a->pos.x < b->pos.x;
  const double oa = std::abs(a->pos.y);
  const double ob = std::abs(b->pos.y);
  if (oa != ob) return oa < ob;
  return a->id < b->id;
}

double imbalance(const std::vector<double>& totals) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
  for (double v : totals) {
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return totals.empty() ? 0.0 : hi - lo;
}

// Assignment state: one task stream per side in sweep order, cut into
// contiguous per-pair segments at task granularity. Boundary tasks shift
// across cuts and cross-band tasks flip sides; both at single-task
// resolution, which is what bounds the final imbalance by one service time.
struct State {
  const RobotGeometry* geom = nullptr;
  std::vector<PairInfo> pairs;
  double fraction = 1.0;
  std::vector<TaskId> relegated;

  std::vector<const Task*> stream[2]; // [side], key-ordered
  std::vector<int> side_pairs[2];     // pair indexes with a robot on the side
  std::vector<int> pos_in_side[2];    // pair index -> position in side_pairs, or -1
  std::vector<int> cuts[2];           // segment boundaries, size side_pairs-1
  std::vector<double> totals;         // per robot

  const RobotReach* robot_on(int side, int pair) const {
    const PairInfo& pi = pairs[pair];
    if (pi.two()) return side == 0 ? pi.bottom : pi.top;
    return (pi.bottom->side == Side::Bottom ? 0 : 1) == side ? pi.bottom : nullptr;
  }
  int seg_lo(int s, int i) const { return i == 0 ? 0 : cuts[s][i - 1]; }
  int seg_hi(int s, int i) const {
    return i + 1 == static_cast<int>(side_pairs[s].size()) ? static_cast<int>(stream[s].size())
                                                           : cuts[s][i];
  }
  int segment_of(int s, int k) const {
    for (int i = 0; i < static_cast<int>(side_pairs[s].size()); ++i)
      if (k < seg_hi(s, i)) return i;
    return static_cast<int>(side_pairs[s].size()) - 1;
  }
};

void index_sides(State& st) {
  const int m = static_cast<int>(st.pairs.size());
  for (int s = 0; s < 2; ++s) {
    st.side_pairs[s].clear();
    st.pos_in_side[s].assign(m, -1);
    for (int p = 0; p < m; ++p) {
      if (st.robot_on(s, p) != nullptr) {
        st.pos_in_side[s][p] = static_cast<int>(st.side_pairs[s].size());
        st.side_pairs[s].push_back(p);
      }
    }
  }
}

void recompute_totals(State& st) {
  st.totals.assign(st.geom->robots.size(), 0.0);
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < static_cast<int>(st.side_pairs[s].size()); ++i) {
      const RobotReach* r = st.robot_on(s, st.side_pairs[s][i]);
      for (int k = st.seg_lo(s, i); k < st.seg_hi(s, i); ++k)
        st.totals[r->id] += st.stream[s][k]->service_time;
    }
  }
}

// Initial cut placement: task prefix sums against equal-share targets,
// restricted to cut locations both neighbouring robots can reach axially.
void initial_cuts(State& st) {
  for (int s = 0; s < 2; ++s) {
    const int k = static_cast<int>(st.side_pairs[s].size());
    st.cuts[s].assign(std::max(0, k - 1), 0);
    const int n = static_cast<int>(st.stream[s].size());
    if (k <= 1) {
      if (k == 0 && n > 0)
        fail(ErrorKind::Infeasible, "partition: tasks on a side without robots");
      continue;
    }
    if (n < k)
      fail(ErrorKind::Infeasible, "partition: fewer tasks than robots on one side");
    std::vector<double> prefix(n + 1, 0.0);
    for (int i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + st.stream[s][i]->service_time;
    const double total = prefix[n];
    int prev = 0;
    for (int i = 0; i + 1 < k; ++i) {
      const RobotReach* lp = st.robot_on(s, st.side_pairs[s][i]);
      const RobotReach* rp = st.robot_on(s, st.side_pairs[s][i + 1]);
      int cmin = prev + 1;
      while (cmin < n && st.stream[s][cmin]->pos.x < rp->x_min - kEps) ++cmin;
      int cmax = n - (k - i - 1);
      while (cmax > cmin && st.stream[s][cmax - 1]->pos.x > lp->x_max + kEps) --cmax;
      if (cmin > cmax)
        fail(ErrorKind::Infeasible, "partition: no feasible cut between pairs " +
                                        std::to_string(st.side_pairs[s][i]) + " and " +
                                        std::to_string(st.side_pairs[s][i + 1]));
      const double target = total * (i + 1) / k;
      int best = cmin;
      double best_err = std::numeric_limits<double>::infinity();
      for (int c = cmin; c <= cmax; ++c) {
        const double err = std::abs(prefix[c] - target);
        if (err < best_err - kEps) {
          best_err = err;
          best = c;
        }
      }
      st.cuts[s][i] = best;
      prev = best;
    }
  }
}

// Lexicographic balance objective: the max-min spread first, the summed
// absolute deviation from the mean second (lets the search cross plateaus).
std::pair<double, double> objective(const std::vector<double>& totals) {
  double mean = 0.0;
  for (double v : totals) mean += v;
  mean /= totals.empty() ? 1.0 : static_cast<double>(totals.size());
  double dev = 0.0;
  for (double v : totals) dev += std::abs(v - mean);
  return {imbalance(totals), dev};
}

bool lex_better(const std::pair<double, double>& a, const std::pair<double, double>& b) {
  if (a.first < b.first - kEps) return true;
  if (a.first > b.first + kEps) return false;
  return a.second < b.second - kEps;
}

// First-improvement local search: boundary tasks move across pair cuts,
// cross-band tasks flip sides within their pair.
void local_search(State& st) {
  long applied = 0;
  const long cap = 200000;
  const double band = st.geom->cross_reach / 2.0;

  auto try_cut_move = [&](int s, int i, bool left_takes) -> bool {
    const int c = st.cuts[s][i];
    const RobotReach* lr = st.robot_on(s, st.side_pairs[s][i]);
    const RobotReach* rr = st.robot_on(s, st.side_pairs[s][i + 1]);
    const Task* t;
    const RobotReach *from, *to;
    if (left_takes) {
      if (st.seg_hi(s, i + 1) - c <= 1) return false; // keep every robot non-empty
      t = st.stream[s][c];
      from = rr;
      to = lr;
    } else {
      if (c - st.seg_lo(s, i) <= 1) return false;
      t = st.stream[s][c - 1];
      from = lr;
      to = rr;
    }
    if (!robot_reaches(*to, *t)) return false;
    const auto before = objective(st.totals);
    st.totals[from->id] -= t->service_time;
    st.totals[to->id] += t->service_time;
    if (lex_better(objective(st.totals), before)) {
      st.cuts[s][i] = left_takes ? c + 1 : c - 1;
      return true;
    }
    st.totals[from->id] += t->service_time;
    st.totals[to->id] -= t->service_time;
    return false;
  };

  auto try_flip = [&](int s, int k) -> bool {
    const Task* t = st.stream[s][k];
    if (std::abs(t->pos.y) > band + kEps) return false;
    const int i = st.segment_of(s, k);
    const int p = st.side_pairs[s][i];
    if (!st.pairs[p].two()) return false;
    if (st.seg_hi(s, i) - st.seg_lo(s, i) <= 1) return false;
    const int s2 = 1 - s;
    const RobotReach* cur = st.robot_on(s, p);
    const RobotReach* other = st.robot_on(s2, p);
    if (other == nullptr || !robot_reaches(*other, *t)) return false;

    const auto before = objective(st.totals);
    st.totals[cur->id] -= t->service_time;
    st.totals[other->id] += t->service_time;
    if (!lex_better(objective(st.totals), before)) {
      st.totals[cur->id] += t->service_time;
      st.totals[other->id] -= t->service_time;
      return false;
    }
    // the task has to stay in the same pair on the other side
    const int i2 = st.pos_in_side[s2][p];
    auto it = std::lower_bound(st.stream[s2].begin(), st.stream[s2].end(), t, key_less);
    const int idx = static_cast<int>(it - st.stream[s2].begin());
    if (idx < st.seg_lo(s2, i2) || idx > st.seg_hi(s2, i2)) {
      st.totals[cur->id] += t->service_time;
      st.totals[other->id] -= t->service_time;
      return false;
    }
    st.stream[s].erase(st.stream[s].begin() + k);
    for (int& c : st.cuts[s])
      if (c > k) --c;
    st.stream[s2].insert(st.stream[s2].begin() + idx, t);
    for (int j = i2; j < static_cast<int>(st.cuts[s2].size()); ++j) ++st.cuts[s2][j];
    return true;
  };

  bool improved = true;
  while (improved && applied < cap) {
    improved = false;
    for (int s = 0; s < 2 && !improved; ++s)
      for (int i = 0; i < static_cast<int>(st.cuts[s].size()) && !improved; ++i) {
        if (try_cut_move(s, i, true) || try_cut_move(s, i, false)) improved = true;
      }
    for (int s = 0; s < 2 && !improved; ++s)
      for (int k = 0; k < static_cast<int>(st.stream[s].size()) && !improved; ++k)
        improved = try_flip(s, k);
    if (improved) ++applied;
  }
}

PartitionSet assemble(State& st, const std::vector<Task>& active) {
  PartitionSet ps;
  ps.overlap_fraction = st.fraction;
  ps.relegated_overlap = st.relegated;
  const int nr = static_cast<int>(st.geom->robots.size());
  const int m = static_cast<int>(st.pairs.size());

  std::vector<std::vector<const Task*>> per_robot(nr);
  std::vector<double> pair_lo(m, std::numeric_limits<double>::infinity());
  std::vector<double> pair_hi(m, -std::numeric_limits<double>::infinity());
  ps.pair_service.assign(m, 0.0);
  for (int s = 0; s < 2; ++s) {
    for (int i = 0; i < static_cast<int>(st.side_pairs[s].size()); ++i) {
      const int p = st.side_pairs[s][i];
      const RobotReach* r = st.robot_on(s, p);
      for (int k = st.seg_lo(s, i); k < st.seg_hi(s, i); ++k) {
        const Task* t = st.stream[s][k];
        if (!robot_reaches(*r, *t))
          fail(ErrorKind::Infeasible, "partition: task " + std::to_string(t->id) +
                                          " out of reach of robot " + std::to_string(r->id));
        per_robot[r->id].push_back(t);
        pair_lo[p] = std::min(pair_lo[p], t->pos.x);
        pair_hi[p] = std::max(pair_hi[p], t->pos.x);
        ps.pair_service[p] += t->service_time;
      }
    }
  }

  ps.partitions.resize(nr);
  double max_single = 0.0;
  for (const auto& t : active) max_single = std::max(max_single, t.service_time);
  for (const auto& r : st.geom->robots) {
    Partition part;
    part.robot = r.id;
    part.pair = r.pair;
    part.side = r.side;
    part.x_start = pair_lo[r.pair];
    part.x_end = pair_hi[r.pair];
    part.total_service = st.totals.empty() ? 0.0 : st.totals[r.id];
    for (const Task* t : per_robot[r.id]) part.tasks.push_back(t->id);
    ps.partitions[r.id] = std::move(part);
  }

  ps.max_imbalance = imbalance(st.totals);
  double total = 0.0;
  for (double v : st.totals) total += v;
  ps.balance_violated =
      (!st.totals.empty() && max_single > total / st.totals.size() + kEps) ||
      ps.max_imbalance > max_single + kEps;
  return ps;
}

} // namespace

PartitionSet rebalance_pairwise(PartitionSet ps, const std::vector<Task>& active,
                                const RobotGeometry& geom) {
  // Rebuild the stream state from the existing assignment, re-run the local
  // search, and reselect offsets.
  State st;
  st.geom = &geom;
  st.pairs = collect_pairs(geom);
  st.fraction = ps.overlap_fraction;
  st.relegated = ps.relegated_overlap;
  index_sides(st);

  std::vector<const Task*> table;
  TaskId max_id = 0;
  for (const auto& t : active) max_id = std::max(max_id, t.id);
  table.assign(max_id + 1, nullptr);
  for (const auto& t : active) table[t.id] = &t;

  // per-robot task sets in sweep order, concatenated per side in pair order;
  // the concatenation must itself be in sweep order (contiguity in x)
  for (int s = 0; s < 2; ++s) {
    st.stream[s].clear();
    std::vector<int> cut_list;
    for (int i = 0; i < static_cast<int>(st.side_pairs[s].size()); ++i) {
      const RobotReach* r = st.robot_on(s, st.side_pairs[s][i]);
      if (i > 0) cut_list.push_back(static_cast<int>(st.stream[s].size()));
      const Partition& part = ps.partitions.at(r->id);
      if (part.robot != r->id)
        fail(ErrorKind::Validation, "rebalance: partitions must be indexed by robot id");
      std::vector<const Task*> own;
      for (TaskId id : part.tasks) {
        if (id < 0 || id > max_id || table[id] == nullptr)
          fail(ErrorKind::Validation, "rebalance: partition references unknown task");
        own.push_back(table[id]);
      }
      std::sort(own.begin(), own.end(), key_less);
      st.stream[s].insert(st.stream[s].end(), own.begin(), own.end());
    }
    for (std::size_t k = 1; k < st.stream[s].size(); ++k)
      if (!key_less(st.stream[s][k - 1], st.stream[s][k]))
        fail(ErrorKind::Validation, "rebalance: partitions are not axially contiguous per side");
    st.cuts[s] = std::move(cut_list);
  }
  recompute_totals(st);

  local_search(st);
  PartitionSet out = assemble(st, active);

  // start offsets per two-robot pair, at task-boundary granularity
  const double prox = geom.proximity();
  double prev_tstar = 0.0;
  bool have_prev = false;
  out.offset_failure.clear();
  for (const auto& pi : st.pairs) {
    if (!pi.two()) continue;
    Partition& part = out.partitions[pi.top->id];
    const int n = static_cast<int>(part.tasks.size());
    int best = -1;
    double best_err = std::numeric_limits<double>::infinity();
    double best_tstar = 0.0;
    if (n >= 2) {
      std::vector<double> suffix(n + 1, 0.0);
      for (int i = n - 1; i >= 0; --i)
        suffix[i] = suffix[i + 1] + table[part.tasks[i]]->service_time;
      for (int s = 1; s < n; ++s) {
        const double xs = table[part.tasks[s]]->pos.x;
        if (xs <= table[part.tasks[s - 1]]->pos.x) continue; // stay on station bounds
        const double l = xs - part.x_start;
        const double l_star = part.x_end - xs;
        if (!(l > prox) || !(l_star > prox)) continue;
        const double tstar = suffix[s];
        if (have_prev && !(tstar > prev_tstar)) continue;
        const double err = std::abs(tstar - part.total_service / 2.0);
        if (err < best_err - kEps) {
          best_err = err;
          best = s;
          best_tstar = tstar;
        }
      }
    }
    if (best < 0) {
      if (out.offset_failure.empty())
        out.offset_failure =
            "no feasible start offset for pair " + std::to_string(pi.index);
      continue;
    }
    OffsetInfo info;
    info.split_index = best;
    info.l = table[part.tasks[best]]->pos.x - part.x_start;
    info.l_star = part.x_end - table[part.tasks[best]]->pos.x;
    info.t_star = best_tstar;
    info.t_head = part.total_service - best_tstar;
    part.offset = info;
    prev_tstar = best_tstar;
    have_prev = true;
  }
  return out;
}

PartitionSet partition(const std::vector<Task>& active, const RobotGeometry& geom,
                       double overlap_fraction) {
  if (active.empty()) fail(ErrorKind::Validation, "partition: empty task set");
  if (geom.robots.empty()) fail(ErrorKind::Validation, "partition: no robots");
  if (overlap_fraction < 0.0 || overlap_fraction > 1.0)
    fail(ErrorKind::InvalidConfig, "partition: overlap_fraction outside [0,1]");

  State st;
  st.geom = &geom;
  st.pairs = collect_pairs(geom);
  st.fraction = overlap_fraction;
  st.relegated = pick_relegated(active, overlap_fraction);
  index_sides(st);

  std::vector<bool> relegated_mask;
  TaskId max_id = 0;
  for (const auto& t : active) max_id = std::max(max_id, t.id);
  relegated_mask.assign(max_id + 1, false);
  for (TaskId id : st.relegated) relegated_mask[id] = true;

  // side streams: below the centre line bottom, above it top, centre-line
  // tasks alternating (they are the in-pair balance levers)
  int centre_flip = 0;
  for (const auto& t : active) {
    if (relegated_mask[t.id]) continue;
    int s;
    if (t.pos.y < 0.0) s = 0;
    else if (t.pos.y > 0.0) s = 1;
    else s = centre_flip++ % 2;
    if (st.side_pairs[s].empty()) s = 1 - s;
    st.stream[s].push_back(&t);
  }
  if (st.stream[0].empty() && st.stream[1].empty())
    fail(ErrorKind::Validation, "partition: nothing to partition after relegation");
  std::sort(st.stream[0].begin(), st.stream[0].end(), key_less);
  std::sort(st.stream[1].begin(), st.stream[1].end(), key_less);

  initial_cuts(st);
  recompute_totals(st);

  PartitionSet coarse = assemble(st, active);
  PartitionSet out = rebalance_pairwise(std::move(coarse), active, geom);
  validate_partition(out, active, geom);
  return out;
}

void validate_partition(const PartitionSet& ps, const std::vector<Task>& active,
                        const RobotGeometry& geom) {
  TaskId max_id = 0;
  for (const auto& t : active) max_id = std::max(max_id, t.id);
  std::vector<const Task*> table(max_id + 1, nullptr);
  for (const auto& t : active) table[t.id] = &t;

  std::vector<int> seen(max_id + 1, 0);
  for (TaskId id : ps.relegated_overlap) {
    if (id < 0 || id > max_id || table[id] == nullptr)
      fail(ErrorKind::Validation, "partition: relegated id not in active set");
    ++seen[id];
    if (std::popcount(reach_mask(geom, *table[id])) < 2)
      fail(ErrorKind::Validation, "partition: relegated task in a single-reach region");
  }
  for (const auto& part : ps.partitions) {
    const RobotReach& r = geom.robots[part.robot];
    for (TaskId id : part.tasks) {
      if (id < 0 || id > max_id || table[id] == nullptr)
        fail(ErrorKind::Validation, "partition: task id not in active set");
      ++seen[id];
      if (!robot_reaches(r, *table[id]))
        fail(ErrorKind::Validation,
             "partition: task " + std::to_string(id) + " out of reach of robot " +
                 std::to_string(part.robot));
    }
    if (part.offset) {
      const double len = part.x_end - part.x_start;
      if (len < 2.0 * geom.proximity())
        fail(ErrorKind::Constraint,
             "partition: pair " + std::to_string(part.pair) +
                 " interval shorter than twice the proximity envelope");
      if (!(part.offset->l > geom.proximity()) ||
          !(part.offset->l_star > geom.proximity()))
        fail(ErrorKind::Constraint, "partition: offset legs violate the proximity bound");
      if (std::abs(part.offset->l + part.offset->l_star - len) > 1e-6)
        fail(ErrorKind::Validation, "partition: offset legs do not span the interval");
    }
  }
  for (const auto& t : active)
    if (seen[t.id] != 1)
      fail(ErrorKind::Validation,
           "partition: task " + std::to_string(t.id) + " covered " +
               std::to_string(seen[t.id]) + " times");

  if (!ps.relegated_overlap.empty()) {
    for (const auto& r : geom.robots) {
      bool touches = false;
      for (TaskId id : ps.relegated_overlap)
        if (robot_reaches(r, *table[id])) {
          touches = true;
          break;
        }
      if (!touches)
        fail(ErrorKind::Validation,
             "partition: robot " + std::to_string(r.id) +
                 " has no reachable overlap inventory");
    }
  }
}

} // namespace wingsched
