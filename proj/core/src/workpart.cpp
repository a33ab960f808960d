#include "wingsched/workpart.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <set>

#include "wingsched/error.hpp"

namespace wingsched {

double distance(Point a, Point b) { return std::hypot(a.x - b.x, a.y - b.y); }

std::string feature_name(const Feature& f) {
  return (f.kind == FeatureKind::Rib ? "rib" : "spar") + std::to_string(f.index);
}

namespace {

void validate_spec(const WorkpartSpec& spec) {
  if (spec.axial_length <= 0.0)
    fail(ErrorKind::InvalidConfig, "workpart: axial_length must be positive");
  if (spec.ribs.empty() && spec.spars.empty())
    fail(ErrorKind::InvalidConfig, "workpart: no features");
  for (const auto& r : spec.ribs) {
    if (r.hole_count < 1)
      fail(ErrorKind::InvalidConfig, "workpart: rib with no holes");
    if (r.drill_time <= 0.0)
      fail(ErrorKind::InvalidConfig, "workpart: rib drill_time must be positive");
    if (r.axial_pos < 0.0 || r.axial_pos > spec.axial_length)
      fail(ErrorKind::InvalidConfig, "workpart: rib outside axial bounds");
    if (r.hole_count > 1 && r.transverse_extent <= 0.0)
      fail(ErrorKind::InvalidConfig, "workpart: rib extent must be positive");
  }
  for (const auto& s : spec.spars) {
    if (s.hole_count < 1)
      fail(ErrorKind::InvalidConfig, "workpart: spar with no holes");
    if (!s.drill_time && spec.ribs.empty())
      fail(ErrorKind::InvalidConfig,
           "workpart: spar needs an explicit drill_time when there are no ribs");
  }
}

// Spar segments inherit the drill time of the slower bounding rib; holes
// outside the ribbed span use the nearest rib.
double spar_hole_time(const WorkpartSpec& spec, const SparSpec& spar, double x) {
  if (spar.drill_time) return *spar.drill_time;
  const RibSpec* before = nullptr;
  const RibSpec* after = nullptr;
  for (const auto& r : spec.ribs) {
    if (r.axial_pos <= x && (!before || r.axial_pos > before->axial_pos)) before = &r;
    if (r.axial_pos >= x && (!after || r.axial_pos < after->axial_pos)) after = &r;
  }
  if (before && after) return std::max(before->drill_time, after->drill_time);
  if (before) return before->drill_time;
  return after->drill_time;
}

} // namespace

Workpart make_workpart(const WorkpartSpec& spec) {
  validate_spec(spec);
  Workpart part;
  part.spec = spec;

  TaskId next = 0;
  int rib_index = 0;
  for (const auto& rib : spec.ribs) {
    ++rib_index;
    const int n = rib.hole_count;
    const double pitch = n > 1 ? rib.transverse_extent / (n - 1) : 0.0;
    for (int j = 0; j < n; ++j) {
      Task t;
      t.id = next++;
      t.pos.x = rib.axial_pos;
      t.pos.y = -rib.transverse_extent / 2.0 + j * pitch;
      t.service_time = rib.drill_time;
      t.feature = {FeatureKind::Rib, rib_index};
      t.feature_ordinal = j;
      t.side = t.pos.y < 0.0 ? Side::Bottom : Side::Top;
      part.tasks.push_back(t);
    }
  }
  int spar_index = 0;
  for (const auto& spar : spec.spars) {
    ++spar_index;
    const int n = spar.hole_count;
    for (int j = 0; j < n; ++j) {
      Task t;
      t.id = next++;
      // Half-station offset keeps spar holes off the rib columns.
      t.pos.x = (j + 0.5) * spec.axial_length / n;
      t.pos.y = spar.transverse_pos;
      t.service_time = spar_hole_time(spec, spar, t.pos.x);
      t.feature = {FeatureKind::Spar, spar_index};
      t.feature_ordinal = j;
      t.side = t.pos.y < 0.0 ? Side::Bottom : Side::Top;
      t.overlap_feature = spar.overlap_feature;
      part.tasks.push_back(t);
    }
  }
  return part;
}

WorkpartSpec benchmark_wing_spec() {
  WorkpartSpec spec;
  spec.axial_length = 28.0;
  spec.rib_pitch = 2.0;

  const int counts[] = {109, 107, 105, 101, 99, 95, 93, 91, 87, 85, 83, 79, 77, 73, 71};
  const double hole_pitch = 0.25; // ft between holes along a rib
  for (int k = 0; k < 15; ++k) {
    RibSpec rib;
    rib.axial_pos = k * spec.rib_pitch;
    rib.hole_count = counts[k];
    rib.drill_time = 30.0 - 0.5 * k; // slowest at the widest rib, 23.0 s at the tip
    rib.transverse_extent = (counts[k] - 1) * hole_pitch;
    spec.ribs.push_back(rib);
  }

  const double tip_half = (counts[14] - 1) * hole_pitch / 2.0; // narrowest rib half-span
  SparSpec lower, middle, upper;
  lower.transverse_pos = -tip_half;
  lower.hole_count = 266;
  middle.transverse_pos = 0.0;
  middle.hole_count = 266;
  middle.overlap_feature = true;
  upper.transverse_pos = tip_half;
  upper.hole_count = 266;
  spec.spars = {lower, middle, upper};
  return spec;
}

Workpart build_benchmark_wing() { return make_workpart(benchmark_wing_spec()); }

Coa full_coa(const Workpart& part, std::string name) {
  Coa coa;
  coa.name = std::move(name);
  coa.active.reserve(part.tasks.size());
  for (const auto& t : part.tasks) coa.active.push_back(t.id);
  return coa;
}

Coa coa_omitting(const Workpart& part, const std::vector<Omission>& omissions,
                 std::string name) {
  Coa coa;
  coa.name = std::move(name);
  auto omitted = [&](const Task& t) {
    for (const auto& om : omissions) {
      if (om.kind == FeatureKind::Rib) {
        if (t.feature.kind == FeatureKind::Rib && t.feature.index == om.index) return true;
      } else {
        // Spar segment group: non-overlap spar holes between ribs om.index
        // and om.index+1.
        if (t.feature.kind != FeatureKind::Spar) continue;
        const auto& spar = part.spec.spars[t.feature.index - 1];
        if (spar.overlap_feature) continue;
        const int seg = om.index;
        if (seg < 1 || seg >= static_cast<int>(part.spec.ribs.size()))
          fail(ErrorKind::InvalidConfig, "coa: spar segment index out of range");
        const double x0 = part.spec.ribs[seg - 1].axial_pos;
        const double x1 = part.spec.ribs[seg].axial_pos;
        if (t.pos.x >= x0 && t.pos.x < x1) return true;
      }
    }
    return false;
  };
  for (const auto& t : part.tasks)
    if (!omitted(t)) coa.active.push_back(t.id);
  return coa;
}

std::vector<Coa> benchmark_coas(const Workpart& part) {
  std::vector<Coa> coas;
  coas.push_back(full_coa(part, "coa1"));
  std::vector<Omission> om;
  om.push_back({FeatureKind::Rib, 7});
  coas.push_back(coa_omitting(part, om, "coa2"));
  om.push_back({FeatureKind::Spar, 3});
  coas.push_back(coa_omitting(part, om, "coa3"));
  om.push_back({FeatureKind::Rib, 12});
  coas.push_back(coa_omitting(part, om, "coa4"));
  om.push_back({FeatureKind::Spar, 11});
  coas.push_back(coa_omitting(part, om, "coa5"));
  return coas;
}

std::vector<Task> apply_coa(const Workpart& part, const Coa& coa) {
  std::vector<Task> out;
  out.reserve(coa.active.size());
  TaskId prev = -1;
  for (TaskId id : coa.active) {
    if (id < 0 || id >= static_cast<TaskId>(part.tasks.size()))
      fail(ErrorKind::Validation, "coa: unknown task id " + std::to_string(id));
    if (id <= prev)
      fail(ErrorKind::Validation, "coa: active ids must be sorted and unique");
    prev = id;
    out.push_back(part.tasks[id]);
  }
  return out;
}

int RobotGeometry::pair_count() const {
  int m = 0;
  for (const auto& r : robots) m = std::max(m, r.pair + 1);
  return m;
}

std::vector<RobotId> RobotGeometry::pair_members(int pair) const {
  std::vector<RobotId> out;
  for (const auto& r : robots)
    if (r.pair == pair) out.push_back(r.id);
  return out;
}

RobotGeometry benchmark_geometry(const Workpart& part) {
  RobotGeometry geom;
  geom.d_ee = 2.0;
  geom.alpha = 1.5;
  geom.cross_reach = 4.0;

  const double L = part.spec.axial_length;
  // Half-width of the shared band between the two pair stations. Wide enough
  // that neither exclusive zone can exceed half the remaining work under any
  // single-feature omission; otherwise the pair cut pins at a reach limit and
  // the workload balance bound becomes unattainable.
  const double axial_overlap = 6.0;
  const double margin = 0.5;

  double half_width = 0.0;
  for (const auto& t : part.tasks) half_width = std::max(half_width, std::abs(t.pos.y));
  const double standoff = 4.0;
  const double far = 1.0e6;

  struct Station { double lo, hi; };
  const Station stations[2] = {
      {-margin, L / 2.0 + axial_overlap},
      {L / 2.0 - axial_overlap, L + margin},
  };
  RobotId next = 0;
  for (int p = 0; p < 2; ++p) {
    const double mid = (stations[p].lo + stations[p].hi) / 2.0;
    RobotReach bottom;
    bottom.id = next++;
    bottom.pair = p;
    bottom.side = Side::Bottom;
    bottom.x_min = stations[p].lo;
    bottom.x_max = stations[p].hi;
    bottom.y_min = -far;
    bottom.y_max = geom.cross_reach / 2.0;
    bottom.base = {mid, -(half_width + standoff)};
    geom.robots.push_back(bottom);

    RobotReach top = bottom;
    top.id = next++;
    top.side = Side::Top;
    top.y_min = -geom.cross_reach / 2.0;
    top.y_max = far;
    top.base = {mid, half_width + standoff};
    geom.robots.push_back(top);
  }
  return geom;
}

bool robot_reaches(const RobotReach& r, const Task& t) {
  return t.pos.x >= r.x_min && t.pos.x <= r.x_max && t.pos.y >= r.y_min &&
         t.pos.y <= r.y_max;
}

std::uint32_t reach_mask(const RobotGeometry& geom, const Task& t) {
  std::uint32_t mask = 0;
  for (const auto& r : geom.robots)
    if (robot_reaches(r, t)) mask |= (1u << r.id);
  return mask;
}

std::vector<RobotId> reachable_robots(const RobotGeometry& geom, const Task& t) {
  std::vector<RobotId> out;
  for (const auto& r : geom.robots)
    if (robot_reaches(r, t)) out.push_back(r.id);
  return out;
}

void validate_geometry(const RobotGeometry& geom, const std::vector<Task>& tasks) {
  if (geom.robots.empty()) fail(ErrorKind::Validation, "geometry: no robots");
  if (geom.robots.size() > 32) fail(ErrorKind::Validation, "geometry: too many robots");
  for (std::size_t i = 0; i < geom.robots.size(); ++i)
    if (geom.robots[i].id != static_cast<RobotId>(i))
      fail(ErrorKind::Validation, "geometry: robot ids must be dense and sorted");
  if (geom.d_ee <= 0.0 || geom.alpha <= 0.0)
    fail(ErrorKind::Validation, "geometry: proximity parameters must be positive");

  const double prox = geom.proximity();
  for (const auto& t : tasks) {
    const std::uint32_t mask = reach_mask(geom, t);
    if (mask == 0)
      fail(ErrorKind::Validation,
           "geometry: task " + std::to_string(t.id) + " is unreachable");
    // Tasks inside the cross-side band must be tradable between the sides.
    if (std::abs(t.pos.y) <= geom.cross_reach / 2.0 && std::popcount(mask) < 2)
      fail(ErrorKind::Validation,
           "geometry: overlap-band task " + std::to_string(t.id) +
               " reachable by fewer than 2 robots");
    for (const auto& r : geom.robots) {
      if (distance(r.base, t.pos) <= prox)
        fail(ErrorKind::Validation,
             "geometry: base of robot " + std::to_string(r.id) +
                 " is within the proximity envelope of task " + std::to_string(t.id));
    }
  }
  for (std::size_t a = 0; a < geom.robots.size(); ++a)
    for (std::size_t b = a + 1; b < geom.robots.size(); ++b)
      if (distance(geom.robots[a].base, geom.robots[b].base) <= prox)
        fail(ErrorKind::Validation, "geometry: parked robots violate proximity");
}

} // namespace wingsched
