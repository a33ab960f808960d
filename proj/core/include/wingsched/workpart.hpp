#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace wingsched {

using TaskId = std::int32_t;
using RobotId = std::int32_t;

struct Point {
  double x = 0.0; // axial coordinate, ft
  double y = 0.0; // transverse coordinate, ft
};

double distance(Point a, Point b);

enum class Side { Bottom = 0, Top = 1 };

enum class FeatureKind { Rib = 0, Spar = 1 };

// Identifies the structural member a hole belongs to. Rib index and spar
// index are 1-based in the order they appear in the workpart spec.
struct Feature {
  FeatureKind kind = FeatureKind::Rib;
  int index = 0;

  friend bool operator==(const Feature&, const Feature&) = default;
};

std::string feature_name(const Feature& f);

// One drilling task. feature_ordinal is the hole's position along its
// feature (transverse order for ribs, axial order for spars); consecutive
// ordinals are physically adjacent holes, which is what city clustering
// uses for contiguity.
struct Task {
  TaskId id = 0;
  Point pos;
  double service_time = 0.0; // s
  Feature feature;
  int feature_ordinal = 0;
  Side side = Side::Top;
  bool overlap_feature = false; // belongs to the relegable re-balancing inventory
};

struct RibSpec {
  double axial_pos = 0.0;        // ft
  int hole_count = 0;
  double drill_time = 0.0;       // s per hole
  double transverse_extent = 0.0; // ft, hole span along the rib
};

struct SparSpec {
  double transverse_pos = 0.0; // ft
  int hole_count = 0;
  // When unset, each hole inherits the drill time of the slower (earlier)
  // of the two ribs bounding its axial segment.
  std::optional<double> drill_time;
  // Marks the spar whose tasks are withheld from nominal scheduling and
  // relegated to the leftover stage (the re-balancing inventory).
  bool overlap_feature = false;
};

struct WorkpartSpec {
  double axial_length = 0.0; // ft
  double rib_pitch = 0.0;    // ft
  std::vector<RibSpec> ribs;
  std::vector<SparSpec> spars;
};

struct Workpart {
  WorkpartSpec spec;
  std::vector<Task> tasks; // dense: tasks[i].id == i
};

// Validates the spec and lays out every hole deterministically.
Workpart make_workpart(const WorkpartSpec& spec);

// The 15-rib, 3-spar wing section used by the benchmark suite.
WorkpartSpec benchmark_wing_spec();
Workpart build_benchmark_wing();

// A cut-out area: the subset of tasks active for a run.
struct Coa {
  std::string name;
  std::vector<TaskId> active; // sorted, unique
};

struct Omission {
  FeatureKind kind = FeatureKind::Rib;
  int index = 0;   // rib index, or axial segment index for spar groups
};

Coa full_coa(const Workpart& part, std::string name = "coa1");
// Omits whole ribs and/or spar segment groups (the non-overlap spars' holes
// between ribs `index` and `index+1`).
Coa coa_omitting(const Workpart& part, const std::vector<Omission>& omissions,
                 std::string name);
// The five benchmark cases: full part plus four progressively sparser ones.
std::vector<Coa> benchmark_coas(const Workpart& part);

// Resolves a COA to concrete tasks. Throws on unknown ids.
std::vector<Task> apply_coa(const Workpart& part, const Coa& coa);

struct RobotReach {
  RobotId id = 0;
  int pair = 0;          // axial station index, 0-based
  Side side = Side::Bottom;
  double x_min = 0.0, x_max = 0.0; // axial reach, ft
  double y_min = 0.0, y_max = 0.0; // transverse reach, ft
  Point base;            // parked position, outside the workpart
};

struct RobotGeometry {
  std::vector<RobotReach> robots; // sorted by id, ids dense from 0
  double d_ee = 0.0;              // end-effector diameter, ft
  double alpha = 0.0;             // proximity safety factor
  double cross_reach = 0.0;       // transverse both-sides band width w, ft

  double proximity() const { return alpha * d_ee; }
  int robot_count() const { return static_cast<int>(robots.size()); }
  int pair_count() const;
  std::vector<RobotId> pair_members(int pair) const;
};

// Four robots in two axial stations, one per side, reach overlapping by
// one band axially between stations and by cross_reach across the middle.
RobotGeometry benchmark_geometry(const Workpart& part);

bool robot_reaches(const RobotReach& r, const Task& t);
std::uint32_t reach_mask(const RobotGeometry& geom, const Task& t);
std::vector<RobotId> reachable_robots(const RobotGeometry& geom, const Task& t);

// Structural checks: every task reachable, multi-reach overlap bands
// non-degenerate, bases clear of the work area. Throws Error on violation.
void validate_geometry(const RobotGeometry& geom, const std::vector<Task>& tasks);

} // namespace wingsched
