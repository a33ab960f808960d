#pragma once

#include <optional>
#include <string>
#include <vector>

#include "wingsched/workpart.hpp"

namespace wingsched {

// Start-offset data for the second robot of a station pair. The robot opens
// at the offset location, sweeps to the partition end (length l_star, time
// t_star), then returns to the partition start and sweeps up to the offset
// (length l, time t_head).
struct OffsetInfo {
  double l = 0.0;
  double l_star = 0.0;
  int split_index = 0; // first task of the opening leg in the ordered list
  double t_star = 0.0;
  double t_head = 0.0;
};

struct Partition {
  RobotId robot = 0;
  int pair = 0;
  Side side = Side::Bottom;
  std::vector<TaskId> tasks; // axial service order
  double x_start = 0.0;      // content bounds of the pair's interval, ft
  double x_end = 0.0;
  double total_service = 0.0;
  std::optional<OffsetInfo> offset; // set for the offset robot of a 2-robot pair
};

struct PartitionSet {
  std::vector<Partition> partitions;     // indexed by robot id
  std::vector<TaskId> relegated_overlap; // withheld for the leftover stage
  std::vector<double> pair_service;
  double overlap_fraction = 1.0;
  double max_imbalance = 0.0;   // max-min per-robot nominal service, s
  bool balance_violated = false;
  std::string offset_failure;   // non-empty when some pair has no feasible offset
};

// Splits the active tasks into per-robot axial partitions: the designated
// fraction of overlap-feature tasks is withheld, each side's sweep-ordered
// task stream is cut into contiguous per-pair segments, and a local search
// plus offset selection finishes the job.
PartitionSet partition(const std::vector<Task>& active, const RobotGeometry& geom,
                       double overlap_fraction = 1.0);

// Re-runs the boundary local search (single-task shifts across pair cuts,
// cross-band side flips) and offset selection on an existing partition set.
// Strictly improving moves only, so repeated application is stable.
PartitionSet rebalance_pairwise(PartitionSet ps, const std::vector<Task>& active,
                                const RobotGeometry& geom);

// Structural audit: tiling of the active set, reach, interval lengths,
// offset arithmetic. Throws Error on violation.
void validate_partition(const PartitionSet& ps, const std::vector<Task>& active,
                        const RobotGeometry& geom);

} // namespace wingsched
