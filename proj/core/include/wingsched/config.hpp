#pragma once

#include <string>

#include <nlohmann/json.hpp>

#include "wingsched/experiment.hpp"

namespace wingsched {

// Declarative JSON configuration. Every piece of an experiment plan can be
// stated inline; the benchmark wing, its geometry, and its five COAs are also
// available as presets. Serialization round-trips losslessly: doubles are
// emitted with shortest-round-trip precision and COAs as explicit id lists.

nlohmann::json to_json(const WorkpartSpec& spec);
WorkpartSpec workpart_from_json(const nlohmann::json& j);

nlohmann::json to_json(const RobotGeometry& geom);
RobotGeometry geometry_from_json(const nlohmann::json& j);

nlohmann::json to_json(const Coa& coa);

nlohmann::json to_json(const FailureModel& m);
FailureModel failure_from_json(const nlohmann::json& j);

nlohmann::json to_json(const GreedyConfig& g);
GreedyConfig greedy_from_json(const nlohmann::json& j);

// Full plan. Accepted shapes:
//   workpart: {"preset": "benchmark-wing"} | inline workpart object
//   geometry: omitted (derived from the workpart) | inline geometry object
//   coas: omitted (benchmark five) | list of {"name", "full"|"omit"|"active"}
//     where omit entries are {"kind": "rib"|"spar", "index": k}
//   variants: omitted (all five) | list of {"method", "opt_mode"}
// plus failure, seed_begin, seed_count, overlap_fraction, city_target, beta,
// rate_window, greedy.
nlohmann::json to_json(const ExperimentPlan& plan);
ExperimentPlan plan_from_json(const nlohmann::json& j);

ExperimentPlan load_plan(const std::string& path);
void save_plan(const ExperimentPlan& plan, const std::string& path);

} // namespace wingsched
