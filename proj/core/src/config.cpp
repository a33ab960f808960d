#include "wingsched/config.hpp"

#include <fstream>

#include "wingsched/error.hpp"

namespace wingsched {

using nlohmann::json;

namespace {

// wraps json access so a malformed config reports the offending key instead
// of a bare type error
template <typename T>
T get_field(const json& j, const char* key) {
  if (!j.contains(key))
    fail(ErrorKind::InvalidConfig, std::string("config: missing field '") + key + "'");
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::InvalidConfig, std::string("config: field '") + key + "' has the wrong type");
  }
}

template <typename T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception&) {
    fail(ErrorKind::InvalidConfig, std::string("config: field '") + key + "' has the wrong type");
  }
}

} // namespace

json to_json(const WorkpartSpec& spec) {
  json ribs = json::array();
  for (const RibSpec& r : spec.ribs)
    ribs.push_back({{"axial_pos", r.axial_pos},
                    {"hole_count", r.hole_count},
                    {"drill_time", r.drill_time},
                    {"transverse_extent", r.transverse_extent}});
  json spars = json::array();
  for (const SparSpec& s : spec.spars) {
    json e = {{"transverse_pos", s.transverse_pos},
              {"hole_count", s.hole_count},
              {"overlap_feature", s.overlap_feature}};
    if (s.drill_time) e["drill_time"] = *s.drill_time;
    spars.push_back(std::move(e));
  }
  return {{"axial_length", spec.axial_length},
          {"rib_pitch", spec.rib_pitch},
          {"ribs", std::move(ribs)},
          {"spars", std::move(spars)}};
}

WorkpartSpec workpart_from_json(const json& j) {
  WorkpartSpec spec;
  spec.axial_length = get_field<double>(j, "axial_length");
  spec.rib_pitch = get_field<double>(j, "rib_pitch");
  if (!j.contains("ribs") || !j.at("ribs").is_array())
    fail(ErrorKind::InvalidConfig, "config: workpart needs a 'ribs' array");
  for (const json& r : j.at("ribs")) {
    RibSpec rib;
    rib.axial_pos = get_field<double>(r, "axial_pos");
    rib.hole_count = get_field<int>(r, "hole_count");
    rib.drill_time = get_field<double>(r, "drill_time");
    rib.transverse_extent = get_field<double>(r, "transverse_extent");
    spec.ribs.push_back(rib);
  }
  for (const json& s : j.value("spars", json::array())) {
    SparSpec spar;
    spar.transverse_pos = get_field<double>(s, "transverse_pos");
    spar.hole_count = get_field<int>(s, "hole_count");
    spar.overlap_feature = get_or<bool>(s, "overlap_feature", false);
    if (s.contains("drill_time")) spar.drill_time = get_field<double>(s, "drill_time");
    spec.spars.push_back(spar);
  }
  return spec;
}

json to_json(const RobotGeometry& geom) {
  json robots = json::array();
  for (const RobotReach& r : geom.robots)
    robots.push_back({{"id", r.id},
                      {"pair", r.pair},
                      {"side", r.side == Side::Bottom ? "bottom" : "top"},
                      {"x_min", r.x_min},
                      {"x_max", r.x_max},
                      {"y_min", r.y_min},
                      {"y_max", r.y_max},
                      {"base", {r.base.x, r.base.y}}});
  return {{"d_ee", geom.d_ee},
          {"alpha", geom.alpha},
          {"cross_reach", geom.cross_reach},
          {"robots", std::move(robots)}};
}

RobotGeometry geometry_from_json(const json& j) {
  RobotGeometry geom;
  geom.d_ee = get_field<double>(j, "d_ee");
  geom.alpha = get_field<double>(j, "alpha");
  geom.cross_reach = get_or<double>(j, "cross_reach", 0.0);
  if (!j.contains("robots") || !j.at("robots").is_array())
    fail(ErrorKind::InvalidConfig, "config: geometry needs a 'robots' array");
  for (const json& r : j.at("robots")) {
    RobotReach reach;
    reach.id = get_field<RobotId>(r, "id");
    reach.pair = get_field<int>(r, "pair");
    const std::string side = get_field<std::string>(r, "side");
    if (side == "bottom") reach.side = Side::Bottom;
    else if (side == "top") reach.side = Side::Top;
    else fail(ErrorKind::InvalidConfig, "config: robot side must be 'bottom' or 'top'");
    reach.x_min = get_field<double>(r, "x_min");
    reach.x_max = get_field<double>(r, "x_max");
    reach.y_min = get_field<double>(r, "y_min");
    reach.y_max = get_field<double>(r, "y_max");
    const auto base = get_field<std::vector<double>>(r, "base");
    if (base.size() != 2) fail(ErrorKind::InvalidConfig, "config: base must be [x, y]");
    reach.base = {base[0], base[1]};
    geom.robots.push_back(reach);
  }
  return geom;
}

json to_json(const Coa& coa) {
  return {{"name", coa.name}, {"active", coa.active}};
}

json to_json(const FailureModel& m) {
  return {{"first_mean", m.first_mean},       {"first_sigma", m.first_sigma},
          {"recurrence_mean", m.recurrence_mean}, {"recurrence_sigma", m.recurrence_sigma},
          {"repair_mean", m.repair_mean},     {"repair_sigma", m.repair_sigma},
          {"floor", m.floor}};
}

FailureModel failure_from_json(const json& j) {
  FailureModel m;
  m.first_mean = get_or(j, "first_mean", m.first_mean);
  m.first_sigma = get_or(j, "first_sigma", m.first_sigma);
  m.recurrence_mean = get_or(j, "recurrence_mean", m.recurrence_mean);
  m.recurrence_sigma = get_or(j, "recurrence_sigma", m.recurrence_sigma);
  m.repair_mean = get_or(j, "repair_mean", m.repair_mean);
  m.repair_sigma = get_or(j, "repair_sigma", m.repair_sigma);
  m.floor = get_or(j, "floor", m.floor);
  return m;
}

json to_json(const GreedyConfig& g) {
  return {{"distance_weight", g.distance_weight},
          {"wait_penalty_weight", g.wait_penalty_weight},
          {"conflict_check", g.conflict_check}};
}

GreedyConfig greedy_from_json(const json& j) {
  GreedyConfig g;
  g.distance_weight = get_or(j, "distance_weight", g.distance_weight);
  g.wait_penalty_weight = get_or(j, "wait_penalty_weight", g.wait_penalty_weight);
  g.conflict_check = get_or(j, "conflict_check", g.conflict_check);
  return g;
}

json to_json(const ExperimentPlan& plan) {
  json coas = json::array();
  for (const Coa& c : plan.coas) coas.push_back(to_json(c));
  json variants = json::array();
  for (const VariantSpec& v : plan.variants)
    variants.push_back({{"method", v.method}, {"opt_mode", v.opt_mode}});
  return {{"workpart", to_json(plan.wing.spec)},
          {"geometry", to_json(plan.geom)},
          {"coas", std::move(coas)},
          {"failure", to_json(plan.failure)},
          {"seed_begin", plan.seed_begin},
          {"seed_count", plan.seed_count},
          {"variants", std::move(variants)},
          {"overlap_fraction", plan.overlap_fraction},
          {"city_target", plan.city_target},
          {"beta", plan.beta},
          {"rate_window", plan.rate_window},
          {"greedy", to_json(plan.greedy)},
          {"threads", plan.threads},
          {"leftover_failures", plan.leftover_failures}};
}

ExperimentPlan plan_from_json(const json& j) {
  if (!j.is_object()) fail(ErrorKind::InvalidConfig, "config: plan must be a JSON object");
  ExperimentPlan plan;

  const json& wp = j.contains("workpart") ? j.at("workpart") : json{{"preset", "benchmark-wing"}};
  if (wp.contains("preset")) {
    const std::string preset = get_field<std::string>(wp, "preset");
    if (preset != "benchmark-wing")
      fail(ErrorKind::InvalidConfig, "config: unknown workpart preset '" + preset + "'");
    plan.wing = build_benchmark_wing();
  } else {
    plan.wing = make_workpart(workpart_from_json(wp));
  }

  plan.geom = j.contains("geometry") ? geometry_from_json(j.at("geometry"))
                                     : benchmark_geometry(plan.wing);

  if (j.contains("coas")) {
    for (const json& c : j.at("coas")) {
      const std::string name = get_field<std::string>(c, "name");
      if (get_or<bool>(c, "full", false)) {
        plan.coas.push_back(full_coa(plan.wing, name));
      } else if (c.contains("omit")) {
        std::vector<Omission> om;
        for (const json& o : c.at("omit")) {
          Omission one;
          const std::string kind = get_field<std::string>(o, "kind");
          if (kind == "rib") one.kind = FeatureKind::Rib;
          else if (kind == "spar") one.kind = FeatureKind::Spar;
          else fail(ErrorKind::InvalidConfig, "config: omission kind must be 'rib' or 'spar'");
          one.index = get_field<int>(o, "index");
          om.push_back(one);
        }
        plan.coas.push_back(coa_omitting(plan.wing, om, name));
      } else if (c.contains("active")) {
        Coa coa;
        coa.name = name;
        coa.active = get_field<std::vector<TaskId>>(c, "active");
        plan.coas.push_back(std::move(coa));
      } else {
        fail(ErrorKind::InvalidConfig,
             "config: COA '" + name + "' needs 'full', 'omit', or 'active'");
      }
    }
  } else {
    plan.coas = benchmark_coas(plan.wing);
  }

  if (j.contains("failure")) plan.failure = failure_from_json(j.at("failure"));
  plan.seed_begin = get_or<std::uint64_t>(j, "seed_begin", plan.seed_begin);
  plan.seed_count = get_or<int>(j, "seed_count", plan.seed_count);
  if (j.contains("variants")) {
    plan.variants.clear();
    for (const json& v : j.at("variants"))
      plan.variants.push_back(
          {get_field<std::string>(v, "method"), get_field<std::string>(v, "opt_mode")});
  }
  plan.overlap_fraction = get_or(j, "overlap_fraction", plan.overlap_fraction);
  plan.city_target = get_or(j, "city_target", plan.city_target);
  plan.beta = get_or(j, "beta", plan.beta);
  plan.rate_window = get_or(j, "rate_window", plan.rate_window);
  if (j.contains("greedy")) plan.greedy = greedy_from_json(j.at("greedy"));
  plan.threads = get_or(j, "threads", plan.threads);
  plan.leftover_failures = get_or(j, "leftover_failures", plan.leftover_failures);
  return plan;
}

ExperimentPlan load_plan(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::InvalidConfig, "config: cannot open '" + path + "'");
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    fail(ErrorKind::InvalidConfig, "config: parse error in '" + path + "': " + e.what());
  }
  return plan_from_json(j);
}

void save_plan(const ExperimentPlan& plan, const std::string& path) {
  std::ofstream out(path);
  if (!out) fail(ErrorKind::InvalidConfig, "config: cannot write '" + path + "'");
  out << to_json(plan).dump(2) << "\n";
}

} // namespace wingsched
