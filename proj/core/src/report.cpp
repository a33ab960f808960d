#include "wingsched/report.hpp"

namespace wingsched {

using nlohmann::json;

namespace {

const char* side_name(Side s) { return s == Side::Bottom ? "bottom" : "top"; }

json offset_json(const OffsetInfo& o) {
  return {{"l", o.l},
          {"l_star", o.l_star},
          {"split_index", o.split_index},
          {"t_star", o.t_star},
          {"t_head", o.t_head}};
}

json monitor_json(const MonitorResult& m) {
  json j = {{"min_distance", m.min_distance},
            {"at_time", m.at_time},
            {"robot_a", m.robot_a},
            {"robot_b", m.robot_b}};
  if (m.first_violation >= 0.0) j["first_violation"] = m.first_violation;
  return j;
}

} // namespace

json report_json(const PartitionSet& ps) {
  json parts = json::array();
  for (const Partition& p : ps.partitions) {
    json e = {{"robot", p.robot},
              {"pair", p.pair},
              {"side", side_name(p.side)},
              {"x_start", p.x_start},
              {"x_end", p.x_end},
              {"total_service", p.total_service},
              {"tasks", p.tasks}};
    if (p.offset) e["offset"] = offset_json(*p.offset);
    parts.push_back(std::move(e));
  }
  json j = {{"partitions", std::move(parts)},
            {"relegated_overlap", ps.relegated_overlap},
            {"pair_service", ps.pair_service},
            {"overlap_fraction", ps.overlap_fraction},
            {"max_imbalance", ps.max_imbalance},
            {"balance_violated", ps.balance_violated}};
  if (!ps.offset_failure.empty()) j["offset_failure"] = ps.offset_failure;
  return j;
}

json report_json(const NominalSchedule& s) {
  json robots = json::array();
  for (const RobotSchedule& rs : s.robots) {
    json rows = json::array();
    for (const ScheduleEntry& e : rs.entries)
      rows.push_back({{"task", e.task},
                      {"x", e.pos.x},
                      {"y", e.pos.y},
                      {"start", e.start},
                      {"end", e.end}});
    json r = {{"robot", rs.robot},
              {"pair", rs.pair},
              {"side", side_name(rs.side)},
              {"x_start", rs.x_start},
              {"x_end", rs.x_end},
              {"wrap_index", rs.wrap_index},
              {"makespan", rs.makespan},
              {"rate", {{"q", rs.rate.q}, {"delta_q", rs.rate.delta_q},
                        {"degenerate", rs.rate.degenerate}}},
              {"timeline", std::move(rows)}};
    if (rs.offset) r["offset"] = offset_json(*rs.offset);
    robots.push_back(std::move(r));
  }
  return {{"makespan", s.makespan}, {"robots", std::move(robots)}};
}

json report_json(const ConstraintReport& rep) {
  json c1 = json::array();
  for (const C1Slack& s : rep.c1_slacks)
    c1.push_back({{"robot", s.robot}, {"l_slack", s.l_slack}, {"l_star_slack", s.l_star_slack}});
  json c2 = json::array();
  for (const C2Slack& s : rep.c2_slacks)
    c2.push_back({{"pair_prev", s.pair_prev}, {"pair", s.pair}, {"slack", s.slack}});
  json margins = json::array();
  for (const PairRobustness& m : rep.margins) {
    json e = {{"pair", m.pair},
              {"offset_margin", m.offset_margin},
              {"return_margin", m.return_margin}};
    if (m.boundary_margin) e["boundary_margin"] = *m.boundary_margin;
    margins.push_back(std::move(e));
  }
  return {{"c1_slacks", std::move(c1)},
          {"c2_slacks", std::move(c2)},
          {"c1_pass", rep.c1_pass},
          {"c2_pass", rep.c2_pass},
          {"margins", std::move(margins)},
          {"min_margin", rep.min_margin},
          {"apriori_pass", rep.apriori_pass},
          {"sweep", monitor_json(rep.sweep)},
          {"pass", rep.pass}};
}

json report_json(const FailureTrace& trace) {
  json robots = json::array();
  for (const auto& events : trace.robots) {
    json row = json::array();
    for (const FailureEvent& ev : events)
      row.push_back({{"start", ev.start}, {"repair", ev.repair}});
    robots.push_back(std::move(row));
  }
  return {{"seed", trace.seed},
          {"total_repair", trace.total_repair},
          {"robots", std::move(robots)}};
}

json report_json(const ExecutionLog& log) {
  json executed = json::array();
  for (const auto& robot : log.executed) {
    json rows = json::array();
    for (const ScheduleEntry& e : robot)
      rows.push_back({{"task", e.task},
                      {"x", e.pos.x},
                      {"y", e.pos.y},
                      {"start", e.start},
                      {"end", e.end}});
    executed.push_back(std::move(rows));
  }
  json repairs = json::array();
  for (const auto& robot : log.repairs) {
    json row = json::array();
    for (const FailureEvent& ev : robot)
      row.push_back({{"start", ev.start}, {"repair", ev.repair}});
    repairs.push_back(std::move(row));
  }
  return {{"executed", std::move(executed)},
          {"repairs", std::move(repairs)},
          {"skipped", log.skipped},
          {"finish", log.finish},
          {"completion", log.completion},
          {"monitor", monitor_json(log.monitor)}};
}

json report_json(const std::vector<City>& cities) {
  json out = json::array();
  for (const City& c : cities) {
    json e = {{"id", c.id},
              {"feature", feature_name(c.feature)},
              {"members", c.members},
              {"service", c.service},
              {"rep", {c.rep.x, c.rep.y}},
              {"x_min", c.x_min},
              {"x_max", c.x_max},
              {"reach", c.reach}};
    if (c.singleton_flagged) e["singleton_flagged"] = true;
    out.push_back(std::move(e));
  }
  return out;
}

json report_json(const ScheduleMatrix& m, const std::vector<City>& cities) {
  const std::vector<double> durs = row_durations(m.rows, cities);
  json rows = json::array();
  for (std::size_t r = 0; r < m.rows.size(); ++r)
    rows.push_back({{"robot", r}, {"cities", m.rows[r]}, {"service", durs[r]}});
  return {{"rows", std::move(rows)},
          {"slot_count", m.slot_count},
          {"deconflict_moves", m.deconflict_moves}};
}

json report_json(const std::vector<Sale>& sales) {
  json out = json::array();
  for (const Sale& s : sales)
    out.push_back({{"seller", s.seller},
                   {"buyer", s.buyer},
                   {"city", s.city},
                   {"placement", s.placement},
                   {"sigma_before", s.sigma_before},
                   {"sigma_after", s.sigma_after},
                   {"w_star", s.w_star}});
  return out;
}

} // namespace wingsched
