#include "wingsched/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <sstream>
#include <thread>

#include "wingsched/error.hpp"
#include "wingsched/market.hpp"

namespace wingsched {

namespace {

using clock_type = std::chrono::steady_clock;

double ms_since(clock_type::time_point t0) {
  return std::chrono::duration<double, std::milli>(clock_type::now() - t0).count();
}

// nominal schedules depend only on the COA, so they are built once per COA
// and shared across seeds; the measured build time is reused in every row
struct coa_cache {
  std::vector<Task> active;
  double horizon = 0.0;

  bool proposed_ok = false;
  std::string proposed_error;
  PartitionSet ps;
  NominalSchedule ns;
  double proposed_ms = 0.0;

  bool greedy_ok = false;
  std::string greedy_error;
  NominalSchedule gs;
  double greedy_ms = 0.0;
};

bool wants(const ExperimentPlan& plan, const std::string& method) {
  for (const auto& v : plan.variants)
    if (v.method == method) return true;
  return false;
}

coa_cache make_coa_cache(const ExperimentPlan& plan, const Coa& coa) {
  coa_cache c;
  c.active = apply_coa(plan.wing, coa);
  double total = 0.0;
  for (const Task& t : c.active) total += t.service_time;
  c.horizon = 2.0 * total / static_cast<double>(plan.geom.robot_count());

  if (wants(plan, "proposed")) {
    try {
      const auto t0 = clock_type::now();
      c.ps = partition(c.active, plan.geom, plan.overlap_fraction);
      c.ns = build_nominal(c.ps, c.active, plan.geom, plan.rate_window);
      c.proposed_ms = ms_since(t0);
      const ConstraintReport rep = check_constraints(c.ns, plan.geom);
      if (!rep.pass)
        fail(ErrorKind::Constraint,
             "nominal schedule failed the exhaustive distance sweep (min " +
                 std::to_string(rep.sweep.min_distance) + " ft)");
      c.proposed_ok = true;
    } catch (const Error& e) {
      c.proposed_error = e.what();
    }
  }
  if (wants(plan, "greedy")) {
    try {
      const auto t0 = clock_type::now();
      c.gs = greedy_schedule(c.active, plan.geom, plan.greedy);
      c.greedy_ms = ms_since(t0);
      if (c.gs.makespan > 0.0) {
        const auto lines = schedule_timelines(c.gs, plan.geom, c.gs.makespan);
        const auto mon = collision_monitor(lines, plan.geom.proximity());
        if (!mon.clear(plan.geom.proximity()))
          fail(ErrorKind::Constraint,
               "greedy schedule failed the exhaustive distance sweep (min " +
                   std::to_string(mon.min_distance) + " ft)");
      }
      c.greedy_ok = true;
    } catch (const Error& e) {
      c.greedy_error = e.what();
    }
  }
  return c;
}

std::vector<Task> tasks_by_id(const std::vector<Task>& pool, const std::vector<TaskId>& ids) {
  TaskId max_id = 0;
  for (const Task& t : pool) max_id = std::max(max_id, t.id);
  std::vector<const Task*> table(max_id + 1, nullptr);
  for (const Task& t : pool) table[t.id] = &t;
  std::vector<Task> out;
  out.reserve(ids.size());
  for (TaskId id : ids) {
    if (id < 0 || id > max_id || table[id] == nullptr)
      fail(ErrorKind::Validation, "experiment: unknown leftover task id " + std::to_string(id));
    out.push_back(*table[id]);
  }
  std::sort(out.begin(), out.end(), [](const Task& a, const Task& b) { return a.id < b.id; });
  return out;
}

// per-(COA, seed) artifacts shared by one method's variants
struct method_run {
  bool ok = false;
  std::string error;
  ExecutionLog log;
  std::vector<Task> leftovers;
  std::vector<City> cities;      // city granularity
  std::vector<City> cities_hole; // filled lazily for hole variants
  bool have_hole = false;
  int city_count = 0; // city-granularity count: the reported leftover volume
};

method_run start_run(const NominalSchedule& sched, const coa_cache& cache,
                     const FailureTrace& trace, const ExperimentPlan& plan,
                     bool include_relegated) {
  method_run r;
  try {
    r.log = execute(sched, trace, plan.geom);
    if (!r.log.monitor.clear(plan.geom.proximity()))
      fail(ErrorKind::Constraint,
           "executed timeline failed the distance sweep (min " +
               std::to_string(r.log.monitor.min_distance) + " ft)");
    std::vector<TaskId> ids;
    for (const auto& skipped : r.log.skipped) ids.insert(ids.end(), skipped.begin(), skipped.end());
    if (include_relegated)
      ids.insert(ids.end(), cache.ps.relegated_overlap.begin(), cache.ps.relegated_overlap.end());
    r.leftovers = tasks_by_id(cache.active, ids);
    r.cities = cluster_cities(r.leftovers, plan.geom, plan.city_target);
    r.city_count = static_cast<int>(r.cities.size());
    r.ok = true;
  } catch (const Error& e) {
    r.error = e.what();
  }
  return r;
}

const std::vector<City>& hole_cities(method_run& r, const ExperimentPlan& plan) {
  if (!r.have_hole) {
    r.cities_hole = cluster_cities(r.leftovers, plan.geom, 1);
    r.have_hole = true;
  }
  return r.cities_hole;
}

double stage_min_distance(const std::vector<std::vector<int>>& rows,
                          const std::vector<City>& cities, const std::vector<Task>& active,
                          const RobotGeometry& geom) {
  bool any = false;
  for (const auto& row : rows) any = any || !row.empty();
  if (!any) return std::numeric_limits<double>::infinity();
  const auto lines = leftover_timelines(rows, cities, active, geom);
  return collision_monitor(lines).min_distance;
}

struct variant_outcome {
  double comp_ms = 0.0;
  LeftoverStage stage;
  double stage_min = std::numeric_limits<double>::infinity();
};

variant_outcome run_proposed_variant(const std::string& opt, method_run& r,
                                     const coa_cache& cache, const ExperimentPlan& plan) {
  variant_outcome out;
  const auto t0 = clock_type::now();
  const std::vector<City>& cities = (opt == "hole") ? hole_cities(r, plan) : r.cities;
  ScheduleMatrix S;
  if (opt == "hole") {
    // the initial schedule is the same offset construction either way — hole
    // granularity only changes what the market trades — so the certified
    // city rows are exploded into their member holes (same timeline)
    const ScheduleMatrix Sc = build_initial_leftover(r.cities, cache.ps, cache.active, plan.geom);
    std::map<TaskId, int> hole_of;
    for (const City& c : cities)
      for (TaskId id : c.members) hole_of[id] = c.id;
    S.rows.resize(Sc.rows.size());
    for (std::size_t i = 0; i < Sc.rows.size(); ++i)
      for (int cid : Sc.rows[i])
        for (TaskId id : r.cities[cid].members) S.rows[i].push_back(hole_of.at(id));
    S.deconflict_moves = Sc.deconflict_moves;
    S.slot_count = padded_slot_count(S.rows, cities);
  } else {
    S = build_initial_leftover(cities, cache.ps, cache.active, plan.geom);
  }
  if (opt != "none") {
    MarketResult res = optimize_leftover(std::move(S), cities, cache.active, plan.geom, plan.beta);
    if (res.capped)
      fail(ErrorKind::Validation, "leftover optimization hit its sale cap after " +
                                      std::to_string(res.steps) + " steps");
    S = std::move(res.schedule);
  }
  out.comp_ms = cache.proposed_ms + ms_since(t0);
  out.stage = stage_from_matrix(S, cities);
  out.stage_min = stage_min_distance(S.rows, cities, cache.active, plan.geom);
  if (!(out.stage_min > plan.geom.proximity()))
    fail(ErrorKind::Constraint, "leftover stage violates the proximity envelope (min " +
                                    std::to_string(out.stage_min) + " ft)");
  return out;
}

variant_outcome run_greedy_variant(const std::string& opt, method_run& r,
                                   const coa_cache& cache, const ExperimentPlan& plan) {
  variant_outcome out;
  const auto t0 = clock_type::now();
  if (opt == "none") {
    const NominalSchedule gl = greedy_schedule(r.leftovers, plan.geom, plan.greedy);
    out.comp_ms = cache.greedy_ms + ms_since(t0);
    out.stage = stage_from_schedule(gl);
    if (gl.makespan > 0.0) {
      const auto lines = schedule_timelines(gl, plan.geom, gl.makespan);
      out.stage_min = collision_monitor(lines).min_distance;
    }
  } else {
    // claim rows at hole granularity. The greedy stage keeps its safety model
    // from the dispatcher — wait out any nearby robot — so the market only
    // balances load and the rows need no conflict-free construction.
    const std::vector<City>& cities = hole_cities(r, plan);
    std::map<TaskId, int> city_of;
    for (const City& c : cities)
      for (TaskId id : c.members) city_of[id] = c.id;
    const NominalSchedule gl = greedy_schedule(r.leftovers, plan.geom, plan.greedy);
    ScheduleMatrix S;
    S.rows.resize(plan.geom.robot_count());
    for (const RobotSchedule& rs : gl.robots)
      for (const ScheduleEntry& e : rs.entries) S.rows[rs.robot].push_back(city_of.at(e.task));
    // reshape each row to keep the waiting small: claim order criss-crosses
    // the span, so cities inside a pair's shared strip go first for the
    // bottom robot and last for the top one, and each block sweeps axially
    for (int rb = 0; rb < static_cast<int>(S.rows.size()); ++rb) {
      auto& row = S.rows[rb];
      const RobotReach& self = plan.geom.robots[rb];
      const RobotReach* partner = nullptr;
      for (const auto& rr : plan.geom.robots)
        if (rr.pair == self.pair && rr.id != self.id) partner = &rr;
      auto shared = [&](int cid) {
        if (partner == nullptr) return false;
        Task probe;
        probe.pos = cities[cid].rep;
        return robot_reaches(*partner, probe);
      };
      const bool bottom = self.side == Side::Bottom;
      std::sort(row.begin(), row.end(), [&](int a, int b) {
        const bool sa = shared(a);
        const bool sb = shared(b);
        if (sa != sb) return bottom ? sa : sb;
        if (cities[a].rep.x != cities[b].rep.x) return cities[a].rep.x < cities[b].rep.x;
        return a < b;
      });
    }
    S.slot_count = padded_slot_count(S.rows, cities);
    MarketResult res = optimize_leftover(std::move(S), cities, cache.active, plan.geom,
                                         plan.beta, MarketSafety::Waited);
    if (res.capped)
      fail(ErrorKind::Validation, "leftover optimization hit its sale cap after " +
                                      std::to_string(res.steps) + " steps");
    out.comp_ms = cache.greedy_ms + ms_since(t0);
    const WaitedRows wr = execute_rows_waited(res.schedule.rows, cities, cache.active, plan.geom);
    out.stage.busy = wr.busy;
    out.stage.duration = wr.finish;
    out.stage.makespan = wr.makespan;
    for (const auto& row : res.schedule.rows)
      for (int cid : row)
        out.stage.tasks.insert(out.stage.tasks.end(), cities[cid].members.begin(),
                               cities[cid].members.end());
    if (!out.stage.tasks.empty()) out.stage_min = collision_monitor(wr.lines).min_distance;
  }
  if (!out.stage.tasks.empty() && !(out.stage_min > plan.geom.proximity()))
    fail(ErrorKind::Constraint, "leftover stage violates the proximity envelope (min " +
                                    std::to_string(out.stage_min) + " ft)");
  return out;
}

// exploratory mode: failures keep striking in the leftover stage. A repair
// whose start lands inside a robot's (already pushed-out) stage window pauses
// the row, so it extends the duration and is billed as applied repair time.
void absorb_stage_failures(LeftoverStage& st, const FailureTrace& trace, double start) {
  if (st.duration.empty()) return;
  st.repair.assign(st.duration.size(), 0.0);
  st.makespan = 0.0;
  for (std::size_t r = 0; r < st.duration.size() && r < trace.robots.size(); ++r) {
    double end = start + st.duration[r];
    for (const FailureEvent& ev : trace.robots[r]) {
      if (ev.start < start || ev.start >= end) continue;
      end += ev.repair;
      st.repair[r] += ev.repair;
    }
    st.duration[r] = end - start;
    st.makespan = std::max(st.makespan, st.duration[r]);
  }
}

// one (COA, seed) job: samples the shared failure trace, runs every variant,
// and fills its preassigned block of rows
void run_scenario(const ExperimentPlan& plan, const coa_cache& cache, const Coa& coa,
                  std::uint64_t seed, ScenarioRow* out) {
  for (std::size_t i = 0; i < plan.variants.size(); ++i) {
    out[i] = ScenarioRow{};
    out[i].coa = coa.name;
    out[i].seed = seed;
    out[i].method = plan.variants[i].method;
    out[i].opt_mode = plan.variants[i].opt_mode;
  }

  FailureModel model = plan.failure;
  model.seed = seed;
  std::optional<FailureTrace> trace;
  std::optional<method_run> proposed_run;
  std::optional<method_run> greedy_run;

  for (std::size_t i = 0; i < plan.variants.size(); ++i) {
    const VariantSpec& v = plan.variants[i];
    ScenarioRow& row = out[i];
    try {
      if (!trace) trace = sample_failures(model, plan.geom.robot_count(), cache.horizon);
      const bool is_proposed = v.method == "proposed";
      if (is_proposed && !cache.proposed_ok) fail(ErrorKind::Validation, cache.proposed_error);
      if (!is_proposed && !cache.greedy_ok) fail(ErrorKind::Validation, cache.greedy_error);

      auto& slot = is_proposed ? proposed_run : greedy_run;
      if (!slot)
        slot = start_run(is_proposed ? cache.ns : cache.gs, cache, *trace, plan, is_proposed);
      method_run& mr = *slot;
      if (!mr.ok) fail(ErrorKind::Validation, mr.error);

      variant_outcome vo = is_proposed ? run_proposed_variant(v.opt_mode, mr, cache, plan)
                                       : run_greedy_variant(v.opt_mode, mr, cache, plan);
      if (plan.leftover_failures) absorb_stage_failures(vo.stage, *trace, mr.log.completion);
      const EfficiencyResult eff = compute_efficiency(mr.log, vo.stage, *trace, cache.active);
      row.efficiency = eff.efficiency;
      row.t_min = eff.t_min;
      row.t_act = eff.t_act;
      row.comp_time_ms = vo.comp_ms;
      row.min_pairwise_ft = std::min(mr.log.monitor.min_distance, vo.stage_min);
      row.leftover_city_count = mr.city_count;
    } catch (const Error& e) {
      row.failed = true;
      row.error = e.what();
    } catch (const std::exception& e) {
      row.failed = true;
      row.error = std::string("unexpected: ") + e.what();
    }
  }
}

} // namespace

std::vector<VariantSpec> default_variants() {
  return {{"proposed", "none"},
          {"proposed", "city"},
          {"proposed", "hole"},
          {"greedy", "none"},
          {"greedy", "hole"}};
}

ExperimentPlan benchmark_plan() {
  ExperimentPlan plan;
  plan.wing = build_benchmark_wing();
  plan.geom = benchmark_geometry(plan.wing);
  plan.coas = benchmark_coas(plan.wing);
  return plan;
}

std::vector<ScenarioRow> run_experiment(const ExperimentPlan& plan) {
  if (plan.coas.empty()) fail(ErrorKind::InvalidConfig, "experiment: no COAs");
  if (plan.seed_count < 1) fail(ErrorKind::InvalidConfig, "experiment: no seeds");
  if (plan.variants.empty()) fail(ErrorKind::InvalidConfig, "experiment: no variants");
  for (const auto& v : plan.variants) {
    if (v.method != "proposed" && v.method != "greedy")
      fail(ErrorKind::InvalidConfig, "experiment: unknown method '" + v.method + "'");
    if (v.opt_mode != "none" && v.opt_mode != "city" && v.opt_mode != "hole")
      fail(ErrorKind::InvalidConfig, "experiment: unknown opt mode '" + v.opt_mode + "'");
    if (v.method == "greedy" && v.opt_mode == "city")
      fail(ErrorKind::InvalidConfig, "experiment: the greedy pipeline has no city-level mode");
  }
  if (plan.city_target < 1) fail(ErrorKind::InvalidConfig, "experiment: city_target must be >= 1");

  // nominal caches are built once, sequentially; the scenario jobs only read
  std::vector<coa_cache> caches;
  caches.reserve(plan.coas.size());
  for (const Coa& coa : plan.coas) caches.push_back(make_coa_cache(plan, coa));

  const std::size_t per_job = plan.variants.size();
  const std::size_t jobs = plan.coas.size() * static_cast<std::size_t>(plan.seed_count);
  std::vector<ScenarioRow> rows(jobs * per_job);

  // every job writes a fixed block of the row table, so the merge order is
  // (coa, seed, variant) no matter which worker finishes first
  auto run_job = [&](std::size_t j) {
    const std::size_t ci = j / static_cast<std::size_t>(plan.seed_count);
    const std::size_t si = j % static_cast<std::size_t>(plan.seed_count);
    const std::uint64_t seed = plan.seed_begin + si;
    run_scenario(plan, caches[ci], plan.coas[ci], seed, rows.data() + j * per_job);
  };

  int workers = plan.threads > 0 ? plan.threads
                                 : static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(jobs)));
  if (workers == 1) {
    for (std::size_t j = 0; j < jobs; ++j) run_job(j);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&] {
        for (std::size_t j = next.fetch_add(1); j < jobs; j = next.fetch_add(1)) run_job(j);
      });
    for (std::thread& t : pool) t.join();
  }
  return rows;
}

std::string to_csv(const std::vector<ScenarioRow>& rows) {
  std::string out =
      "coa,seed,method,opt_mode,efficiency,t_min,t_act,comp_time_ms,min_pairwise_ft,"
      "leftover_city_count\n";
  char buf[256];
  for (const ScenarioRow& r : rows) {
    if (r.failed) {
      std::snprintf(buf, sizeof buf, "%s,%llu,%s,%s,nan,nan,nan,nan,nan,-1\n", r.coa.c_str(),
                    static_cast<unsigned long long>(r.seed), r.method.c_str(),
                    r.opt_mode.c_str());
    } else {
      std::snprintf(buf, sizeof buf, "%s,%llu,%s,%s,%.6f,%.3f,%.3f,%.3f,%.4f,%d\n", r.coa.c_str(),
                    static_cast<unsigned long long>(r.seed), r.method.c_str(), r.opt_mode.c_str(),
                    r.efficiency, r.t_min, r.t_act, r.comp_time_ms, r.min_pairwise_ft,
                    r.leftover_city_count);
    }
    out += buf;
  }
  return out;
}

std::vector<ScenarioRow> rows_from_csv(const std::string& csv) {
  std::istringstream in(csv);
  std::string line;
  auto chomp = [](std::string& s) {
    if (!s.empty() && s.back() == '\r') s.pop_back();
  };
  if (!std::getline(in, line)) fail(ErrorKind::InvalidConfig, "csv: empty input");
  chomp(line);
  const std::string header =
      "coa,seed,method,opt_mode,efficiency,t_min,t_act,comp_time_ms,min_pairwise_ft,"
      "leftover_city_count";
  if (line != header) fail(ErrorKind::InvalidConfig, "csv: unrecognized header line");

  std::vector<ScenarioRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    chomp(line);
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::string field;
    std::istringstream ls(line);
    while (std::getline(ls, field, ',')) f.push_back(field);
    if (f.size() != 10)
      fail(ErrorKind::InvalidConfig,
           "csv: line " + std::to_string(lineno) + " has " + std::to_string(f.size()) +
               " fields, expected 10");
    ScenarioRow r;
    r.coa = f[0];
    r.method = f[2];
    r.opt_mode = f[3];
    try {
      r.seed = std::stoull(f[1]);
      r.efficiency = std::stod(f[4]);
      r.t_min = std::stod(f[5]);
      r.t_act = std::stod(f[6]);
      r.comp_time_ms = std::stod(f[7]);
      r.min_pairwise_ft = std::stod(f[8]);
      r.leftover_city_count = std::stoi(f[9]);
    } catch (const std::exception&) {
      fail(ErrorKind::InvalidConfig, "csv: line " + std::to_string(lineno) + " is not numeric");
    }
    if (std::isnan(r.efficiency)) {
      r.failed = true;
      r.error = "failed scenario (metrics were nan in the source table)";
    }
    rows.push_back(std::move(r));
  }
  return rows;
}

namespace {

double mean_of(const std::vector<double>& v) {
  if (v.empty()) return 0.0;
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_stddev(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double s = 0.0;
  for (double x : v) s += (x - m) * (x - m);
  return std::sqrt(s / static_cast<double>(v.size() - 1));
}

double welch_t(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.size() < 2 || b.size() < 2) return 0.0;
  const double ma = mean_of(a), mb = mean_of(b);
  const double sa = sample_stddev(a), sb = sample_stddev(b);
  const double denom = std::sqrt(sa * sa / static_cast<double>(a.size()) +
                                 sb * sb / static_cast<double>(b.size()));
  if (denom <= 0.0) return 0.0;
  return (ma - mb) / denom;
}

} // namespace

Summary summarize(const std::vector<ScenarioRow>& rows) {
  if (rows.empty()) fail(ErrorKind::Validation, "summarize: no results");

  std::vector<std::pair<std::string, std::string>> order; // variant appearance order
  std::map<std::pair<std::string, std::string>, std::vector<const ScenarioRow*>> by_variant;
  for (const ScenarioRow& r : rows) {
    auto key = std::make_pair(r.method, r.opt_mode);
    if (by_variant.find(key) == by_variant.end()) order.push_back(key);
    by_variant[key].push_back(&r);
  }

  Summary s;
  std::map<std::pair<std::string, std::string>, std::vector<double>> effs;
  for (const auto& key : order) {
    const auto& group = by_variant[key];
    VariantStats vs;
    vs.method = key.first;
    vs.opt_mode = key.second;
    std::vector<double> eff, comp, cities;
    std::vector<std::string> coa_order;
    std::map<std::string, std::vector<double>> coa_eff;
    for (const ScenarioRow* r : group) {
      ++vs.count;
      if (r->failed) {
        ++vs.failed;
        continue;
      }
      eff.push_back(r->efficiency);
      comp.push_back(r->comp_time_ms);
      cities.push_back(static_cast<double>(r->leftover_city_count));
      if (coa_eff.find(r->coa) == coa_eff.end()) coa_order.push_back(r->coa);
      coa_eff[r->coa].push_back(r->efficiency);
    }
    vs.mean_eff = mean_of(eff);
    vs.stddev_eff = sample_stddev(eff);
    vs.min_eff = eff.empty() ? 0.0 : *std::min_element(eff.begin(), eff.end());
    vs.mean_comp_ms = mean_of(comp);
    vs.max_comp_ms = comp.empty() ? 0.0 : *std::max_element(comp.begin(), comp.end());
    vs.mean_cities = mean_of(cities);
    std::vector<double> means;
    for (const std::string& c : coa_order) {
      means.push_back(mean_of(coa_eff[c]));
      vs.coa_means.emplace_back(c, means.back());
    }
    if (!means.empty()) {
      vs.coa_spread = *std::max_element(means.begin(), means.end()) -
                      *std::min_element(means.begin(), means.end());
      const double m = mean_of(means);
      double var = 0.0;
      for (double x : means) var += (x - m) * (x - m);
      vs.coa_variance = var / static_cast<double>(means.size());
    }
    effs[key] = std::move(eff);
    s.variants.push_back(std::move(vs));
  }

  auto add_pair = [&](const std::string& am, const std::string& ao, const std::string& bm,
                      const std::string& bo) {
    const auto ka = std::make_pair(am, ao);
    const auto kb = std::make_pair(bm, bo);
    if (effs.find(ka) == effs.end() || effs.find(kb) == effs.end()) return;
    WelchPair p;
    p.a = am + "/" + ao;
    p.b = bm + "/" + bo;
    p.mean_gap = mean_of(effs[ka]) - mean_of(effs[kb]);
    p.t = welch_t(effs[ka], effs[kb]);
    s.comparisons.push_back(p);
  };
  add_pair("proposed", "none", "greedy", "none");
  add_pair("proposed", "city", "proposed", "none");
  add_pair("proposed", "hole", "proposed", "city");
  add_pair("greedy", "hole", "greedy", "none");

  const VariantStats* city = nullptr;
  const VariantStats* hole = nullptr;
  for (const VariantStats& vs : s.variants) {
    if (vs.method == "proposed" && vs.opt_mode == "city") city = &vs;
    if (vs.method == "proposed" && vs.opt_mode == "hole") hole = &vs;
  }
  if (city && hole && city->mean_comp_ms > 0.0)
    s.hole_over_city_time = hole->mean_comp_ms / city->mean_comp_ms;
  return s;
}

std::string format_summary(const Summary& s) {
  std::string out;
  char buf[512];
  for (const VariantStats& v : s.variants) {
    std::snprintf(buf, sizeof buf,
                  "%s/%s: n=%d failed=%d  efficiency %.4f +/- %.4f (min %.4f)  "
                  "comp %.2f ms avg / %.2f ms max  cities %.1f avg\n",
                  v.method.c_str(), v.opt_mode.c_str(), v.count, v.failed, v.mean_eff,
                  v.stddev_eff, v.min_eff, v.mean_comp_ms, v.max_comp_ms, v.mean_cities);
    out += buf;
    out += "  per-COA mean efficiency:";
    for (const auto& [coa, m] : v.coa_means) {
      std::snprintf(buf, sizeof buf, "  %s %.4f", coa.c_str(), m);
      out += buf;
    }
    std::snprintf(buf, sizeof buf, "  (spread %.4f, variance %.3e)\n", v.coa_spread,
                  v.coa_variance);
    out += buf;
  }
  if (!s.comparisons.empty()) {
    out += "comparisons (Welch t on efficiency):\n";
    for (const WelchPair& p : s.comparisons) {
      std::snprintf(buf, sizeof buf, "  %s vs %s: gap %+.4f, t = %.2f\n", p.a.c_str(),
                    p.b.c_str(), p.mean_gap, p.t);
      out += buf;
    }
  }
  if (s.hole_over_city_time > 0.0) {
    std::snprintf(buf, sizeof buf, "hole-opt mean computation time / city-opt: %.1fx\n",
                  s.hole_over_city_time);
    out += buf;
  }
  return out;
}

} // namespace wingsched
