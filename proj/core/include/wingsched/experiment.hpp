#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "wingsched/failure.hpp"
#include "wingsched/greedy.hpp"
#include "wingsched/metrics.hpp"

namespace wingsched {

// One pipeline flavor: scheduling method x leftover optimization granularity.
// method: "proposed" | "greedy"; opt_mode: "none" | "city" | "hole".
struct VariantSpec {
  std::string method;
  std::string opt_mode;
};

// proposed x {none, city, hole} plus greedy x {none, hole}
std::vector<VariantSpec> default_variants();

struct ScenarioRow {
  std::string coa;
  std::uint64_t seed = 0;
  std::string method;
  std::string opt_mode;
  double efficiency = 0.0;
  double t_min = 0.0;
  double t_act = 0.0;
  double comp_time_ms = 0.0;     // scheduling + leftover build + optimization
  double min_pairwise_ft = 0.0;  // exact minimum over execution + leftover stage
  int leftover_city_count = 0;   // city-granularity cluster count of the leftover set
  bool failed = false;
  std::string error;
};

struct ExperimentPlan {
  Workpart wing;
  RobotGeometry geom;
  std::vector<Coa> coas;
  FailureModel failure; // the per-scenario seed overrides failure.seed
  std::uint64_t seed_begin = 1;
  int seed_count = 100;
  std::vector<VariantSpec> variants = default_variants();
  double overlap_fraction = 1.0; // share of the overlap feature withheld for re-balancing
  int city_target = 9;
  double beta = 20.0;
  double rate_window = 2.0; // ft, local axial-rate window (one rib pitch)
  GreedyConfig greedy;
  int threads = 0; // scenario workers; 0 picks one per hardware thread
  // Exploratory: let failures keep striking during the leftover stage. A
  // robot under repair pauses its row, so the repair time lands in both the
  // stage duration and the ideal-duration numerator. The stage distance
  // certificate still describes the unpaused timeline, which is why
  // acceptance runs always leave this off.
  bool leftover_failures = false;
};

// The full reproduction: benchmark wing, 5 COAs, 100 seeds, all 5 variants.
ExperimentPlan benchmark_plan();

// Runs every (COA, seed, variant) scenario sequentially and deterministically.
// A scenario that throws is marked failed with its diagnostic; the suite
// continues. Nominal schedules and their measured build times are computed
// once per COA and shared; the failure trace is sampled once per (COA, seed)
// and shared by both methods.
std::vector<ScenarioRow> run_experiment(const ExperimentPlan& plan);

// One CSV row per scenario; metrics of failed rows render as nan.
std::string to_csv(const std::vector<ScenarioRow>& rows);

// Parses a result table back from its CSV form (header required). Rows with
// nan metrics come back flagged as failed. Throws on malformed input.
std::vector<ScenarioRow> rows_from_csv(const std::string& csv);

struct VariantStats {
  std::string method;
  std::string opt_mode;
  int count = 0;
  int failed = 0;
  double mean_eff = 0.0;
  double stddev_eff = 0.0; // sample standard deviation
  double min_eff = 0.0;
  double mean_comp_ms = 0.0;
  double max_comp_ms = 0.0;
  double mean_cities = 0.0;
  std::vector<std::pair<std::string, double>> coa_means; // COA appearance order
  double coa_spread = 0.0;   // max - min of per-COA means
  double coa_variance = 0.0; // population variance of per-COA means
};

struct WelchPair {
  std::string a;
  std::string b;
  double mean_gap = 0.0; // mean(a) - mean(b)
  double t = 0.0;        // Welch t statistic
};

struct Summary {
  std::vector<VariantStats> variants;
  std::vector<WelchPair> comparisons;
  // mean comp time of proposed/hole over proposed/city; 0 when either is absent
  double hole_over_city_time = 0.0;
};

Summary summarize(const std::vector<ScenarioRow>& rows);
std::string format_summary(const Summary& s);

} // namespace wingsched
