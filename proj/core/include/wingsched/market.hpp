#pragma once

#include <vector>

#include "wingsched/leftover.hpp"

namespace wingsched {

// One accepted transaction: seller hands city to buyer at the recorded
// placement (1-based slot in the buyer's row), with the utility spread
// before/after and the separation w* the accepted placement achieved.
struct Sale {
  int seller = -1;
  int buyer = -1;
  int city = -1;
  int placement = 0;
  double sigma_before = 0.0;
  double sigma_after = 0.0;
  double w_star = 0.0;
};

struct StepResult {
  bool sold = false;
  Sale sale;
};

struct MarketResult {
  ScheduleMatrix schedule;
  std::vector<Sale> sales;
  int steps = 0;
  bool capped = false; // stopped by the iteration guard, not by convergence
};

// Utility vector u_i = row service / total leftover service (all zero when
// there is no work), and its population standard deviation.
std::vector<double> utilities(const ScheduleMatrix& S, const std::vector<City>& cities);
double utility_sigma(const std::vector<double>& u);

// How a sale's placement is gated. Strict mode requires the placement to
// clear the proximity envelope on the back-to-back timeline — rows that were
// built conflict-free stay conflict-free. Waited mode is for rows that will
// be executed with collision-avoidance waits: separation still ranks the
// placements, but it never vetoes a sale.
enum class MarketSafety { Strict, Waited };

// One auction round: the highest-margin (seller, city) entries are tried in
// descending margin order (ties to the lower robot, then lower city id).
// The first entry is always attempted; before any further entry the search
// stops once margin - price drops to the mean utility. Buyers must reach the
// city and must strictly lower the top margin; they are tried in order of
// decreasing utility-spread reduction. The sale goes to the placement with
// the largest full-schedule minimum separation; in strict mode that
// separation must also clear the proximity envelope. S is updated in place
// when a sale happens.
StepResult market_step(ScheduleMatrix& S, const std::vector<City>& cities,
                       const std::vector<Task>& tasks, const RobotGeometry& geom,
                       double beta = 20.0, MarketSafety safety = MarketSafety::Strict);

// Repeats market_step until no further sale is useful. The utility spread is
// non-increasing across accepted sales; a hard cap of city_count^2 rounds
// guards termination and is reported via `capped`.
MarketResult optimize_leftover(ScheduleMatrix S, const std::vector<City>& cities,
                               const std::vector<Task>& tasks, const RobotGeometry& geom,
                               double beta = 20.0, MarketSafety safety = MarketSafety::Strict);

} // namespace wingsched
