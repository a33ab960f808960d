#include "wingsched/failure.hpp"

#include <cmath>
#include <random>

#include "wingsched/error.hpp"

namespace wingsched {

namespace {

// Box-Muller over raw 53-bit uniforms. std::normal_distribution's output
// sequence is implementation-defined; this keeps traces reproducible across
// standard libraries.
class NormalSampler {
public:
  explicit NormalSampler(std::mt19937_64 engine) : eng_(engine) {}

  double operator()(double mean, double sigma) {
    if (!have_spare_) {
      const double u1 = 1.0 - uniform(); // (0, 1]
      const double u2 = uniform();
      const double r = std::sqrt(-2.0 * std::log(u1));
      const double a = 2.0 * 3.14159265358979323846 * u2;
      spare_ = r * std::sin(a);
      have_spare_ = true;
      return mean + sigma * r * std::cos(a);
    }
    have_spare_ = false;
    return mean + sigma * spare_;
  }

  // redraw until the sample clears the floor
  double at_least(double floor, double mean, double sigma) {
    for (;;) {
      const double v = (*this)(mean, sigma);
      if (v >= floor) return v;
    }
  }

private:
  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

} // namespace

FailureTrace sample_failures(const FailureModel& model, int robot_count, double horizon) {
  if (horizon <= 0.0) fail(ErrorKind::Validation, "failures: horizon must be positive");
  if (robot_count < 0) fail(ErrorKind::Validation, "failures: negative robot count");
  if (model.floor <= 0.0) fail(ErrorKind::InvalidConfig, "failures: floor must be positive");
  if (model.first_sigma < 0.0 || model.recurrence_sigma < 0.0 || model.repair_sigma < 0.0)
    fail(ErrorKind::InvalidConfig, "failures: negative sigma");

  FailureTrace trace;
  trace.seed = model.seed;
  trace.robots.resize(robot_count);
  trace.total_repair.assign(robot_count, 0.0);
  for (int r = 0; r < robot_count; ++r) {
    std::seed_seq seq{static_cast<std::uint32_t>(model.seed),
                      static_cast<std::uint32_t>(model.seed >> 32),
                      static_cast<std::uint32_t>(r)};
    NormalSampler draw{std::mt19937_64(seq)};
    double start = draw.at_least(model.floor, model.first_mean, model.first_sigma);
    double prev_end = 0.0;
    while (start < horizon) {
      // a robot cannot fail while already under repair
      start = std::max(start, prev_end);
      if (start >= horizon) break;
      const double repair = draw.at_least(model.floor, model.repair_mean, model.repair_sigma);
      trace.robots[r].push_back({start, repair});
      trace.total_repair[r] += repair;
      prev_end = start + repair;
      start += draw.at_least(model.floor, model.recurrence_mean, model.recurrence_sigma);
    }
  }
  return trace;
}

} // namespace wingsched
