#include "wingsched/market.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "wingsched/error.hpp"

namespace wingsched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

std::vector<const Task*> make_table(const std::vector<Task>& tasks) {
  TaskId max_id = 0;
  for (const auto& t : tasks) max_id = std::max(max_id, t.id);
  std::vector<const Task*> table(max_id + 1, nullptr);
  for (const auto& t : tasks) table[t.id] = &t;
  return table;
}

Timeline row_busy(const std::vector<int>& row, int insert_city, int insert_at,
                  const std::vector<City>& cities,
                  const std::vector<const Task*>& table) {
  Timeline busy;
  double t = 0.0;
  auto append_city = [&](int cid) {
    for (TaskId id : cities[cid].members) {
      const Task& tk = *table[id];
      busy.push_back({t, t + tk.service_time, tk.pos});
      t += tk.service_time;
    }
  };
  for (int i = 0; i <= static_cast<int>(row.size()); ++i) {
    if (i == insert_at) append_city(insert_city);
    if (i < static_cast<int>(row.size())) append_city(row[i]);
  }
  return busy;
}

double row_service(const std::vector<int>& row, const std::vector<City>& cities) {
  double v = 0.0;
  for (int cid : row) v += cities[cid].service;
  return v;
}

} // namespace

std::vector<double> utilities(const ScheduleMatrix& S, const std::vector<City>& cities) {
  std::vector<double> u(S.rows.size(), 0.0);
  double total = 0.0;
  for (std::size_t i = 0; i < S.rows.size(); ++i) {
    u[i] = row_service(S.rows[i], cities);
    total += u[i];
  }
  if (total > 0.0)
    for (auto& v : u) v /= total;
  return u;
}

double utility_sigma(const std::vector<double>& u) {
  if (u.empty()) return 0.0;
  double mean = 0.0;
  for (double v : u) mean += v;
  mean /= u.size();
  double acc = 0.0;
  for (double v : u) acc += (v - mean) * (v - mean);
  return std::sqrt(acc / u.size());
}

StepResult market_step(ScheduleMatrix& S, const std::vector<City>& cities,
                       const std::vector<Task>& tasks, const RobotGeometry& geom,
                       double beta, MarketSafety safety) {
  const int nr = static_cast<int>(S.rows.size());
  if (nr != static_cast<int>(geom.robots.size()))
    fail(ErrorKind::Validation, "market: row count != robot count");
  if (beta < 0.0) fail(ErrorKind::InvalidConfig, "market: beta must be non-negative");

  const auto u = utilities(S, cities);
  double total = 0.0;
  for (std::size_t i = 0; i < S.rows.size(); ++i) total += row_service(S.rows[i], cities);
  if (total <= 0.0) return {};
  const double sigma0 = utility_sigma(u);
  double mu = 0.0;
  for (double v : u) mu += v;
  mu /= nr;

  double max_city_service = 0.0;
  for (const auto& c : cities) max_city_service = std::max(max_city_service, c.service);
  if (max_city_service <= 0.0) return {};
  std::vector<double> price(cities.size(), 0.0);
  for (const auto& c : cities) price[c.id] = c.service / max_city_service;

  struct Entry {
    double m;
    int i, j;
  };
  std::vector<Entry> entries;
  for (int i = 0; i < nr; ++i)
    for (int j : S.rows[i]) entries.push_back({beta * u[i] + price[j], i, j});
  std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) {
    if (a.m != b.m) return a.m > b.m;
    if (a.i != b.i) return a.i < b.i;
    return a.j < b.j;
  });

  // top two prices per row (for the seller-removal maximum) and the best
  // unaffected-row margins (for the proposed-market maximum)
  std::vector<double> max1(nr, -kInf), max2(nr, -kInf);
  std::vector<int> count1(nr, 0);
  for (int i = 0; i < nr; ++i) {
    for (int j : S.rows[i]) {
      const double p = price[j];
      if (p > max1[i]) {
        max2[i] = max1[i];
        max1[i] = p;
        count1[i] = 1;
      } else if (p == max1[i]) {
        ++count1[i];
        max2[i] = max1[i];
      } else if (p > max2[i]) {
        max2[i] = p;
      }
    }
  }
  struct RowTop {
    double val;
    int i;
  };
  std::vector<RowTop> tops;
  for (int i = 0; i < nr; ++i)
    if (!S.rows[i].empty()) tops.push_back({beta * u[i] + max1[i], i});
  std::sort(tops.begin(), tops.end(),
            [](const RowTop& a, const RowTop& b) { return a.val > b.val; });
  if (tops.size() > 3) tops.resize(3);

  const auto table = make_table(tasks);
  const double prox = geom.proximity();

  // the bar every candidate sale has to clear: the current top margin must
  // come down, no matter which of the seller's cities ends up moving
  const double m_star = entries.empty() ? -kInf : entries[0].m;
  for (std::size_t e = 0; e < entries.size(); ++e) {
    const Entry& en = entries[e];
    // sellers at or below the mean utility have nothing to gain from selling
    if (e > 0 && en.m - price[en.j] <= beta * mu) return {};

    const double w = cities[en.j].service / total;
    struct Buyer {
      double delta;
      int k;
    };
    std::vector<Buyer> buyers;
    for (int k = 0; k < nr; ++k) {
      if (k == en.i) continue;
      if (!(cities[en.j].reach & (1u << k))) continue;
      const double u_s = u[en.i] - w;
      const double u_k = u[k] + w;
      double mstar_p = -kInf;
      for (const auto& t : tops)
        if (t.i != en.i && t.i != k) {
          mstar_p = t.val;
          break;
        }
      // seller row after the removal
      const double removal_max =
          (S.rows[en.i].size() == 1) ? -kInf
          : (price[en.j] == max1[en.i] && count1[en.i] == 1) ? max2[en.i]
                                                             : max1[en.i];
      if (removal_max > -kInf) mstar_p = std::max(mstar_p, beta * u_s + removal_max);
      const double buyer_max =
          std::max(S.rows[k].empty() ? -kInf : max1[k], price[en.j]);
      mstar_p = std::max(mstar_p, beta * u_k + buyer_max);
      if (!(mstar_p < m_star)) continue; // the sale must lower the top margin
      std::vector<double> up = u;
      up[en.i] = u_s;
      up[k] = u_k;
      const double delta = sigma0 - utility_sigma(up);
      if (!(delta > 1e-12)) continue; // a sale must shrink the utility spread
      buyers.push_back({delta, k});
    }
    std::sort(buyers.begin(), buyers.end(), [](const Buyer& a, const Buyer& b) {
      if (a.delta != b.delta) return a.delta > b.delta;
      return a.k < b.k;
    });
    if (buyers.empty()) continue;

    auto base_rows = S.rows;
    {
      auto& srow = base_rows[en.i];
      srow.erase(std::find(srow.begin(), srow.end(), en.j));
    }

    for (const auto& buyer : buyers) {
      const int k = buyer.k;
      double horizon = 0.0;
      for (int a = 0; a < nr; ++a) {
        double d = row_service(base_rows[a], cities);
        if (a == k) d += cities[en.j].service;
        horizon = std::max(horizon, d);
      }
      std::vector<Timeline> lines(nr);
      for (int a = 0; a < nr; ++a) {
        if (a == k) continue;
        lines[a] = with_parking(row_busy(base_rows[a], -1, -1, cities, table),
                                geom.robots[a].base, 0.0, horizon);
      }
      double min_other = kInf;
      for (int a = 0; a < nr; ++a) {
        if (a == k) continue;
        for (int b = a + 1; b < nr; ++b) {
          if (b == k) continue;
          min_other =
              std::min(min_other, pair_min_distance(lines[a], lines[b]).min_distance);
        }
      }

      double best_w = -kInf;
      int best_l = -1;
      const int slots = static_cast<int>(base_rows[k].size());
      for (int l = 0; l <= slots; ++l) {
        const Timeline line_k =
            with_parking(row_busy(base_rows[k], en.j, l, cities, table),
                         geom.robots[k].base, 0.0, horizon);
        double w_l = min_other;
        for (int a = 0; a < nr && w_l > best_w; ++a) {
          if (a == k) continue;
          const auto pd = pair_min_distance(line_k, lines[a], -1.0, best_w);
          w_l = std::min(w_l, pd.min_distance);
        }
        if (w_l > best_w) {
          best_w = w_l;
          best_l = l;
        }
        if (best_w >= min_other) break; // nothing can beat the cap; lowest l kept
      }

      if (safety == MarketSafety::Waited ? best_l >= 0 : best_w > prox) {
        S.rows = base_rows;
        S.rows[k].insert(S.rows[k].begin() + best_l, en.j);
        if (safety == MarketSafety::Strict) {
          const auto mon =
              collision_monitor(leftover_timelines(S.rows, cities, tasks, geom), prox);
          if (!mon.clear(prox))
            fail(ErrorKind::Validation, "market: sold schedule fails the separation sweep");
        }
        Sale sale;
        sale.seller = en.i;
        sale.buyer = k;
        sale.city = en.j;
        sale.placement = best_l + 1;
        sale.sigma_before = sigma0;
        sale.sigma_after = utility_sigma(utilities(S, cities));
        sale.w_star = best_w;
        return {true, sale};
      }
    }
  }
  return {};
}

MarketResult optimize_leftover(ScheduleMatrix S, const std::vector<City>& cities,
                               const std::vector<Task>& tasks, const RobotGeometry& geom,
                               double beta, MarketSafety safety) {
  MarketResult res;
  const long cap =
      std::max<long>(16, static_cast<long>(cities.size()) * static_cast<long>(cities.size()));
  for (;;) {
    if (res.steps >= cap) {
      res.capped = true;
      break;
    }
    const auto st = market_step(S, cities, tasks, geom, beta, safety);
    ++res.steps;
    if (!st.sold) break;
    if (st.sale.sigma_after > st.sale.sigma_before + 1e-9)
      fail(ErrorKind::Validation, "market: utility spread increased across a sale");
    res.sales.push_back(st.sale);
  }
  res.schedule = std::move(S);
  return res;
}

} // namespace wingsched
