#pragma once

#include <vector>

#include <nlohmann/json.hpp>

#include "wingsched/execution.hpp"
#include "wingsched/leftover.hpp"
#include "wingsched/market.hpp"
#include "wingsched/nominal.hpp"
#include "wingsched/partition.hpp"

namespace wingsched {

// Audit serialization. Every scheduling artifact renders to a plain JSON
// document: partitions as robot -> ordered task ids + interval + offset data,
// schedules as per-robot timeline rows (task, x, y, start, end), execution
// logs with their applied repairs and skip lists, and failure traces with the
// seed that produced them so a run can be replayed exactly.

nlohmann::json report_json(const PartitionSet& ps);
nlohmann::json report_json(const NominalSchedule& s);
nlohmann::json report_json(const ConstraintReport& rep);
nlohmann::json report_json(const FailureTrace& trace);
nlohmann::json report_json(const ExecutionLog& log);

// Leftover artifacts: the city table, and a schedule matrix with per-row
// service totals (rows reference city ids).
nlohmann::json report_json(const std::vector<City>& cities);
nlohmann::json report_json(const ScheduleMatrix& m, const std::vector<City>& cities);
nlohmann::json report_json(const std::vector<Sale>& sales);

} // namespace wingsched
