#pragma once

// JSON trees and CSV tables for plans, reports, timelines and comparisons.
// Field names are listed in docs/report-schema.md.

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

#include "aespa/archtemplate.hpp"
#include "aespa/scheduler.hpp"

namespace aespa::io {

using nlohmann::json;

json to_json(const sched::Region& r);
json to_json(const sched::PartitionPlan& plan);
json to_json(const cost::CostBreakdown& b);
json to_json(const sched::ScheduleReport& r);
json to_json(const sched::ManyKernelReport& r);
json to_json(const sched::ComparisonTable& t);
json to_json(const arch::AespaConfig& c);

/// Inverse of to_json(PartitionPlan); throws InputError on missing or mistyped fields.
sched::PartitionPlan plan_from_json(const json& j);

/// Minimal CSV table: a header row and string cells, written with '\n' line ends.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void write_csv(std::ostream& out) const;
  /// Array of objects keyed by header; numeric-looking cells become numbers.
  [[nodiscard]] json to_json() const;
};

/// Shortest representation that parses back to the same double.
std::string num(double v);

}  // namespace aespa::io
