#include "aespa/report_io.hpp"

#include <charconv>
#include <ostream>

#include <fmt/format.h>

namespace aespa::io {

std::string num(double v) { return fmt::format("{}", v); }

json to_json(const sched::Region& r) {
  return json{{"m", {r.m0, r.m1}}, {"k", {r.k0, r.k1}}, {"n", {r.n0, r.n1}}};
}

json to_json(const sched::PartitionPlan& plan) {
  json j;
  auto cut = [](const std::optional<Index>& c) { return c ? json(*c) : json(nullptr); };
  j["m_cut"] = cut(plan.m_cut);
  j["n_cut"] = cut(plan.n_cut);
  j["k_cut"] = cut(plan.k_cut);
  j["merge_required"] = plan.merge_required();
  j["assignments"] = json::array();
  for (const auto& a : plan.assignments)
    j["assignments"].push_back(
        {{"region", to_json(a.region)}, {"ccf_a", a.ccf.a.to_string()}, {"ccf_b", a.ccf.b.to_string()}, {"cluster", a.cluster}});
  return j;
}

json to_json(const cost::CostBreakdown& b) {
  return json{{"dataflow", cost::dataflow_name(b.dataflow)},
              {"ccf", b.ccf.to_string()},
              {"pe_count", b.pe_count},
              {"usable_pes", b.usable_pes},
              {"compute_cycles", b.compute_cycles},
              {"memory_cycles", b.memory_cycles},
              {"runtime_cycles", b.runtime_cycles},
              {"traffic_bytes", b.traffic_bytes},
              {"conversion_bytes", b.conversion_bytes},
              {"loop_work", b.loop_work},
              {"effectual_macs", b.effectual_macs},
              {"effective_utilization", b.effective_utilization},
              {"energy", b.energy},
              {"edp", b.edp}};
}

json to_json(const sched::ScheduleReport& r) {
  json j;
  j["per_cluster"] = json::array();
  for (const auto& b : r.per_cluster) j["per_cluster"].push_back(to_json(b));
  j["merge_cycles"] = r.merge_cycles;
  j["makespan_cycles"] = r.makespan_cycles;
  j["effectual_macs"] = r.effectual_macs;
  j["total_energy"] = r.total_energy;
  j["edp"] = r.edp;
  j["effective_utilization"] = r.effective_utilization;
  return j;
}

json to_json(const sched::ManyKernelReport& r) {
  json j;
  j["placements"] = json::array();
  for (const auto& p : r.placements)
    j["placements"].push_back({{"kernel", p.kernel},
                               {"id", p.id},
                               {"cluster", p.cluster},
                               {"ccf", p.ccf.to_string()},
                               {"start", p.start},
                               {"end", p.end},
                               {"compute_cycles", p.compute_cycles},
                               {"traffic_bytes", p.traffic_bytes}});
  j["total_cycles"] = r.total_cycles;
  return j;
}

json to_json(const sched::ComparisonTable& t) {
  auto row = [](const sched::ComparisonRow& r, bool with_plan) {
    json j{{"workload", r.workload},
           {"preset", r.preset},
           {"speedup", r.speedup},
           {"effective_utilization", r.effective_utilization},
           {"energy_improvement", r.energy_improvement},
           {"edp_improvement", r.edp_improvement}};
    if (with_plan) {
      j["makespan_cycles"] = r.makespan_cycles;
      j["energy"] = r.energy;
      j["edp"] = r.edp;
      j["plan"] = to_json(r.plan);
    }
    return j;
  };
  json j;
  j["baseline"] = t.baseline;
  j["bandwidth"] = t.bandwidth.to_string();
  j["rows"] = json::array();
  for (const auto& r : t.rows) j["rows"].push_back(row(r, true));
  j["geomeans"] = json::array();
  for (const auto& r : t.geomeans) j["geomeans"].push_back(row(r, false));
  return j;
}

json to_json(const arch::AespaConfig& c) {
  json j;
  j["name"] = c.name;
  j["static"] = c.is_static;
  j["clusters"] = json::array();
  for (const auto& cl : c.clusters)
    j["clusters"].push_back({{"dataflow", cost::dataflow_name(cl.dataflow)}, {"pe_count", cl.pe_count}});
  j["total_pes"] = c.total_pes();
  j["used_area_mm2"] = c.used_area();
  j["peak_tflops"] = arch::peak_tflops(c);
  j["hbm_bandwidth_Bps"] = c.memory.hbm_bandwidth;
  return j;
}

sched::PartitionPlan plan_from_json(const json& j) {
  try {
    sched::PartitionPlan plan;
    auto cut = [&](const char* key) -> std::optional<Index> {
      if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
      return j.at(key).get<Index>();
    };
    plan.m_cut = cut("m_cut");
    plan.n_cut = cut("n_cut");
    plan.k_cut = cut("k_cut");
    for (const auto& a : j.at("assignments")) {
      sched::Assignment asg;
      const auto& r = a.at("region");
      asg.region = sched::Region{r.at("m").at(0).get<Index>(), r.at("m").at(1).get<Index>(),
                                 r.at("k").at(0).get<Index>(), r.at("k").at(1).get<Index>(),
                                 r.at("n").at(0).get<Index>(), r.at("n").at(1).get<Index>()};
      asg.ccf = CcfPair{parse_ccf(a.at("ccf_a").get<std::string>()), parse_ccf(a.at("ccf_b").get<std::string>())};
      asg.cluster = a.at("cluster").get<std::size_t>();
      plan.assignments.push_back(asg);
    }
    return plan;
  } catch (const json::exception& e) {
    throw InputError(fmt::format("malformed plan: {}", e.what()));
  }
}

void Table::write_csv(std::ostream& out) const {
  auto line = [&](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) out << (i ? "," : "") << cells[i];
    out << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

json Table::to_json() const {
  json arr = json::array();
  for (const auto& r : rows) {
    json o = json::object();
    for (std::size_t i = 0; i < header.size() && i < r.size(); ++i) {
      const auto& s = r[i];
      const auto* end = s.data() + s.size();
      std::int64_t n = 0;
      if (const auto [p, e] = std::from_chars(s.data(), end, n); !s.empty() && e == std::errc{} && p == end) {
        o[header[i]] = n;
        continue;
      }
      double v = 0.0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (!s.empty() && ec == std::errc{} && ptr == s.data() + s.size())
        o[header[i]] = v;
      else
        o[header[i]] = s;
    }
    arr.push_back(std::move(o));
  }
  return arr;
}

}  // namespace aespa::io
