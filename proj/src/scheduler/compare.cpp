#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "internal.hpp"

namespace aespa::sched {

namespace {

double geomean(const std::vector<double>& xs) {
  double s = 0.0;
  for (const auto x : xs) s += std::log(x);
  return xs.empty() ? 0.0 : std::exp(s / static_cast<double>(xs.size()));
}

}  // namespace

ComparisonTable compare_baselines(const std::vector<workloads::WorkloadEntry>& suite,
                                  const std::vector<AespaConfig>& presets, const Bandwidth& bandwidth,
                                  const std::string& baseline, const SearchOptions& options) {
  const auto base_it =
      std::find_if(presets.begin(), presets.end(), [&](const AespaConfig& c) { return c.name == baseline; });
  if (base_it == presets.end()) throw InputError(fmt::format("baseline '{}' is not among the compared presets", baseline));
  const auto base = static_cast<std::size_t>(base_it - presets.begin());

  ComparisonTable t;
  t.baseline = baseline;
  t.bandwidth = bandwidth;
  const auto np = presets.size();
  std::vector<std::vector<double>> speed(np), energy(np), edp(np), util(np);
  for (const auto& w : suite) {
    std::vector<ComparisonRow> rows;
    for (const auto& p : presets) {
      const auto r = search_single_kernel(w.spec, p, bandwidth, options);
      ComparisonRow row;
      row.workload = w.name;
      row.preset = p.name;
      row.makespan_cycles = r.report.makespan_cycles;
      row.effective_utilization = r.report.effective_utilization;
      row.energy = r.report.total_energy;
      row.edp = r.report.edp;
      row.plan = r.plan;
      rows.push_back(std::move(row));
    }
    const auto& b = rows[base];
    for (std::size_t i = 0; i < np; ++i) {
      auto& row = rows[i];
      row.speedup = static_cast<double>(b.makespan_cycles) / static_cast<double>(row.makespan_cycles);
      row.energy_improvement = b.energy / row.energy;
      row.edp_improvement = b.edp / row.edp;
      speed[i].push_back(row.speedup);
      energy[i].push_back(row.energy_improvement);
      edp[i].push_back(row.edp_improvement);
      util[i].push_back(row.effective_utilization);
    }
    t.rows.insert(t.rows.end(), rows.begin(), rows.end());
  }
  for (std::size_t i = 0; i < np; ++i) {
    ComparisonRow g;
    g.workload = "geomean";
    g.preset = presets[i].name;
    g.speedup = geomean(speed[i]);
    g.energy_improvement = geomean(energy[i]);
    g.edp_improvement = geomean(edp[i]);
    g.effective_utilization = geomean(util[i]);
    t.geomeans.push_back(std::move(g));
  }
  return t;
}

namespace {

// All ways to split `steps` units among `parts` kinds, lexicographic.
void compositions(int steps, std::size_t parts, std::vector<int>& cur, std::vector<std::vector<int>>& out) {
  if (cur.size() + 1 == parts) {
    cur.push_back(steps);
    out.push_back(cur);
    cur.pop_back();
    return;
  }
  for (int s = 0; s <= steps; ++s) {
    cur.push_back(s);
    compositions(steps - s, parts, cur, out);
    cur.pop_back();
  }
}

}  // namespace

AespaConfig search_config(const std::vector<workloads::WorkloadEntry>& suite, const arch::Calibration& calibration,
                          const Bandwidth& bandwidth, const ConfigSearchOptions& options) {
  if (options.area_steps < 1) throw InputError("area_steps must be >= 1");
  if (options.kinds.empty()) throw InputError("no dataflow kinds to search over");
  if (suite.empty()) throw InputError("empty workload suite");
  std::vector<std::vector<int>> mixes;
  std::vector<int> cur;
  compositions(options.area_steps, options.kinds.size(), cur, mixes);

  AespaConfig best;
  double best_score = std::numeric_limits<double>::infinity();
  for (const auto& m : mixes) {
    arch::Mix mix;
    for (std::size_t i = 0; i < m.size(); ++i)
      if (m[i] > 0) mix.emplace_back(options.kinds[i], static_cast<double>(m[i]) / options.area_steps);
    auto config = arch::allocate(mix, calibration, std::string(arch::kSearchedPreset));
    if (config.clusters.empty()) continue;
    std::vector<double> scores;
    for (const auto& w : suite) {
      const auto r = search_single_kernel(w.spec, config, bandwidth, options.search);
      scores.push_back(options.search.objective == Objective::Makespan ? static_cast<double>(r.report.makespan_cycles)
                                                                       : r.report.edp);
    }
    const double s = geomean(scores);
    if (s < best_score) {
      best_score = s;
      best = std::move(config);
    }
  }
  best.is_static = false;
  return best;
}

AespaConfig resolve_preset(const std::string& name, const arch::Calibration& calibration, const Bandwidth& bandwidth,
                           const ConfigSearchOptions& options) {
  if (name == arch::kSearchedPreset) return search_config(workloads::builtin_suite(), calibration, bandwidth, options);
  return arch::preset(name, calibration);
}

}  // namespace aespa::sched
