#include <algorithm>

#include <fmt/format.h>

#include "internal.hpp"

namespace aespa::sched {

ManyKernelReport schedule_many(const std::vector<KernelSpec>& queue, const AespaConfig& config,
                               const Bandwidth& bandwidth, const PlanOptions& options) {
  if (config.clusters.empty()) throw InputError(fmt::format("config '{}' has no clusters", config.name));
  if (queue.empty()) throw InputError("kernel queue is empty");
  const auto opts = detail::effective_options(options, config);
  const auto nc = config.clusters.size();
  const auto spad = Bandwidth::limited(opts.scratchpad_bandwidth);

  ManyKernelReport rep;
  std::vector<std::uint64_t> avail(nc, 0);
  std::vector<std::vector<cost::LaneJob>> lanes(nc);
  std::vector<std::pair<std::size_t, std::size_t>> where;  // kernel -> (cluster, lane slot)

  for (std::size_t i = 0; i < queue.size(); ++i) {
    const auto& spec = queue[i];
    spec.validate();
    std::size_t pick = 0;
    std::uint64_t pick_finish = UINT64_MAX;
    cost::CostBreakdown pick_cost;
    for (std::size_t c = 0; c < nc; ++c) {
      // Predict with the bandwidth split among the clusters still busy when this one frees up.
      auto share = bandwidth;
      if (!bandwidth.unlimited) {
        std::size_t busy = 1;
        for (std::size_t o = 0; o < nc; ++o)
          if (o != c && avail[o] > avail[c]) ++busy;
        share = Bandwidth::limited(bandwidth.bytes_per_second / static_cast<double>(busy));
      }
      const auto& cl = config.clusters[c];
      const auto ccf = cost::best_layout(cl, spec, share, opts);
      const auto b = cost::runtime(cl, spec, ccf, share, config.energy, opts);
      const auto finish = avail[c] + b.runtime_cycles;
      if (finish < pick_finish) {
        pick = c;
        pick_finish = finish;
        pick_cost = b;
      }
    }
    avail[pick] = pick_finish;
    where.emplace_back(pick, lanes[pick].size());
    lanes[pick].push_back(cost::LaneJob{
        pick_cost.compute_cycles, static_cast<double>(pick_cost.traffic_bytes),
        cost::transfer_cycles(static_cast<double>(pick_cost.conversion_bytes), spad, config.memory.frequency)});

    KernelPlacement p;
    p.kernel = i;
    p.id = spec.id;
    p.cluster = pick;
    p.ccf = pick_cost.ccf;
    p.compute_cycles = pick_cost.compute_cycles;
    p.traffic_bytes = pick_cost.traffic_bytes;
    rep.placements.push_back(std::move(p));
  }

  const auto timing = cost::simulate_lanes(lanes, bandwidth, config.memory.frequency);
  for (std::size_t i = 0; i < rep.placements.size(); ++i) {
    const auto& t = timing[where[i].first][where[i].second];
    rep.placements[i].start = t.start;
    rep.placements[i].end = t.end;
    rep.total_cycles = std::max(rep.total_cycles, t.end);
  }
  return rep;
}

std::uint64_t serial_cycles(const std::vector<KernelSpec>& queue, const AespaConfig& config,
                            const Bandwidth& bandwidth, const PlanOptions& options) {
  const auto opts = detail::effective_options(options, config);
  std::uint64_t total = 0;
  for (const auto& spec : queue) {
    std::uint64_t best = UINT64_MAX;
    for (const auto& cl : config.clusters) {
      const auto ccf = cost::best_layout(cl, spec, bandwidth, opts);
      best = std::min(best, cost::runtime(cl, spec, ccf, bandwidth, config.energy, opts).runtime_cycles);
    }
    total += best;
  }
  return total;
}

}  // namespace aespa::sched
