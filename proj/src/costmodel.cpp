#include "aespa/costmodel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include <fmt/format.h>

namespace aespa::cost {

const char* dataflow_name(DataflowKind k) {
  switch (k) {
    case DataflowKind::TpuLike: return "TpuLike";
    case DataflowKind::EieLike: return "EieLike";
    case DataflowKind::ExTensorLike: return "ExTensorLike";
    case DataflowKind::OuterSpaceLike: return "OuterSpaceLike";
    case DataflowKind::MatRaptorLike: return "MatRaptorLike";
    case DataflowKind::HybridLike: return "HybridLike";
  }
  return "?";
}

DataflowKind parse_dataflow(std::string_view name) {
  for (auto k : kAllDataflows)
    if (name == dataflow_name(k)) return k;
  throw InputError(fmt::format("unknown dataflow '{}'", name));
}

namespace {

CcfPair pair(const char* a, const char* b) { return CcfPair{parse_ccf(a), parse_ccf(b)}; }

}  // namespace

std::vector<CcfPair> supported_ccfs(DataflowKind kind) {
  switch (kind) {
    case DataflowKind::TpuLike: return {pair("UMUK", "UKUN")};
    case DataflowKind::EieLike: return {pair("UMCK", "UKUN"), pair("UMUK", "UNCK")};
    case DataflowKind::ExTensorLike: return {pair("UMCK", "UNCK")};
    case DataflowKind::OuterSpaceLike: return {pair("UKCM", "UKCN")};
    case DataflowKind::MatRaptorLike: return {pair("UKCM", "UNCK")};
    case DataflowKind::HybridLike: {
      std::vector<CcfPair> all;
      for (auto k : {DataflowKind::TpuLike, DataflowKind::EieLike, DataflowKind::ExTensorLike}) {
        auto s = supported_ccfs(k);
        all.insert(all.end(), s.begin(), s.end());
      }
      return all;
    }
  }
  return {};
}

bool supports(DataflowKind kind, const CcfPair& p) {
  const auto s = supported_ccfs(kind);
  return std::find(s.begin(), s.end(), p) != s.end();
}

DataflowKind native_dataflow(const CcfPair& p) {
  for (auto k : kAllDataflows)
    if (k != DataflowKind::HybridLike && supports(k, p)) return k;
  throw UnsupportedCcf(fmt::format("no dataflow computes on ({})", p.to_string()));
}

Bandwidth Bandwidth::limited(double bps) {
  if (!(bps > 0.0) || !std::isfinite(bps)) throw InputError(fmt::format("bandwidth {} must be positive", bps));
  return Bandwidth{bps, false};
}

std::string Bandwidth::to_string() const { return unlimited ? "unlimited" : fmt::format("{}", bytes_per_second); }

Bandwidth parse_bandwidth(std::string_view text) {
  if (text == "unlimited" || text == "inf") return Bandwidth::infinite();
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end) throw InputError(fmt::format("bad bandwidth '{}'", text));
  return Bandwidth::limited(v);
}

// ---------------------------------------------------------------------------

namespace {

// Quotients like 8250000.000000001 come from density products; do not let
// representation error add a cycle.
std::uint64_t ceil_count(double x) {
  if (x <= 0.0) return 0;
  const double c = std::ceil(x - 1e-9 * std::max(1.0, x));
  return static_cast<std::uint64_t>(std::max(1.0, c));
}

void require_supported(DataflowKind kind, const CcfPair& p) {
  if (!supports(kind, p))
    throw UnsupportedCcf(fmt::format("{} does not compute on ({})", dataflow_name(kind), p.to_string()));
}

}  // namespace

std::int64_t parallel_bound(DataflowKind kind, const KernelSpec& spec, const CcfPair& p) {
  require_supported(kind, p);
  switch (kind) {
    case DataflowKind::TpuLike: return spec.M * spec.N;
    case DataflowKind::EieLike: return p.a.compressed() ? spec.M : spec.N;
    case DataflowKind::ExTensorLike: return std::max(spec.M, spec.N);
    case DataflowKind::OuterSpaceLike: return spec.K;
    case DataflowKind::MatRaptorLike: return spec.N;
    case DataflowKind::HybridLike: return parallel_bound(native_dataflow(p), spec, p);
  }
  return 1;
}

std::int64_t usable_pes(const ClusterConfig& cluster, const KernelSpec& spec, const CcfPair& p) {
  return std::min(cluster.pe_count, parallel_bound(cluster.dataflow, spec, p));
}

double loop_work(const KernelSpec& spec, const CcfPair& p) {
  double w = static_cast<double>(spec.M) * static_cast<double>(spec.K) * static_cast<double>(spec.N);
  if (p.a.compressed()) w *= spec.d_a;
  if (p.b.compressed()) w *= spec.d_b;
  return w;
}

double effectual_macs(const KernelSpec& spec) {
  return static_cast<double>(spec.M) * static_cast<double>(spec.K) * static_cast<double>(spec.N) * spec.d_a *
         spec.d_b;
}

std::uint64_t compute_cycles(const ClusterConfig& cluster, const KernelSpec& spec, const CcfPair& p) {
  const auto pes = usable_pes(cluster, spec, p);
  return ceil_count(loop_work(spec, p) / static_cast<double>(pes));
}

std::uint64_t compute_cycles(const ClusterConfig& cluster, const KernelSpec& spec) {
  return compute_cycles(cluster, spec, spec.ccf);
}

std::uint64_t expected_nnz(Index rows, Index cols, double density) {
  return static_cast<std::uint64_t>(std::llround(static_cast<double>(rows) * static_cast<double>(cols) * density));
}

std::uint64_t operand_bytes(Role role, Index rows, Index cols, double density, const CcfDescriptor& ccf,
                            std::uint64_t value_bytes, std::uint64_t index_bytes) {
  const auto r = static_cast<std::uint64_t>(rows);
  const auto c = static_cast<std::uint64_t>(cols);
  if (!ccf.compressed()) return r * c * value_bytes;
  const auto outer = ccf.outer == row_dim(role) ? r : c;
  return expected_nnz(rows, cols, density) * (value_bytes + index_bytes) + (outer + 1) * index_bytes;
}

std::uint64_t traffic_bytes(const KernelSpec& spec, const CcfPair& p, double refetch_factor) {
  const double a = static_cast<double>(
      operand_bytes(Role::A, spec.M, spec.K, spec.d_a, p.a, spec.value_bytes, spec.index_bytes));
  const double b = static_cast<double>(
      operand_bytes(Role::B, spec.K, spec.N, spec.d_b, p.b, spec.value_bytes, spec.index_bytes));
  const auto out = static_cast<std::uint64_t>(spec.M) * static_cast<std::uint64_t>(spec.N) * spec.value_bytes;
  return static_cast<std::uint64_t>(std::llround((a + b) * refetch_factor)) + out;
}

std::uint64_t traffic_bytes(const KernelSpec& spec) { return traffic_bytes(spec, spec.ccf, 1.0); }

EnergyResult energy(const EnergyInputs& in, const EnergyParams& params) {
  EnergyResult r;
  r.energy = in.macs * params.e_mac + in.hbm_words * params.e_hbm_word + in.sram_words * params.e_sram_word +
             in.idle_pe_cycles * params.e_idle_pe_cycle;
  r.edp = r.energy * in.runtime_seconds;
  return r;
}

std::uint64_t transfer_cycles(double bytes, const Bandwidth& bandwidth, double frequency) {
  if (bandwidth.unlimited || bytes <= 0.0) return 0;
  return ceil_count(bytes * frequency / bandwidth.bytes_per_second);
}

void finalize(CostBreakdown& b, std::uint64_t memory_cycles, double frequency, const EnergyParams& params,
              const CostOptions& options) {
  b.memory_cycles = memory_cycles;
  b.runtime_cycles = std::max(b.compute_cycles, b.memory_cycles);
  const double capacity = static_cast<double>(b.pe_count) * static_cast<double>(b.runtime_cycles);
  b.effective_utilization = capacity > 0.0 ? std::min(1.0, b.effectual_macs / capacity) : 0.0;
  const auto word = static_cast<double>(options.word_bytes);
  b.hbm_words = static_cast<double>(b.traffic_bytes) / word;
  // Every fetched word is written into and read out of the global scratchpad once.
  b.sram_words = 2.0 * b.hbm_words + static_cast<double>(b.conversion_bytes) / word;
  b.idle_pe_cycles = std::max(0.0, capacity - b.loop_work);
  const auto e = energy(EnergyInputs{b.loop_work, b.hbm_words, b.sram_words, b.idle_pe_cycles,
                                     static_cast<double>(b.runtime_cycles) / frequency},
                        params);
  b.energy = e.energy;
  b.edp = e.edp;
}

CostBreakdown runtime(const ClusterConfig& cluster, const KernelSpec& spec, const CcfPair& p,
                      const Bandwidth& bandwidth, const EnergyParams& params, const CostOptions& options) {
  CostBreakdown b;
  b.dataflow = cluster.dataflow;
  b.ccf = p;
  b.pe_count = cluster.pe_count;
  b.usable_pes = usable_pes(cluster, spec, p);
  b.loop_work = loop_work(spec, p);
  b.effectual_macs = effectual_macs(spec);
  b.compute_cycles = compute_cycles(cluster, spec, p);
  b.traffic_bytes = traffic_bytes(spec, p, options.refetch_factor);
  std::uint64_t conversion_cycles = 0;
  if (options.charge_conversion) {
    auto charge = [&](Role role, Index rows, Index cols, double d, const CcfDescriptor& from,
                      const CcfDescriptor& to) {
      if (from == to) return;
      b.conversion_bytes += operand_bytes(role, rows, cols, d, from, spec.value_bytes, spec.index_bytes) +
                            operand_bytes(role, rows, cols, d, to, spec.value_bytes, spec.index_bytes);
    };
    charge(Role::A, spec.M, spec.K, spec.d_a, spec.ccf.a, p.a);
    charge(Role::B, spec.K, spec.N, spec.d_b, spec.ccf.b, p.b);
    conversion_cycles = transfer_cycles(static_cast<double>(b.conversion_bytes),
                                        Bandwidth::limited(options.scratchpad_bandwidth), cluster.frequency);
  }
  const auto mem = transfer_cycles(static_cast<double>(b.traffic_bytes), bandwidth, cluster.frequency);
  finalize(b, mem + conversion_cycles, cluster.frequency, params, options);
  return b;
}

CostBreakdown runtime(const ClusterConfig& cluster, const KernelSpec& spec, const Bandwidth& bandwidth,
                      const EnergyParams& params, const CostOptions& options) {
  return runtime(cluster, spec, spec.ccf, bandwidth, params, options);
}

CcfPair best_layout(const ClusterConfig& cluster, const KernelSpec& spec, const Bandwidth& bandwidth,
                    const CostOptions& options) {
  const auto candidates = supported_ccfs(cluster.dataflow);
  CcfPair best = candidates.front();
  std::uint64_t best_runtime = UINT64_MAX;
  std::uint64_t best_traffic = UINT64_MAX;
  for (const auto& p : candidates) {
    const auto c = runtime(cluster, spec, p, bandwidth, {}, options);
    if (c.runtime_cycles < best_runtime || (c.runtime_cycles == best_runtime && c.traffic_bytes < best_traffic)) {
      best = p;
      best_runtime = c.runtime_cycles;
      best_traffic = c.traffic_bytes;
    }
  }
  return best;
}

}  // namespace aespa::cost

namespace aespa::cost {

namespace {

std::uint64_t ceil_time(double t) {
  if (t <= 0.0) return 0;
  return static_cast<std::uint64_t>(std::ceil(t - 1e-9 * std::max(1.0, t)));
}

}  // namespace

std::vector<std::uint64_t> concurrent_transfer_cycles(const std::vector<double>& bytes, const Bandwidth& bandwidth,
                                                      double frequency) {
  std::vector<std::uint64_t> done(bytes.size(), 0);
  if (bandwidth.unlimited) return done;
  const double rate = bandwidth.bytes_per_second / frequency;  // bytes per cycle
  std::vector<std::size_t> order;
  for (std::size_t i = 0; i < bytes.size(); ++i)
    if (bytes[i] > 0.0) order.push_back(i);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return bytes[x] < bytes[y]; });
  double t = 0.0;
  double moved = 0.0;  // bytes delivered to each still-active transfer
  for (std::size_t r = 0; r < order.size(); ++r) {
    const auto active = static_cast<double>(order.size() - r);
    t += (bytes[order[r]] - moved) * active / rate;
    moved = bytes[order[r]];
    done[order[r]] = std::max<std::uint64_t>(1, ceil_time(t));
  }
  return done;
}

std::vector<std::vector<JobTiming>> simulate_lanes(const std::vector<std::vector<LaneJob>>& lanes,
                                                   const Bandwidth& bandwidth, double frequency) {
  struct State {
    std::size_t next = 0;  // index of the running job
    bool running = false;
    std::uint64_t start = 0;
    double remaining = 0.0;  // bytes left to move
    bool transferred = false;
    std::uint64_t memory_done = 0;
  };
  const double rate = bandwidth.unlimited ? 0.0 : bandwidth.bytes_per_second / frequency;
  std::vector<std::vector<JobTiming>> out(lanes.size());
  std::vector<State> st(lanes.size());

  auto begin_job = [&](std::size_t l, std::uint64_t at) {
    auto& s = st[l];
    if (s.next >= lanes[l].size()) {
      s.running = false;
      return;
    }
    const auto& job = lanes[l][s.next];
    s.running = true;
    s.start = at;
    s.remaining = bandwidth.unlimited ? 0.0 : job.bytes;
    s.transferred = s.remaining <= 0.0;
    s.memory_done = at + job.local_memory_cycles;
  };
  auto end_of = [&](std::size_t l) {
    const auto& s = st[l];
    return std::max(s.start + lanes[l][s.next].compute_cycles, s.memory_done);
  };

  double t = 0.0;
  for (std::size_t l = 0; l < lanes.size(); ++l) begin_job(l, 0);
  for (;;) {
    // Retire every job that is finished by now, starting successors at its end.
    bool progressed = true;
    while (progressed) {
      progressed = false;
      for (std::size_t l = 0; l < lanes.size(); ++l) {
        auto& s = st[l];
        if (!s.running || !s.transferred) continue;
        const auto e = end_of(l);
        if (static_cast<double>(e) > t) continue;
        out[l].push_back(JobTiming{s.start, s.memory_done, e});
        ++s.next;
        begin_job(l, e);
        progressed = true;
      }
    }

    std::size_t active = 0;
    bool any = false;
    for (const auto& s : st) {
      any = any || s.running;
      if (s.running && !s.transferred) ++active;
    }
    if (!any) break;

    double next = std::numeric_limits<double>::infinity();
    for (std::size_t l = 0; l < lanes.size(); ++l) {
      const auto& s = st[l];
      if (!s.running) continue;
      if (s.transferred)
        next = std::min(next, static_cast<double>(end_of(l)));
      else
        next = std::min(next, t + s.remaining * static_cast<double>(active) / rate);
    }
    const double moved = (next - t) * rate / static_cast<double>(std::max<std::size_t>(1, active));
    for (std::size_t l = 0; l < lanes.size(); ++l) {
      auto& s = st[l];
      if (!s.running || s.transferred) continue;
      if (t + s.remaining * static_cast<double>(active) / rate <= next) {
        s.remaining = 0.0;
        s.transferred = true;
        s.memory_done = std::max(s.start + 1, ceil_time(next)) + lanes[l][s.next].local_memory_cycles;
      } else {
        s.remaining -= moved;
      }
    }
    t = next;
  }
  return out;
}

}  // namespace aespa::cost
