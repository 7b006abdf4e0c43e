#pragma once

// Analytical cost model. Compute cycles come from the expected trip count of
// each dataflow's compute loop divided over the PEs its parallelism bound
// lets it use; memory cycles come from HBM traffic; the runtime is the
// roofline maximum of the two.

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "aespa/kernel_spec.hpp"

namespace aespa::cost {

enum class DataflowKind : std::uint8_t { TpuLike, EieLike, ExTensorLike, OuterSpaceLike, MatRaptorLike, HybridLike };

inline constexpr DataflowKind kAllDataflows[] = {DataflowKind::TpuLike,        DataflowKind::EieLike,
                                                 DataflowKind::ExTensorLike,   DataflowKind::OuterSpaceLike,
                                                 DataflowKind::MatRaptorLike,  DataflowKind::HybridLike};

const char* dataflow_name(DataflowKind k);
DataflowKind parse_dataflow(std::string_view name);

class UnsupportedCcf : public InputError {
 public:
  using InputError::InputError;
};

/// Operand layouts each dataflow computes on directly.
std::vector<CcfPair> supported_ccfs(DataflowKind kind);
bool supports(DataflowKind kind, const CcfPair& pair);

/// The single-dataflow class whose loop nest consumes `pair` (never HybridLike).
DataflowKind native_dataflow(const CcfPair& pair);

struct ClusterConfig {
  DataflowKind dataflow = DataflowKind::TpuLike;
  std::int64_t pe_count = 1;
  double frequency = 1e9;

  friend bool operator==(const ClusterConfig&, const ClusterConfig&) = default;
};

/// HBM bandwidth in bytes/second, or unlimited.
struct Bandwidth {
  double bytes_per_second = 0.0;
  bool unlimited = true;

  static Bandwidth limited(double bps);
  static Bandwidth infinite() { return {}; }
  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const Bandwidth&, const Bandwidth&) = default;
};

Bandwidth parse_bandwidth(std::string_view text);

struct EnergyParams {
  double e_mac = 1.0;
  double e_sram_word = 10.0;
  double e_hbm_word = 6400.0;
  double e_idle_pe_cycle = 0.05;

  friend bool operator==(const EnergyParams&, const EnergyParams&) = default;
};

struct CostOptions {
  double refetch_factor = 1.0;
  /// Charge format conversion when the evaluated layout differs from the
  /// delivered one: both layouts pass through the scratchpad once.
  bool charge_conversion = false;
  double scratchpad_bandwidth = 8.192e12;
  std::uint64_t word_bytes = 4;
};

/// Extent of the dimension (or product) that caps usable PEs for `pair` on `kind`.
std::int64_t parallel_bound(DataflowKind kind, const KernelSpec& spec, const CcfPair& pair);
std::int64_t usable_pes(const ClusterConfig& cluster, const KernelSpec& spec, const CcfPair& pair);

/// Expected compute-loop trip count: M*K*N scaled by the density of every compressed operand.
double loop_work(const KernelSpec& spec, const CcfPair& pair);
/// Expected nonzero products, M*K*N*d_A*d_B, independent of layout.
double effectual_macs(const KernelSpec& spec);

/// ceil(loop_work / usable_pes) for the spec's delivered layout.
std::uint64_t compute_cycles(const ClusterConfig& cluster, const KernelSpec& spec);
std::uint64_t compute_cycles(const ClusterConfig& cluster, const KernelSpec& spec, const CcfPair& pair);

/// Expected nonzeros of an operand block, rounded to the nearest integer.
std::uint64_t expected_nnz(Index rows, Index cols, double density);
std::uint64_t operand_bytes(Role role, Index rows, Index cols, double density, const CcfDescriptor& ccf,
                            std::uint64_t value_bytes, std::uint64_t index_bytes);

/// HBM bytes: both operands in their layouts plus the dense output, each moved once (times refetch on operands).
std::uint64_t traffic_bytes(const KernelSpec& spec);
std::uint64_t traffic_bytes(const KernelSpec& spec, const CcfPair& pair, double refetch_factor = 1.0);

struct EnergyInputs {
  double macs = 0.0;
  double hbm_words = 0.0;
  double sram_words = 0.0;
  double idle_pe_cycles = 0.0;
  double runtime_seconds = 0.0;
};

struct EnergyResult {
  double energy = 0.0;
  double edp = 0.0;
};

EnergyResult energy(const EnergyInputs& in, const EnergyParams& params);

struct CostBreakdown {
  DataflowKind dataflow = DataflowKind::TpuLike;
  CcfPair ccf{};
  std::int64_t pe_count = 0;
  std::int64_t usable_pes = 0;
  std::uint64_t compute_cycles = 0;
  std::uint64_t memory_cycles = 0;
  std::uint64_t runtime_cycles = 0;
  std::uint64_t traffic_bytes = 0;
  std::uint64_t conversion_bytes = 0;
  double loop_work = 0.0;       ///< MAC iterations executed
  double effectual_macs = 0.0;  ///< nonzero products among them
  double effective_utilization = 0.0;
  double hbm_words = 0.0;
  double sram_words = 0.0;
  double idle_pe_cycles = 0.0;
  double energy = 0.0;
  double edp = 0.0;
};

/// Roofline cost of running `spec` whole on `cluster` in layout `pair`.
CostBreakdown runtime(const ClusterConfig& cluster, const KernelSpec& spec, const CcfPair& pair,
                      const Bandwidth& bandwidth, const EnergyParams& params = {}, const CostOptions& options = {});
/// Same, using the spec's delivered layout.
CostBreakdown runtime(const ClusterConfig& cluster, const KernelSpec& spec, const Bandwidth& bandwidth,
                      const EnergyParams& params = {}, const CostOptions& options = {});

/// Fills memory/runtime/utilization/energy fields of `b` given its compute
/// cycles, traffic and an externally determined memory completion cycle.
void finalize(CostBreakdown& b, std::uint64_t memory_cycles, double frequency, const EnergyParams& params,
              const CostOptions& options = {});

/// Cycles to move `bytes` at `bandwidth` (0 when unlimited).
std::uint64_t transfer_cycles(double bytes, const Bandwidth& bandwidth, double frequency);

/// Memory completion cycle of transfers that all start at cycle 0 and split
/// the bandwidth equally among those still in flight.
std::vector<std::uint64_t> concurrent_transfer_cycles(const std::vector<double>& bytes, const Bandwidth& bandwidth,
                                                      double frequency);

struct LaneJob {
  std::uint64_t compute_cycles = 0;
  double bytes = 0.0;
  /// Memory-side cycles not drawn from HBM (scratchpad conversion), after the transfer.
  std::uint64_t local_memory_cycles = 0;
};

struct JobTiming {
  std::uint64_t start = 0;
  std::uint64_t memory_done = 0;
  std::uint64_t end = 0;
};

/// Each lane runs its jobs back to back from cycle 0; a job ends when both its
/// compute and its memory side are done. Lanes with a transfer in flight share
/// the bandwidth equally, re-split whenever a transfer starts or completes.
std::vector<std::vector<JobTiming>> simulate_lanes(const std::vector<std::vector<LaneJob>>& lanes,
                                                   const Bandwidth& bandwidth, double frequency);

/// Layout among supported_ccfs(cluster.dataflow) with the smallest standalone
/// runtime; ties go to less traffic, then to list order.
CcfPair best_layout(const ClusterConfig& cluster, const KernelSpec& spec, const Bandwidth& bandwidth,
                    const CostOptions& options = {});

}  // namespace aespa::cost
