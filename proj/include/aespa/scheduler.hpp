#pragma once

// Scheduling on a heterogeneous accelerator.
//
// Single-kernel scheduling cuts one matmul along M, N and K into regions,
// gives each region its own operand layout and cluster, and runs the
// clusters concurrently; the kernel finishes when the slowest cluster does,
// plus the merge of K-partial outputs. Many-kernel scheduling assigns whole
// kernels from a queue to clusters by earliest predicted finish.

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "aespa/archtemplate.hpp"
#include "aespa/costmodel.hpp"
#include "aespa/kernel_spec.hpp"
#include "aespa/kernels.hpp"
#include "aespa/workloads.hpp"

namespace aespa::sched {

using arch::AespaConfig;
using cost::Bandwidth;
using cost::CostBreakdown;

/// Half-open box [m0,m1) x [k0,k1) x [n0,n1) of the iteration space.
struct Region {
  Index m0 = 0, m1 = 0;
  Index k0 = 0, k1 = 0;
  Index n0 = 0, n1 = 0;

  [[nodiscard]] Index rows() const { return m1 - m0; }
  [[nodiscard]] Index depth() const { return k1 - k0; }
  [[nodiscard]] Index cols() const { return n1 - n0; }
  [[nodiscard]] bool empty() const { return rows() <= 0 || depth() <= 0 || cols() <= 0; }
  [[nodiscard]] double volume() const;
  [[nodiscard]] bool overlaps(const Region& o) const;

  friend bool operator==(const Region&, const Region&) = default;
};

struct Assignment {
  Region region;
  CcfPair ccf;
  std::size_t cluster = 0;  // index into AespaConfig::clusters

  friend bool operator==(const Assignment&, const Assignment&) = default;
};

struct PartitionPlan {
  std::optional<Index> m_cut;  // M0 = [0, m_cut), M1 = [m_cut, M)
  std::optional<Index> n_cut;
  std::optional<Index> k_cut;
  std::vector<Assignment> assignments;

  /// Distinct K ranges among the assignments.
  [[nodiscard]] int k_partitions() const;
  [[nodiscard]] bool merge_required() const { return k_partitions() > 1; }
};

/// Throws InputError if the regions do not tile M x K x N exactly, or
/// UnsupportedCcf if a cluster cannot compute its assigned layout.
void validate_plan(const PartitionPlan& plan, const KernelSpec& spec, const AespaConfig& config);

struct ScheduleReport {
  /// One entry per configured cluster; unused clusters have zero cycles.
  std::vector<CostBreakdown> per_cluster;
  std::uint64_t merge_cycles = 0;
  std::uint64_t makespan_cycles = 0;
  double effectual_macs = 0.0;
  double total_energy = 0.0;
  double edp = 0.0;
  double effective_utilization = 0.0;
};

enum class Objective { Makespan, Edp };
Objective parse_objective(std::string_view text);
const char* objective_name(Objective o);

struct PlanOptions {
  cost::CostOptions cost;
};

/// (num_k_partitions - 1) * M * N additions spread over every PE of the config.
std::uint64_t merge_cycles(const KernelSpec& spec, int num_k_partitions, const AespaConfig& config);

ScheduleReport evaluate_plan(const PartitionPlan& plan, const KernelSpec& spec, const AespaConfig& config,
                             const Bandwidth& bandwidth, const PlanOptions& options = {});

/// Runs every assignment with its functional kernel on the attached operands
/// and sums K-partials. Returns the dense (UMUN) product.
StoredMatrix execute_plan(const PartitionPlan& plan, const KernelSpec& spec);

/// Plan that gives the whole kernel to one cluster in the given layout.
PartitionPlan single_cluster_plan(const KernelSpec& spec, std::size_t cluster, const CcfPair& layout);

struct SearchOptions {
  /// Split points per dimension are extent * i / grid_divisions, i = 0..grid_divisions.
  int grid_divisions = 8;
  Objective objective = Objective::Makespan;
  PlanOptions plan;
};

struct SearchResult {
  PartitionPlan plan;
  ScheduleReport report;
  std::uint64_t candidates = 0;  // size of the plan space
};

/// Minimizes the objective over split grids x region-to-cluster assignments.
/// Each region runs in the layout best suited to its cluster. The no-split
/// single-cluster plans are part of the space, so the result never loses to them.
SearchResult search_single_kernel(const KernelSpec& spec, const AespaConfig& config, const Bandwidth& bandwidth,
                                  const SearchOptions& options = {});

/// Reference search without pruning or threading; kept for tests and benchmarks.
SearchResult search_single_kernel_exhaustive(const KernelSpec& spec, const AespaConfig& config,
                                             const Bandwidth& bandwidth, const SearchOptions& options = {});

// --- many kernels -----------------------------------------------------------

struct KernelPlacement {
  std::size_t kernel = 0;  // queue position
  std::string id;
  std::size_t cluster = 0;
  CcfPair ccf;
  std::uint64_t start = 0;
  std::uint64_t end = 0;
  std::uint64_t compute_cycles = 0;
  std::uint64_t traffic_bytes = 0;
};

struct ManyKernelReport {
  std::vector<KernelPlacement> placements;  // queue order
  std::uint64_t total_cycles = 0;
};

ManyKernelReport schedule_many(const std::vector<KernelSpec>& queue, const AespaConfig& config,
                               const Bandwidth& bandwidth, const PlanOptions& options = {});

/// Sum over the queue of each kernel's best whole-kernel runtime on any one
/// cluster of `config`, run one after another with the full bandwidth.
std::uint64_t serial_cycles(const std::vector<KernelSpec>& queue, const AespaConfig& config,
                            const Bandwidth& bandwidth, const PlanOptions& options = {});

// --- baselines and configuration search ------------------------------------------

struct ComparisonRow {
  std::string workload;
  std::string preset;
  std::uint64_t makespan_cycles = 0;
  double effective_utilization = 0.0;
  double energy = 0.0;
  double edp = 0.0;
  double speedup = 1.0;             // baseline makespan / makespan
  double energy_improvement = 1.0;  // baseline energy / energy
  double edp_improvement = 1.0;     // baseline EDP / EDP
  PartitionPlan plan;               // empty for geomean rows
};

struct ComparisonTable {
  std::string baseline;
  Bandwidth bandwidth;
  std::vector<ComparisonRow> rows;      // workload-major, presets in input order
  std::vector<ComparisonRow> geomeans;  // one per preset, workload = "geomean"
};

ComparisonTable compare_baselines(const std::vector<workloads::WorkloadEntry>& suite,
                                  const std::vector<AespaConfig>& presets, const Bandwidth& bandwidth,
                                  const std::string& baseline = "homog-eie", const SearchOptions& options = {});

struct ConfigSearchOptions {
  /// Area fractions are multiples of 1 / area_steps.
  int area_steps = 4;
  std::vector<cost::DataflowKind> kinds{cost::DataflowKind::TpuLike, cost::DataflowKind::EieLike,
                                        cost::DataflowKind::ExTensorLike, cost::DataflowKind::OuterSpaceLike};
  SearchOptions search;
};

/// Sweeps area mixes and returns the one with the lowest geomean searched
/// objective over `suite`, named aespa-searched and marked non-static.
AespaConfig search_config(const std::vector<workloads::WorkloadEntry>& suite, const arch::Calibration& calibration,
                          const Bandwidth& bandwidth, const ConfigSearchOptions& options = {});

/// Static presets come from the template; aespa-searched runs search_config
/// on the builtin suite at `bandwidth`.
AespaConfig resolve_preset(const std::string& name, const arch::Calibration& calibration, const Bandwidth& bandwidth,
                           const ConfigSearchOptions& options = {});

}  // namespace aespa::sched
