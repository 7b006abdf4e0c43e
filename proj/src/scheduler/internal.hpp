#pragma once

#include <vector>

#include "aespa/scheduler.hpp"

namespace aespa::sched::detail {

// M/N coordinates of a plan index rows of A and columns of B sorted by
// decreasing nonzero count when operands are attached, so the region at the
// low end of a cut gets the densest rows.
struct OperandView {
  bool measured = false;
  StoredMatrix a_rows;  // A as UMCK, rows already permuted
  StoredMatrix b_cols;  // B as UNCK, columns already permuted
  std::vector<Index> row_of;  // plan row -> original row of A
  std::vector<Index> col_of;  // plan column -> original column of B

  static OperandView of(const KernelSpec& spec);
  /// Sub-spec for a region: extents of the box, densities inherited or measured.
  [[nodiscard]] KernelSpec region_spec(const KernelSpec& spec, const Region& r) const;
};

/// Per-cluster totals over the regions it holds.
struct ClusterLoad {
  std::uint64_t compute_cycles = 0;
  double bytes = 0.0;
  double conversion_bytes = 0.0;
  double loop_work = 0.0;
  double effectual_macs = 0.0;
};

struct Totals {
  std::uint64_t makespan = 0;
  double energy = 0.0;
  double edp = 0.0;
};

std::uint64_t merge_adds(const KernelSpec& spec, int num_k_partitions);

/// Makespan and energy of a set of concurrently started cluster loads.
/// `memory_done` (optional) receives each cluster's memory completion cycle.
Totals score(const std::vector<ClusterLoad>& loads, const AespaConfig& config, const Bandwidth& bandwidth,
             const cost::CostOptions& options, std::uint64_t merge, double merge_work,
             std::vector<std::uint64_t>* memory_done = nullptr);

cost::CostOptions effective_options(const PlanOptions& options, const AespaConfig& config);

}  // namespace aespa::sched::detail
