#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "aespa/kernel_spec.hpp"

namespace aespa::workloads {

struct WorkloadEntry {
  std::string name;
  std::string application;
  KernelSpec spec;
};

/// The nine-workload evaluation suite (HPC, DNN and GNN kernels).
std::vector<WorkloadEntry> builtin_suite();
const WorkloadEntry& find_builtin(const std::string& name);

/// Uniform-random spec; with `materialize` the operands are generated as
/// well (A from `seed`, B from `seed + 1`).
WorkloadEntry synth_spec(Index M, Index K, Index N, double d_a, double d_b, std::uint64_t seed, bool materialize);

struct MtxMatrix {
  StoredMatrix matrix;  // UMCK
  double density = 0.0;
};

/// Reads a MatrixMarket coordinate file (real, integer or pattern; general
/// or symmetric). Duplicate coordinates and out-of-range indices are
/// rejected; explicit zeros are dropped.
MtxMatrix read_mtx(std::istream& in, const std::string& source = "<stream>");
MtxMatrix load_mtx(const std::string& path);
/// Writes `%%MatrixMarket matrix coordinate real general`, 1-based, row-major entry order.
void write_mtx(std::ostream& out, const StoredMatrix& m);
void save_mtx(const std::string& path, const StoredMatrix& m);

// --- spec files ----------------------------------------------------------------
// CSV with header `id,M,K,N,d_A,d_B,ccf_A,ccf_B[,application]`; '#' starts a comment line.

std::vector<WorkloadEntry> read_spec_file(std::istream& in, const std::string& source = "<stream>");
std::vector<WorkloadEntry> load_spec_file(const std::string& path);
void write_spec_file(std::ostream& out, const std::vector<WorkloadEntry>& entries);

}  // namespace aespa::workloads
