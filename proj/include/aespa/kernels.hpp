#pragma once

// Functional matmul kernels for the five sub-accelerator dataflows. Each
// kernel follows the loop nest of the corresponding TACO-style kernel and
// counts what its innermost loop does, so the analytical cost model can be
// checked against exact trip counts.
//
// Two builds of every kernel exist: `kernels::serial` is the reference, and
// the functions directly in `kernels` split the outermost independent loop
// across OpenMP threads. Both accumulate every output element in the same
// order, so their outputs are bit-identical.

#include <cstdint>
#include <string_view>

#include "aespa/formats.hpp"

namespace aespa::kernels {

struct KernelCounters {
  std::uint64_t loop_iterations = 0;   ///< innermost-body executions
  std::uint64_t macs = 0;              ///< multiply-accumulates performed
  std::uint64_t index_comparisons = 0; ///< metadata compares (intersection steps)

  KernelCounters& operator+=(const KernelCounters& o) {
    loop_iterations += o.loop_iterations;
    macs += o.macs;
    index_comparisons += o.index_comparisons;
    return *this;
  }
  friend bool operator==(const KernelCounters&, const KernelCounters&) = default;
};

struct KernelResult {
  StoredMatrix output;  // dense UMUN, M x N
  KernelCounters counters;
};

enum class KernelKind : std::uint8_t { DenseGemm, SpmmEie, SpgemmInner, SpgemmOuter, SpgemmGustavson };

const char* kernel_name(KernelKind k);

/// Kernel able to consume the given operand layouts, if any.
/// (UMUK,UKUN) dense; (UMCK,UKUN)/(UMUK,UNCK) EIE; (UMCK,UNCK) inner;
/// (UKCM,UKCN) outer; (UKCM,UNCK) Gustavson.
bool kernel_for(const CcfPair& pair, KernelKind& out);

/// (UMUK, UKUN). loop_iterations = macs = M*K*N.
KernelResult run_dense_gemm(const StoredMatrix& a, const StoredMatrix& b);
/// (UMUK, UNCK) or (UMCK, UKUN). Iterates M x nnz(B) or nnz(A) x N.
KernelResult run_spmm_eie(const StoredMatrix& a, const StoredMatrix& b);
/// (UMCK, UNCK). Two-pointer intersection per output element.
KernelResult run_spgemm_inner(const StoredMatrix& a, const StoredMatrix& b);
/// (UKCM, UKCN). One rank-1 update per k.
KernelResult run_spgemm_outer(const StoredMatrix& a, const StoredMatrix& b);
/// (UKCM, UNCK). For each B column, stream the A columns its nonzeros select.
KernelResult run_spgemm_gustavson(const StoredMatrix& a, const StoredMatrix& b);

KernelResult run(KernelKind kind, const StoredMatrix& a, const StoredMatrix& b);

namespace serial {

KernelResult run_dense_gemm(const StoredMatrix& a, const StoredMatrix& b);
KernelResult run_spmm_eie(const StoredMatrix& a, const StoredMatrix& b);
KernelResult run_spgemm_inner(const StoredMatrix& a, const StoredMatrix& b);
KernelResult run_spgemm_outer(const StoredMatrix& a, const StoredMatrix& b);
KernelResult run_spgemm_gustavson(const StoredMatrix& a, const StoredMatrix& b);

KernelResult run(KernelKind kind, const StoredMatrix& a, const StoredMatrix& b);

}  // namespace serial

}  // namespace aespa::kernels
