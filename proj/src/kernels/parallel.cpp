#include <algorithm>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "common.hpp"

namespace aespa::kernels {

using detail::Problem;

namespace {

using u64 = std::uint64_t;

int thread_count() {
#ifdef _OPENMP
  return omp_get_max_threads();
#else
  return 1;
#endif
}

}  // namespace

KernelResult run_dense_gemm(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UMUK", "dense_gemm");
  detail::require_layout(b, "UKUN", "dense_gemm");
  detail::require_shapes(a, b, "dense_gemm");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
#pragma omp parallel for schedule(static)
  for (Index m = 0; m < p.M; ++m)
    for (Index n = 0; n < p.N; ++n) {
      double acc = 0.0;
      for (Index k = 0; k < p.K; ++k) acc += p.a_val[m * p.K + k] * p.b_val[k * p.N + n];
      out[m * p.N + n] = acc;
    }
  KernelCounters c;
  c.loop_iterations = c.macs = static_cast<u64>(p.M * p.K * p.N);
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spmm_eie(const StoredMatrix& a, const StoredMatrix& b) {
  const auto which = detail::eie_case(a, b);
  detail::require_shapes(a, b, "spmm_eie");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  u64 iters = 0;
  if (which == detail::EieCase::BCompressed) {
#pragma omp parallel for schedule(static) reduction(+ : iters)
    for (Index m = 0; m < p.M; ++m)
      for (Index n = 0; n < p.N; ++n) {
        double acc = 0.0;
        for (Index q = p.b_pos[n]; q < p.b_pos[n + 1]; ++q) acc += p.a_val[m * p.K + p.b_crd[q]] * p.b_val[q];
        iters += static_cast<u64>(p.b_pos[n + 1] - p.b_pos[n]);
        out[m * p.N + n] = acc;
      }
  } else {
#pragma omp parallel for schedule(dynamic, 16) reduction(+ : iters)
    for (Index m = 0; m < p.M; ++m)
      for (Index q = p.a_pos[m]; q < p.a_pos[m + 1]; ++q) {
        const Index k = p.a_crd[q];
        for (Index n = 0; n < p.N; ++n) out[m * p.N + n] += p.a_val[q] * p.b_val[k * p.N + n];
        iters += static_cast<u64>(p.N);
      }
  }
  KernelCounters c;
  c.loop_iterations = c.macs = iters;
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spgemm_inner(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UMCK", "spgemm_inner");
  detail::require_layout(b, "UNCK", "spgemm_inner");
  detail::require_shapes(a, b, "spgemm_inner");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  u64 iters = 0;
  u64 macs = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : iters, macs)
  for (Index m = 0; m < p.M; ++m)
    for (Index n = 0; n < p.N; ++n) {
      Index qa = p.a_pos[m];
      Index qb = p.b_pos[n];
      double acc = 0.0;
      while (qa < p.a_pos[m + 1] && qb < p.b_pos[n + 1]) {
        const Index ka = p.a_crd[qa];
        const Index kb = p.b_crd[qb];
        ++iters;
        if (ka == kb) {
          acc += p.a_val[qa] * p.b_val[qb];
          ++macs;
        }
        qa += ka <= kb;
        qb += kb <= ka;
      }
      out[m * p.N + n] = acc;
    }
  KernelCounters c;
  c.loop_iterations = c.index_comparisons = iters;
  c.macs = macs;
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spgemm_outer(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UKCM", "spgemm_outer");
  detail::require_layout(b, "UKCN", "spgemm_outer");
  detail::require_shapes(a, b, "spgemm_outer");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  u64 iters = 0;
  // Each block owns a band of output rows and walks every k, so partial
  // products land in the same order as the serial k loop.
  const Index blocks = std::min<Index>(p.M, 4 * static_cast<Index>(thread_count()));
#pragma omp parallel for schedule(dynamic, 1) reduction(+ : iters)
  for (Index blk = 0; blk < blocks; ++blk) {
    const Index m_lo = p.M * blk / blocks;
    const Index m_hi = p.M * (blk + 1) / blocks;
    for (Index k = 0; k < p.K; ++k) {
      const auto col_begin = p.a_crd.begin() + p.a_pos[k];
      const auto col_end = p.a_crd.begin() + p.a_pos[k + 1];
      const auto first = std::lower_bound(col_begin, col_end, m_lo);
      const auto last = std::lower_bound(first, col_end, m_hi);
      for (auto it = first; it != last; ++it) {
        const Index qa = it - p.a_crd.begin();
        const Index m = *it;
        for (Index qb = p.b_pos[k]; qb < p.b_pos[k + 1]; ++qb)
          out[m * p.N + p.b_crd[qb]] += p.a_val[qa] * p.b_val[qb];
        iters += static_cast<u64>(p.b_pos[k + 1] - p.b_pos[k]);
      }
    }
  }
  KernelCounters c;
  c.loop_iterations = c.macs = iters;
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spgemm_gustavson(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UKCM", "spgemm_gustavson");
  detail::require_layout(b, "UNCK", "spgemm_gustavson");
  detail::require_shapes(a, b, "spgemm_gustavson");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  u64 iters = 0;
#pragma omp parallel for schedule(dynamic, 8) reduction(+ : iters)
  for (Index n = 0; n < p.N; ++n)
    for (Index qb = p.b_pos[n]; qb < p.b_pos[n + 1]; ++qb) {
      const Index k = p.b_crd[qb];
      for (Index qa = p.a_pos[k]; qa < p.a_pos[k + 1]; ++qa)
        out[p.a_crd[qa] * p.N + n] += p.a_val[qa] * p.b_val[qb];
      iters += static_cast<u64>(p.a_pos[k + 1] - p.a_pos[k]);
    }
  KernelCounters c;
  c.loop_iterations = c.macs = iters;
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run(KernelKind kind, const StoredMatrix& a, const StoredMatrix& b) {
  switch (kind) {
    case KernelKind::DenseGemm: return run_dense_gemm(a, b);
    case KernelKind::SpmmEie: return run_spmm_eie(a, b);
    case KernelKind::SpgemmInner: return run_spgemm_inner(a, b);
    case KernelKind::SpgemmOuter: return run_spgemm_outer(a, b);
    case KernelKind::SpgemmGustavson: return run_spgemm_gustavson(a, b);
  }
  throw InputError("unknown kernel kind");
}

}  // namespace aespa::kernels
