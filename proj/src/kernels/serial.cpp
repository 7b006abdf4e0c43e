#include "common.hpp"

namespace aespa::kernels {

const char* kernel_name(KernelKind k) {
  switch (k) {
    case KernelKind::DenseGemm: return "dense_gemm";
    case KernelKind::SpmmEie: return "spmm_eie";
    case KernelKind::SpgemmInner: return "spgemm_inner";
    case KernelKind::SpgemmOuter: return "spgemm_outer";
    case KernelKind::SpgemmGustavson: return "spgemm_gustavson";
  }
  return "?";
}

bool kernel_for(const CcfPair& pair, KernelKind& out) {
  const std::string tag = pair.to_string();
  if (tag == "UMUK,UKUN") out = KernelKind::DenseGemm;
  else if (tag == "UMCK,UKUN" || tag == "UMUK,UNCK") out = KernelKind::SpmmEie;
  else if (tag == "UMCK,UNCK") out = KernelKind::SpgemmInner;
  else if (tag == "UKCM,UKCN") out = KernelKind::SpgemmOuter;
  else if (tag == "UKCM,UNCK") out = KernelKind::SpgemmGustavson;
  else return false;
  return true;
}

namespace serial {

using detail::Problem;

KernelResult run_dense_gemm(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UMUK", "dense_gemm");
  detail::require_layout(b, "UKUN", "dense_gemm");
  detail::require_shapes(a, b, "dense_gemm");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  KernelCounters c;
  for (Index m = 0; m < p.M; ++m)
    for (Index n = 0; n < p.N; ++n) {
      double acc = 0.0;
      for (Index k = 0; k < p.K; ++k) acc += p.a_val[m * p.K + k] * p.b_val[k * p.N + n];
      out[m * p.N + n] = acc;
    }
  c.loop_iterations = c.macs = static_cast<std::uint64_t>(p.M * p.K * p.N);
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spmm_eie(const StoredMatrix& a, const StoredMatrix& b) {
  const auto which = detail::eie_case(a, b);
  detail::require_shapes(a, b, "spmm_eie");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  KernelCounters c;
  if (which == detail::EieCase::BCompressed) {
    // A dense streamed row by row; each B column is a (row_id, value) list.
    for (Index m = 0; m < p.M; ++m)
      for (Index n = 0; n < p.N; ++n) {
        double acc = 0.0;
        for (Index q = p.b_pos[n]; q < p.b_pos[n + 1]; ++q) {
          acc += p.a_val[m * p.K + p.b_crd[q]] * p.b_val[q];
          ++c.loop_iterations;
        }
        out[m * p.N + n] = acc;
      }
  } else {
    for (Index m = 0; m < p.M; ++m)
      for (Index q = p.a_pos[m]; q < p.a_pos[m + 1]; ++q) {
        const Index k = p.a_crd[q];
        for (Index n = 0; n < p.N; ++n) {
          out[m * p.N + n] += p.a_val[q] * p.b_val[k * p.N + n];
          ++c.loop_iterations;
        }
      }
  }
  c.macs = c.loop_iterations;
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spgemm_inner(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UMCK", "spgemm_inner");
  detail::require_layout(b, "UNCK", "spgemm_inner");
  detail::require_shapes(a, b, "spgemm_inner");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  KernelCounters c;
  for (Index m = 0; m < p.M; ++m)
    for (Index n = 0; n < p.N; ++n) {
      Index qa = p.a_pos[m];
      Index qb = p.b_pos[n];
      double acc = 0.0;
      while (qa < p.a_pos[m + 1] && qb < p.b_pos[n + 1]) {
        const Index ka = p.a_crd[qa];
        const Index kb = p.b_crd[qb];
        ++c.loop_iterations;
        ++c.index_comparisons;
        if (ka == kb) {
          acc += p.a_val[qa] * p.b_val[qb];
          ++c.macs;
        }
        qa += ka <= kb;
        qb += kb <= ka;
      }
      out[m * p.N + n] = acc;
    }
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spgemm_outer(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UKCM", "spgemm_outer");
  detail::require_layout(b, "UKCN", "spgemm_outer");
  detail::require_shapes(a, b, "spgemm_outer");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  KernelCounters c;
  for (Index k = 0; k < p.K; ++k)
    for (Index qa = p.a_pos[k]; qa < p.a_pos[k + 1]; ++qa) {
      const Index m = p.a_crd[qa];
      for (Index qb = p.b_pos[k]; qb < p.b_pos[k + 1]; ++qb) {
        out[m * p.N + p.b_crd[qb]] += p.a_val[qa] * p.b_val[qb];
        ++c.loop_iterations;
      }
    }
  c.macs = c.loop_iterations;
  return detail::finish(p.M, p.N, std::move(out), c);
}

KernelResult run_spgemm_gustavson(const StoredMatrix& a, const StoredMatrix& b) {
  detail::require_layout(a, "UKCM", "spgemm_gustavson");
  detail::require_layout(b, "UNCK", "spgemm_gustavson");
  detail::require_shapes(a, b, "spgemm_gustavson");
  const Problem p(a, b);
  std::vector<double> out(static_cast<std::size_t>(p.M * p.N), 0.0);
  KernelCounters c;
  for (Index n = 0; n < p.N; ++n)
    for (Index qb = p.b_pos[n]; qb < p.b_pos[n + 1]; ++qb) {
      const Index k = p.b_crd[qb];
      for (Index qa = p.a_pos[k]; qa < p.a_pos[k + 1]; ++qa) {
        out[p.a_crd[qa] * p.N + n] += p.a_val[qa] * p.b_val[qb];
        ++c.loop_iterations;
      }
    }
  c.macs = c.loop_iterations;
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

}  // namespace serial
}  // namespace aespa::kernels
