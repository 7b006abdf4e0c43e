#pragma once

#include <string_view>

#include <fmt/format.h>

#include "aespa/kernels.hpp"

namespace aespa::kernels::detail {

inline void require_layout(const StoredMatrix& m, std::string_view tag, const char* kernel) {
  if (m.ccf() != parse_ccf(tag))
    throw InputError(fmt::format("{}: operand {} must be {}, got {}", kernel, role_name(parse_ccf(tag).role()),
                                 tag, m.ccf().to_string()));
}

inline void require_shapes(const StoredMatrix& a, const StoredMatrix& b, const char* kernel) {
  if (a.role() != Role::A || b.role() != Role::B)
    throw InputError(fmt::format("{}: operands must be (A, B)", kernel));
  if (a.cols() != b.rows())
    throw InputError(fmt::format("{}: shape mismatch {}x{} * {}x{}", kernel, a.rows(), a.cols(), b.rows(), b.cols()));
  a.validate();
  b.validate();
}

/// Operand views with the problem extents; the output buffer is row-major M x N.
struct Problem {
  Index M, K, N;
  std::span<const Index> a_pos, a_crd, b_pos, b_crd;
  std::span<const double> a_val, b_val;

  Problem(const StoredMatrix& a, const StoredMatrix& b)
      : M(a.rows()), K(a.cols()), N(b.cols()),
        a_pos(a.pos()), a_crd(a.crd()), b_pos(b.pos()), b_crd(b.crd()),
        a_val(a.values()), b_val(b.values()) {}
};

inline KernelResult finish(Index M, Index N, std::vector<double> out, const KernelCounters& c) {
  return KernelResult{StoredMatrix::dense(M, N, canonical_dense(Role::Output), std::move(out)), c};
}

enum class EieCase { BCompressed, ACompressed };

inline EieCase eie_case(const StoredMatrix& a, const StoredMatrix& b) {
  if (a.ccf() == parse_ccf("UMUK") && b.ccf() == parse_ccf("UNCK")) return EieCase::BCompressed;
  if (a.ccf() == parse_ccf("UMCK") && b.ccf() == parse_ccf("UKUN")) return EieCase::ACompressed;
  throw InputError(fmt::format("spmm_eie: needs exactly one operand compressed along K, (UMUK,UNCK) or "
                               "(UMCK,UKUN); got ({},{})",
                               a.ccf().to_string(), b.ccf().to_string()));
}

}  // namespace aespa::kernels::detail
