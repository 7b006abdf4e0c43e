#include "aespa/kernel_spec.hpp"

#include <fmt/format.h>

namespace aespa {

void KernelSpec::validate() const {
  if (M < 1 || K < 1 || N < 1)
    throw InputError(fmt::format("kernel '{}': extents {}x{}x{} must be positive", id, M, K, N));
  auto check_density = [&](double d, const char* which) {
    if (!(d > 0.0 && d <= 1.0)) throw InputError(fmt::format("kernel '{}': {} = {} outside (0, 1]", id, which, d));
  };
  check_density(d_a, "d_A");
  check_density(d_b, "d_B");
  if (ccf.a.role() != Role::A || ccf.b.role() != Role::B)
    throw InputError(fmt::format("kernel '{}': layouts {} do not describe (A, B)", id, ccf.to_string()));
  if (value_bytes == 0 || index_bytes == 0) throw InputError(fmt::format("kernel '{}': zero word width", id));
  if ((a == nullptr) != (b == nullptr))
    throw InputError(fmt::format("kernel '{}': attach both operands or neither", id));
  if (a) {
    if (a->role() != Role::A || a->rows() != M || a->cols() != K)
      throw InputError(fmt::format("kernel '{}': attached A is not {}x{}", id, M, K));
    if (b->role() != Role::B || b->rows() != K || b->cols() != N)
      throw InputError(fmt::format("kernel '{}': attached B is not {}x{}", id, K, N));
  }
}

CcfPair default_delivery(double d_a, double d_b) {
  return CcfPair{parse_ccf(d_a < 1.0 ? "UMCK" : "UMUK"), parse_ccf(d_b < 1.0 ? "UNCK" : "UKUN")};
}

}  // namespace aespa
