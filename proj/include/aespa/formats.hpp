#pragma once

// Compute compression formats (CCF) and the stored-matrix representation
// shared by the kernels, the cost model and the workload loaders.

#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace aespa {

/// Raised for malformed user input (bad tags, unreadable files, bad ranges).
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a stored payload breaks a structural invariant.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Dim : std::uint8_t { M, K, N };
enum class Mode : std::uint8_t { Uncompressed, Compressed };

char dim_letter(Dim d);

/// Which operand a descriptor describes: A is MxK, B is KxN, the output MxN.
enum class Role : std::uint8_t { A, B, Output };

Dim row_dim(Role r);
Dim col_dim(Role r);
const char* role_name(Role r);

/// Per-dimension U/C designation with mode order, outer dimension first.
/// The outer level is always uncompressed; "UMCK" is CSR of A, "UKCM" CSC.
struct CcfDescriptor {
  Dim outer = Dim::M;
  Dim inner = Dim::K;
  Mode inner_mode = Mode::Uncompressed;

  [[nodiscard]] bool compressed() const { return inner_mode == Mode::Compressed; }
  [[nodiscard]] Role role() const;
  [[nodiscard]] std::string to_string() const;

  friend bool operator==(const CcfDescriptor&, const CcfDescriptor&) = default;
};

CcfDescriptor parse_ccf(std::string_view tag);

/// Row-major dense layout for a role (UMUK, UKUN, UMUN).
CcfDescriptor canonical_dense(Role r);

/// Compressed-inner layout with the given outer dimension, e.g. csr_like(Role::A, Dim::M) = UMCK.
CcfDescriptor compressed_along(Role r, Dim outer);

using Index = std::int64_t;

/// One matrix in dense or pos/crd/values layout. Dense payloads are stored
/// outer-major with respect to the descriptor, so a UNUK matrix is column-major.
class StoredMatrix {
 public:
  StoredMatrix() = default;

  static StoredMatrix dense(Index rows, Index cols, CcfDescriptor ccf, std::vector<double> values);
  static StoredMatrix compressed(Index rows, Index cols, CcfDescriptor ccf, std::vector<Index> pos,
                                 std::vector<Index> crd, std::vector<double> values);
  /// Builds without validation; used to load fixtures that may be corrupt.
  static StoredMatrix compressed_unchecked(Index rows, Index cols, CcfDescriptor ccf,
                                           std::vector<Index> pos, std::vector<Index> crd,
                                           std::vector<double> values);

  /// Throws FormatError describing the first broken invariant.
  void validate() const;

  [[nodiscard]] Index rows() const { return rows_; }
  [[nodiscard]] Index cols() const { return cols_; }
  [[nodiscard]] const CcfDescriptor& ccf() const { return ccf_; }
  [[nodiscard]] Role role() const { return ccf_.role(); }
  [[nodiscard]] bool is_dense() const { return !ccf_.compressed(); }
  [[nodiscard]] Index outer_extent() const;
  [[nodiscard]] Index inner_extent() const;
  /// Stored entries; for dense payloads this is rows*cols.
  [[nodiscard]] Index nnz() const { return static_cast<Index>(values_.size()); }

  [[nodiscard]] std::span<const Index> pos() const { return pos_; }
  [[nodiscard]] std::span<const Index> crd() const { return crd_; }
  [[nodiscard]] std::span<const double> values() const { return values_; }

  /// Logical element (row, col); O(log nnz-per-slice) for compressed payloads.
  [[nodiscard]] double at(Index row, Index col) const;

  /// Number of entries whose value is nonzero.
  [[nodiscard]] Index count_nonzeros() const;

 private:
  Index rows_ = 0;
  Index cols_ = 0;
  CcfDescriptor ccf_{};
  std::vector<Index> pos_;
  std::vector<Index> crd_;
  std::vector<double> values_;
};

StoredMatrix compress(const StoredMatrix& dense, const CcfDescriptor& target);
/// Row-major dense equivalent (canonical_dense of the matrix role).
StoredMatrix decompress(const StoredMatrix& m);
StoredMatrix convert(const StoredMatrix& m, const CcfDescriptor& target);
/// Drops explicit zeros from a compressed payload; dense input is returned as is.
StoredMatrix normalize(const StoredMatrix& m);

/// Dense row-major matrix in which each cell is nonzero with probability
/// `density`; nonzeros are integers in [1, 9]. Pure in its arguments.
StoredMatrix gen_uniform_random(Index rows, Index cols, double density, std::uint64_t seed,
                                Role role = Role::A);

std::uint64_t storage_bytes(const StoredMatrix& m, std::uint64_t value_bytes = 4,
                            std::uint64_t index_bytes = 4);

/// Elementwise equality of the logical matrices (any layouts, same role and shape).
bool same_values(const StoredMatrix& a, const StoredMatrix& b);

/// Operand pair of a matmul, e.g. (UMCK, UNCK) for inner-product SpGEMM.
struct CcfPair {
  CcfDescriptor a;
  CcfDescriptor b;

  [[nodiscard]] std::string to_string() const;
  friend bool operator==(const CcfPair&, const CcfPair&) = default;
};

CcfPair parse_ccf_pair(std::string_view text);  // "UMCK,UNCK"

}  // namespace aespa
