#include "aespa/formats.hpp"

#include <algorithm>
#include <random>

#include <fmt/format.h>

namespace aespa {

char dim_letter(Dim d) {
  switch (d) {
    case Dim::M: return 'M';
    case Dim::K: return 'K';
    case Dim::N: return 'N';
  }
  return '?';
}

Dim row_dim(Role r) {
  switch (r) {
    case Role::A: return Dim::M;
    case Role::B: return Dim::K;
    case Role::Output: return Dim::M;
  }
  return Dim::M;
}

Dim col_dim(Role r) {
  switch (r) {
    case Role::A: return Dim::K;
    case Role::B: return Dim::N;
    case Role::Output: return Dim::N;
  }
  return Dim::K;
}

const char* role_name(Role r) {
  switch (r) {
    case Role::A: return "A";
    case Role::B: return "B";
    case Role::Output: return "O";
  }
  return "?";
}

Role CcfDescriptor::role() const {
  auto has = [&](Dim d) { return outer == d || inner == d; };
  if (has(Dim::M) && has(Dim::K)) return Role::A;
  if (has(Dim::K) && has(Dim::N)) return Role::B;
  return Role::Output;
}

std::string CcfDescriptor::to_string() const {
  std::string s;
  s += 'U';
  s += dim_letter(outer);
  s += compressed() ? 'C' : 'U';
  s += dim_letter(inner);
  return s;
}

namespace {

Dim parse_dim(char c, std::string_view tag) {
  switch (c) {
    case 'M': return Dim::M;
    case 'K': return Dim::K;
    case 'N': return Dim::N;
    default: throw InputError(fmt::format("ccf '{}': '{}' is not a dimension letter", tag, c));
  }
}

Mode parse_mode(char c, std::string_view tag) {
  switch (c) {
    case 'U': return Mode::Uncompressed;
    case 'C': return Mode::Compressed;
    default: throw InputError(fmt::format("ccf '{}': '{}' is not a mode letter", tag, c));
  }
}

}  // namespace

CcfDescriptor parse_ccf(std::string_view tag) {
  if (tag.size() != 4) throw InputError(fmt::format("ccf '{}': expected 4 characters", tag));
  const Mode outer_mode = parse_mode(tag[0], tag);
  const Dim outer = parse_dim(tag[1], tag);
  const Mode inner_mode = parse_mode(tag[2], tag);
  const Dim inner = parse_dim(tag[3], tag);
  if (outer_mode != Mode::Uncompressed)
    throw InputError(fmt::format("ccf '{}': compressed outer level is not supported", tag));
  if (outer == inner) throw InputError(fmt::format("ccf '{}': repeated dimension", tag));
  return CcfDescriptor{outer, inner, inner_mode};
}

CcfDescriptor canonical_dense(Role r) {
  return CcfDescriptor{row_dim(r), col_dim(r), Mode::Uncompressed};
}

CcfDescriptor compressed_along(Role r, Dim outer) {
  const Dim inner = outer == row_dim(r) ? col_dim(r) : row_dim(r);
  return CcfDescriptor{outer, inner, Mode::Compressed};
}

std::string CcfPair::to_string() const { return a.to_string() + "," + b.to_string(); }

CcfPair parse_ccf_pair(std::string_view text) {
  const auto comma = text.find(',');
  if (comma == std::string_view::npos)
    throw InputError(fmt::format("ccf pair '{}': expected 'A,B'", text));
  CcfPair p{parse_ccf(text.substr(0, comma)), parse_ccf(text.substr(comma + 1))};
  if (p.a.role() != Role::A) throw InputError(fmt::format("ccf pair '{}': first tag must use M and K", text));
  if (p.b.role() != Role::B) throw InputError(fmt::format("ccf pair '{}': second tag must use K and N", text));
  return p;
}

// ---------------------------------------------------------------------------

namespace {

bool outer_is_row(const CcfDescriptor& ccf) { return ccf.outer == row_dim(ccf.role()); }

void check_shape(Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw InputError(fmt::format("matrix shape {}x{} must be positive", rows, cols));
}

}  // namespace

Index StoredMatrix::outer_extent() const { return outer_is_row(ccf_) ? rows_ : cols_; }
Index StoredMatrix::inner_extent() const { return outer_is_row(ccf_) ? cols_ : rows_; }

StoredMatrix StoredMatrix::dense(Index rows, Index cols, CcfDescriptor ccf, std::vector<double> values) {
  check_shape(rows, cols);
  if (ccf.compressed()) throw InputError("dense payload given a compressed descriptor " + ccf.to_string());
  if (static_cast<Index>(values.size()) != rows * cols)
    throw FormatError(fmt::format("dense payload has {} values, expected {}", values.size(), rows * cols));
  StoredMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.ccf_ = ccf;
  m.values_ = std::move(values);
  return m;
}

StoredMatrix StoredMatrix::compressed_unchecked(Index rows, Index cols, CcfDescriptor ccf,
                                                std::vector<Index> pos, std::vector<Index> crd,
                                                std::vector<double> values) {
  StoredMatrix m;
  m.rows_ = rows;
  m.cols_ = cols;
  m.ccf_ = ccf;
  m.pos_ = std::move(pos);
  m.crd_ = std::move(crd);
  m.values_ = std::move(values);
  return m;
}

StoredMatrix StoredMatrix::compressed(Index rows, Index cols, CcfDescriptor ccf, std::vector<Index> pos,
                                      std::vector<Index> crd, std::vector<double> values) {
  check_shape(rows, cols);
  if (!ccf.compressed()) throw InputError("compressed payload given a dense descriptor " + ccf.to_string());
  auto m = compressed_unchecked(rows, cols, ccf, std::move(pos), std::move(crd), std::move(values));
  m.validate();
  return m;
}

void StoredMatrix::validate() const {
  if (rows_ < 1 || cols_ < 1) throw FormatError(fmt::format("shape {}x{} is not positive", rows_, cols_));
  if (is_dense()) {
    if (static_cast<Index>(values_.size()) != rows_ * cols_)
      throw FormatError(fmt::format("dense payload has {} values, expected {}", values_.size(), rows_ * cols_));
    return;
  }
  const Index outer = outer_extent();
  const Index inner = inner_extent();
  if (static_cast<Index>(pos_.size()) != outer + 1)
    throw FormatError(fmt::format("pos has length {}, expected {}", pos_.size(), outer + 1));
  if (pos_.front() != 0) throw FormatError(fmt::format("pos[0] = {}, expected 0", pos_.front()));
  if (crd_.size() != values_.size())
    throw FormatError(fmt::format("crd has {} entries but values has {}", crd_.size(), values_.size()));
  if (pos_.back() != static_cast<Index>(crd_.size()))
    throw FormatError(fmt::format("pos[last] = {}, expected nnz = {}", pos_.back(), crd_.size()));
  for (Index o = 0; o < outer; ++o) {
    if (pos_[o] > pos_[o + 1]) throw FormatError(fmt::format("pos decreases at slice {}", o));
    for (Index p = pos_[o]; p < pos_[o + 1]; ++p) {
      if (crd_[p] < 0 || crd_[p] >= inner)
        throw FormatError(fmt::format("crd[{}] = {} out of range [0, {}) in slice {}", p, crd_[p], inner, o));
      if (p > pos_[o] && crd_[p] <= crd_[p - 1])
        throw FormatError(fmt::format("crd not strictly increasing at position {} in slice {}", p, o));
    }
  }
}

double StoredMatrix::at(Index row, Index col) const {
  const bool row_outer = outer_is_row(ccf_);
  const Index o = row_outer ? row : col;
  const Index i = row_outer ? col : row;
  if (is_dense()) return values_[o * inner_extent() + i];
  const auto first = crd_.begin() + pos_[o];
  const auto last = crd_.begin() + pos_[o + 1];
  const auto it = std::lower_bound(first, last, i);
  if (it == last || *it != i) return 0.0;
  return values_[it - crd_.begin()];
}

Index StoredMatrix::count_nonzeros() const {
  return static_cast<Index>(std::count_if(values_.begin(), values_.end(), [](double v) { return v != 0.0; }));
}

// ---------------------------------------------------------------------------

namespace {

void require_same_role(const StoredMatrix& m, const CcfDescriptor& target) {
  if (m.role() != target.role())
    throw InputError(fmt::format("target {} does not describe a {} operand (matrix is {})", target.to_string(),
                                 role_name(m.role()), m.ccf().to_string()));
}

}  // namespace

StoredMatrix compress(const StoredMatrix& dense, const CcfDescriptor& target) {
  if (!dense.is_dense()) throw InputError("compress expects a dense matrix, got " + dense.ccf().to_string());
  require_same_role(dense, target);
  const Index rows = dense.rows();
  const Index cols = dense.cols();
  const bool row_outer = outer_is_row(target);
  const Index outer = row_outer ? rows : cols;
  const Index inner = row_outer ? cols : rows;
  auto element = [&](Index o, Index i) { return row_outer ? dense.at(o, i) : dense.at(i, o); };

  if (!target.compressed()) {
    std::vector<double> values;
    values.reserve(static_cast<std::size_t>(rows * cols));
    for (Index o = 0; o < outer; ++o)
      for (Index i = 0; i < inner; ++i) values.push_back(element(o, i));
    return StoredMatrix::dense(rows, cols, target, std::move(values));
  }

  std::vector<Index> pos(static_cast<std::size_t>(outer + 1), 0);
  std::vector<Index> crd;
  std::vector<double> values;
  for (Index o = 0; o < outer; ++o) {
    for (Index i = 0; i < inner; ++i) {
      const double v = element(o, i);
      if (v != 0.0) {
        crd.push_back(i);
        values.push_back(v);
      }
    }
    pos[o + 1] = static_cast<Index>(crd.size());
  }
  return StoredMatrix::compressed(rows, cols, target, std::move(pos), std::move(crd), std::move(values));
}

StoredMatrix decompress(const StoredMatrix& m) {
  m.validate();
  const CcfDescriptor target = canonical_dense(m.role());
  const Index rows = m.rows();
  const Index cols = m.cols();
  std::vector<double> values(static_cast<std::size_t>(rows * cols), 0.0);
  if (m.is_dense()) {
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) values[r * cols + c] = m.at(r, c);
  } else {
    const bool row_outer = outer_is_row(m.ccf());
    const auto pos = m.pos();
    const auto crd = m.crd();
    const auto val = m.values();
    for (Index o = 0; o < m.outer_extent(); ++o) {
      for (Index p = pos[o]; p < pos[o + 1]; ++p) {
        const Index r = row_outer ? o : crd[p];
        const Index c = row_outer ? crd[p] : o;
        values[r * cols + c] = val[p];
      }
    }
  }
  return StoredMatrix::dense(rows, cols, target, std::move(values));
}

StoredMatrix convert(const StoredMatrix& m, const CcfDescriptor& target) {
  require_same_role(m, target);
  if (m.ccf() == target) return m;
  return compress(decompress(m), target);
}

StoredMatrix normalize(const StoredMatrix& m) {
  if (m.is_dense()) return m;
  const auto pos = m.pos();
  const auto crd = m.crd();
  const auto val = m.values();
  std::vector<Index> new_pos(pos.size(), 0);
  std::vector<Index> new_crd;
  std::vector<double> new_val;
  for (Index o = 0; o < m.outer_extent(); ++o) {
    for (Index p = pos[o]; p < pos[o + 1]; ++p) {
      if (val[p] != 0.0) {
        new_crd.push_back(crd[p]);
        new_val.push_back(val[p]);
      }
    }
    new_pos[o + 1] = static_cast<Index>(new_crd.size());
  }
  return StoredMatrix::compressed(m.rows(), m.cols(), m.ccf(), std::move(new_pos), std::move(new_crd),
                                  std::move(new_val));
}

StoredMatrix gen_uniform_random(Index rows, Index cols, double density, std::uint64_t seed, Role role) {
  check_shape(rows, cols);
  if (!(density > 0.0 && density <= 1.0))
    throw InputError(fmt::format("density {} outside (0, 1]", density));
  // Raw engine output only, so the stream is identical across standard libraries.
  std::mt19937_64 engine(seed);
  std::vector<double> values(static_cast<std::size_t>(rows * cols), 0.0);
  for (auto& v : values) {
    const double u = static_cast<double>(engine() >> 11) * 0x1.0p-53;
    const std::uint64_t draw = engine();
    if (u < density) v = static_cast<double>(1 + draw % 9);
  }
  return StoredMatrix::dense(rows, cols, canonical_dense(role), std::move(values));
}

std::uint64_t storage_bytes(const StoredMatrix& m, std::uint64_t value_bytes, std::uint64_t index_bytes) {
  const auto r = static_cast<std::uint64_t>(m.rows());
  const auto c = static_cast<std::uint64_t>(m.cols());
  if (m.is_dense()) return r * c * value_bytes;
  const auto nnz = static_cast<std::uint64_t>(m.nnz());
  const auto outer = static_cast<std::uint64_t>(m.outer_extent());
  return nnz * (value_bytes + index_bytes) + (outer + 1) * index_bytes;
}

bool same_values(const StoredMatrix& a, const StoredMatrix& b) {
  if (a.role() != b.role() || a.rows() != b.rows() || a.cols() != b.cols()) return false;
  const auto da = decompress(a);
  const auto db = decompress(b);
  const auto va = da.values();
  const auto vb = db.values();
  return std::equal(va.begin(), va.end(), vb.begin(), vb.end());
}

}  // namespace aespa
