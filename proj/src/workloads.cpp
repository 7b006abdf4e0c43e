#include "aespa/workloads.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <tuple>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace aespa::workloads {

namespace {

WorkloadEntry entry(const char* name, const char* app, Index M, Index K, Index N, double d_a, double d_b) {
  WorkloadEntry e;
  e.name = name;
  e.application = app;
  e.spec.id = name;
  e.spec.M = M;
  e.spec.K = K;
  e.spec.N = N;
  e.spec.d_a = d_a;
  e.spec.d_b = d_b;
  e.spec.ccf = default_delivery(d_a, d_b);
  return e;
}

}  // namespace

std::vector<WorkloadEntry> builtin_suite() {
  // Extents with "k" suffixes expand as x1000; densities are the percentages / 100.
  return {
      entry("chem97ZtZ", "Stat Problem", 2500, 2500, 1200, 0.0011, 1.0),
      entry("journals", "Weighted Graph", 124, 124, 62, 0.785, 1.0),
      entry("m3plates", "Acoustics", 11000, 11000, 5500, 0.000054, 1.0),
      entry("synthetic_dense", "Varies", 5000, 5000, 2500, 1.0, 1.0),
      entry("bibd_81_3", "Combinatorial", 3200, 85000, 43000, 0.00093, 1.0),
      entry("speech", "Deep Learning", 7700, 2600, 1300, 0.05, 1.0),
      entry("gnmt", "Deep Learning", 1600, 1000, 36000, 0.5, 0.3),
      entry("transformer", "Deep Learning", 32000, 84, 1000, 0.5, 0.3),
      entry("citeseer", "GNN", 3300, 3300, 3700, 0.0011, 0.0085),
  };
}

const WorkloadEntry& find_builtin(const std::string& name) {
  static const auto suite = builtin_suite();
  for (const auto& e : suite)
    if (e.name == name) return e;
  throw InputError(fmt::format("unknown builtin workload '{}'", name));
}

WorkloadEntry synth_spec(Index M, Index K, Index N, double d_a, double d_b, std::uint64_t seed, bool materialize) {
  WorkloadEntry e;
  e.name = fmt::format("synth_{}x{}x{}_s{}", M, K, N, seed);
  e.application = "synthetic";
  e.spec.id = e.name;
  e.spec.M = M;
  e.spec.K = K;
  e.spec.N = N;
  e.spec.d_a = d_a;
  e.spec.d_b = d_b;
  e.spec.ccf = default_delivery(d_a, d_b);
  e.spec.validate();
  if (materialize) {
    e.spec.a = std::make_shared<const StoredMatrix>(gen_uniform_random(M, K, d_a, seed, Role::A));
    e.spec.b = std::make_shared<const StoredMatrix>(gen_uniform_random(K, N, d_b, seed + 1, Role::B));
  }
  return e;
}

// --- MatrixMarket ---------------------------------------------------------------

namespace {

template <typename T>
bool parse_token(std::istringstream& ss, T& out) {
  std::string tok;
  if (!(ss >> tok)) return false;
  const auto* end = tok.data() + tok.size();
  const auto [ptr, ec] = std::from_chars(tok.data(), end, out);
  return ec == std::errc{} && ptr == end;
}

std::string lower(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(), [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return s;
}

}  // namespace

MtxMatrix read_mtx(std::istream& in, const std::string& source) {
  auto fail = [&](int line, const std::string& what) -> void {
    throw InputError(fmt::format("{}:{}: {}", source, line, what));
  };
  std::string line;
  int line_no = 1;
  if (!std::getline(in, line)) fail(line_no, "empty file");
  std::istringstream header(line);
  std::string banner, object, format, field, symmetry;
  header >> banner >> object >> format >> field >> symmetry;
  if (banner != "%%MatrixMarket" || lower(object) != "matrix" || lower(format) != "coordinate")
    fail(line_no, "expected header '%%MatrixMarket matrix coordinate <field> <symmetry>'");
  field = lower(field);
  symmetry = lower(symmetry);
  if (field != "real" && field != "integer" && field != "pattern" && field != "double")
    fail(line_no, fmt::format("unsupported field '{}'", field));
  if (symmetry != "general" && symmetry != "symmetric")
    fail(line_no, fmt::format("unsupported symmetry '{}'", symmetry));
  const bool pattern = field == "pattern";

  // Size line, after comments.
  Index rows = 0, cols = 0, declared = 0;
  for (;;) {
    if (!std::getline(in, line)) fail(line_no, "missing size line");
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    if (!parse_token(ss, rows) || !parse_token(ss, cols) || !parse_token(ss, declared))
      fail(line_no, "size line must be '<rows> <cols> <entries>'");
    if (rows < 1 || cols < 1 || declared < 0) fail(line_no, "non-positive matrix size");
    break;
  }

  std::vector<std::tuple<Index, Index, double>> entries;
  entries.reserve(static_cast<std::size_t>(declared) * (symmetry == "symmetric" ? 2 : 1));
  Index read = 0;
  while (read < declared) {
    if (!std::getline(in, line)) fail(line_no, fmt::format("expected {} entries, found {}", declared, read));
    ++line_no;
    if (line.empty() || line[0] == '%') continue;
    std::istringstream ss(line);
    Index r = 0, c = 0;
    double v = 1.0;
    if (!parse_token(ss, r) || !parse_token(ss, c)) fail(line_no, "bad coordinate");
    if (!pattern && !parse_token(ss, v)) fail(line_no, "bad value");
    if (r < 1 || r > rows || c < 1 || c > cols)
      fail(line_no, fmt::format("index ({}, {}) outside {}x{}", r, c, rows, cols));
    entries.emplace_back(r - 1, c - 1, v);
    if (symmetry == "symmetric" && r != c) entries.emplace_back(c - 1, r - 1, v);
    ++read;
  }

  std::sort(entries.begin(), entries.end(),
            [](const auto& x, const auto& y) { return std::tie(std::get<0>(x), std::get<1>(x)) < std::tie(std::get<0>(y), std::get<1>(y)); });
  for (std::size_t i = 1; i < entries.size(); ++i)
    if (std::get<0>(entries[i]) == std::get<0>(entries[i - 1]) && std::get<1>(entries[i]) == std::get<1>(entries[i - 1]))
      throw InputError(fmt::format("{}: duplicate entry at ({}, {})", source, std::get<0>(entries[i]) + 1,
                                   std::get<1>(entries[i]) + 1));

  std::vector<Index> pos(static_cast<std::size_t>(rows + 1), 0);
  std::vector<Index> crd;
  std::vector<double> values;
  for (const auto& [r, c, v] : entries) {
    if (v == 0.0) continue;  // explicit zeros carry no work
    ++pos[r + 1];
    crd.push_back(c);
    values.push_back(v);
  }
  for (Index r = 0; r < rows; ++r) pos[r + 1] += pos[r];
  MtxMatrix out;
  out.matrix = StoredMatrix::compressed(rows, cols, parse_ccf("UMCK"), std::move(pos), std::move(crd), std::move(values));
  out.density = static_cast<double>(out.matrix.nnz()) / (static_cast<double>(rows) * static_cast<double>(cols));
  return out;
}

MtxMatrix load_mtx(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open '{}'", path));
  return read_mtx(in, path);
}

void write_mtx(std::ostream& out, const StoredMatrix& m) {
  const auto csr = convert(m, compressed_along(m.role(), row_dim(m.role())));
  const auto clean = normalize(csr);
  fmt::print(out, "%%MatrixMarket matrix coordinate real general\n");
  fmt::print(out, "{} {} {}\n", clean.rows(), clean.cols(), clean.nnz());
  const auto pos = clean.pos();
  const auto crd = clean.crd();
  const auto val = clean.values();
  for (Index r = 0; r < clean.rows(); ++r)
    for (Index p = pos[r]; p < pos[r + 1]; ++p) fmt::print(out, "{} {} {}\n", r + 1, crd[p] + 1, val[p]);
}

void save_mtx(const std::string& path, const StoredMatrix& m) {
  std::ofstream out(path);
  if (!out) throw InputError(fmt::format("cannot write '{}'", path));
  write_mtx(out, m);
}

// --- spec files --------------------------------------------------------------------

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    const auto b = cell.find_first_not_of(" \t\r");
    const auto e = cell.find_last_not_of(" \t\r");
    cells.push_back(b == std::string::npos ? std::string() : cell.substr(b, e - b + 1));
  }
  return cells;
}

}  // namespace

std::vector<WorkloadEntry> read_spec_file(std::istream& in, const std::string& source) {
  std::vector<WorkloadEntry> entries;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const auto cells = split_csv(line);
    auto fail = [&](const std::string& what) { throw InputError(fmt::format("{}:{}: {}", source, line_no, what)); };
    if (!header_seen) {
      if (cells.size() < 8 || cells[0] != "id" || cells[1] != "M" || cells[2] != "K" || cells[3] != "N")
        fail("expected header 'id,M,K,N,d_A,d_B,ccf_A,ccf_B[,application]'");
      header_seen = true;
      continue;
    }
    if (cells.size() != 8 && cells.size() != 9) fail(fmt::format("expected 8 or 9 columns, got {}", cells.size()));
    WorkloadEntry e;
    e.name = cells[0];
    e.application = cells.size() == 9 ? cells[8] : "";
    e.spec.id = cells[0];
    auto integer = [&](const std::string& s) {
      Index v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) fail(fmt::format("bad extent '{}'", s));
      return v;
    };
    auto real = [&](const std::string& s) {
      double v = 0;
      const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
      if (ec != std::errc{} || ptr != s.data() + s.size()) fail(fmt::format("bad density '{}'", s));
      return v;
    };
    e.spec.M = integer(cells[1]);
    e.spec.K = integer(cells[2]);
    e.spec.N = integer(cells[3]);
    e.spec.d_a = real(cells[4]);
    e.spec.d_b = real(cells[5]);
    try {
      e.spec.ccf = parse_ccf_pair(cells[6] + "," + cells[7]);
      e.spec.validate();
    } catch (const InputError& err) {
      fail(err.what());
    }
    entries.push_back(std::move(e));
  }
  if (!header_seen) throw InputError(fmt::format("{}: no header line", source));
  return entries;
}

std::vector<WorkloadEntry> load_spec_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open spec file '{}'", path));
  return read_spec_file(in, path);
}

void write_spec_file(std::ostream& out, const std::vector<WorkloadEntry>& entries) {
  fmt::print(out, "id,M,K,N,d_A,d_B,ccf_A,ccf_B,application\n");
  for (const auto& e : entries)
    fmt::print(out, "{},{},{},{},{},{},{},{},{}\n", e.spec.id, e.spec.M, e.spec.K, e.spec.N, e.spec.d_a, e.spec.d_b,
               e.spec.ccf.a.to_string(), e.spec.ccf.b.to_string(), e.application);
}

}  // namespace aespa::workloads
