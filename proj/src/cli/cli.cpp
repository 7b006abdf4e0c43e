#include "aespa/cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <fmt/ostream.h>

#include "aespa/archtemplate.hpp"
#include "aespa/kernels.hpp"
#include "aespa/report_io.hpp"
#include "aespa/scheduler.hpp"
#include "aespa/workloads.hpp"

namespace aespa::cli {

namespace {

using io::json;
using io::num;
using io::Table;

// --- fixtures -----------------------------------------------------------------

template <typename T>
std::vector<T> read_list(std::istringstream& ss, const std::string& source, const std::string& key) {
  std::vector<T> out;
  std::string tok;
  while (ss >> tok) {
    T v{};
    const auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (ec != std::errc{} || ptr != tok.data() + tok.size())
      throw InputError(fmt::format("{}: bad {} entry '{}'", source, key, tok));
    out.push_back(v);
  }
  return out;
}

// --- option groups ------------------------------------------------------------------

struct Common {
  std::string calibration;
  std::string format;
  std::string out;
  std::uint64_t seed = 1;
};

struct Source {
  std::vector<std::string> workloads;
  std::string spec_file;
  std::string mtx;
  std::string mtx_b;
  Index n = 0;
  double density_b = 1.0;
};

struct Machine {
  std::vector<std::string> presets;
  std::vector<std::string> configs;
  std::vector<std::string> bandwidths;
  std::string objective = "makespan";
  int grid = 8;
  bool charge_conversion = false;
};

void add_common(CLI::App* app, Common& c, const char* default_format) {
  app->add_option("--calibration", c.calibration, "Calibration file overriding the shipped constants")
      ->check(CLI::ExistingFile);
  app->add_option("--format", c.format, fmt::format("Output format: csv or json (default {})", default_format))
      ->check(CLI::IsMember({"csv", "json"}));
  app->add_option("--out", c.out, "Write output to this file instead of standard output");
  app->add_option("--seed", c.seed, "Seed for generated operands");
}

void add_source(CLI::App* app, Source& s) {
  app->add_option("--workload", s.workloads, "Builtin workload name (repeatable; 'all' for the whole suite)");
  app->add_option("--spec", s.spec_file, "CSV spec file: id,M,K,N,d_A,d_B,ccf_A,ccf_B[,application]")
      ->check(CLI::ExistingFile);
  app->add_option("--mtx", s.mtx, "MatrixMarket file used as operand A")->check(CLI::ExistingFile);
  app->add_option("--mtx-b", s.mtx_b, "MatrixMarket file used as operand B (default: generated)")
      ->check(CLI::ExistingFile);
  app->add_option("--n", s.n, "N extent of the generated B operand (default: K)");
  app->add_option("--density-b", s.density_b, "Density of the generated B operand");
}

void add_machine(CLI::App* app, Machine& m, bool many_bandwidths) {
  app->add_option("--preset", m.presets, "Preset name (repeatable)");
  app->add_option("--config", m.configs, "Accelerator config file (repeatable)")->check(CLI::ExistingFile);
  app->add_option("--bandwidth", m.bandwidths,
                  many_bandwidths ? "HBM bandwidth in bytes/s or 'unlimited' (repeatable)"
                                  : "HBM bandwidth in bytes/s or 'unlimited'");
  app->add_option("--objective", m.objective, "Search objective: makespan or edp")
      ->check(CLI::IsMember({"makespan", "edp"}));
  app->add_option("--grid", m.grid, "Split points per dimension = grid + 1")->check(CLI::PositiveNumber);
  app->add_flag("--charge-conversion", m.charge_conversion, "Charge format conversion through the scratchpad");
}

arch::Calibration calibration_of(const Common& c) {
  if (c.calibration.empty()) return arch::default_calibration();
  std::ifstream in(c.calibration);
  if (!in) throw InputError(fmt::format("cannot open '{}'", c.calibration));
  return arch::parse_calibration(in, c.calibration);
}

StoredMatrix as_role_b(const StoredMatrix& m) {
  const auto d = decompress(m);
  const auto v = d.values();
  return StoredMatrix::dense(m.rows(), m.cols(), canonical_dense(Role::B), std::vector<double>(v.begin(), v.end()));
}

std::vector<workloads::WorkloadEntry> load_source(const Source& s, const Common& c, bool default_all) {
  const int given = (!s.workloads.empty()) + (!s.spec_file.empty()) + (!s.mtx.empty());
  if (given > 1) throw InputError("give exactly one workload source: --workload, --spec or --mtx");
  if (!s.mtx_b.empty() && s.mtx.empty()) throw InputError("--mtx-b needs --mtx");
  if (given == 0) {
    if (!default_all) throw InputError("no workload given: use --workload, --spec or --mtx");
    return workloads::builtin_suite();
  }
  if (!s.spec_file.empty()) return workloads::load_spec_file(s.spec_file);
  if (!s.workloads.empty()) {
    std::vector<workloads::WorkloadEntry> out;
    for (const auto& w : s.workloads) {
      if (w == "all") {
        const auto all = workloads::builtin_suite();
        out.insert(out.end(), all.begin(), all.end());
      } else {
        out.push_back(workloads::find_builtin(w));
      }
    }
    return out;
  }
  const auto a = workloads::load_mtx(s.mtx);
  StoredMatrix b;
  if (!s.mtx_b.empty()) {
    b = as_role_b(workloads::load_mtx(s.mtx_b).matrix);
    if (b.rows() != a.matrix.cols())
      throw InputError(fmt::format("B has {} rows but A has {} columns", b.rows(), a.matrix.cols()));
  } else {
    const Index n = s.n > 0 ? s.n : a.matrix.cols();
    b = gen_uniform_random(a.matrix.cols(), n, s.density_b, c.seed, Role::B);
  }
  const double d_a = a.density;
  const double d_b = static_cast<double>(b.count_nonzeros()) / (static_cast<double>(b.rows()) * static_cast<double>(b.cols()));
  if (d_a <= 0.0 || d_b <= 0.0) throw InputError("operands must have at least one nonzero");
  workloads::WorkloadEntry e;
  e.name = std::filesystem::path(s.mtx).stem().string();
  e.application = "mtx";
  e.spec.id = e.name;
  e.spec.M = a.matrix.rows();
  e.spec.K = a.matrix.cols();
  e.spec.N = b.cols();
  e.spec.d_a = d_a;
  e.spec.d_b = d_b;
  e.spec.ccf = default_delivery(d_a, d_b);
  e.spec.a = std::make_shared<const StoredMatrix>(convert(a.matrix, e.spec.ccf.a));
  e.spec.b = std::make_shared<const StoredMatrix>(convert(b, e.spec.ccf.b));
  e.spec.validate();
  return {e};
}

sched::SearchOptions search_options(const Machine& m) {
  sched::SearchOptions o;
  o.grid_divisions = m.grid;
  o.objective = sched::parse_objective(m.objective);
  o.plan.cost.charge_conversion = m.charge_conversion;
  return o;
}

std::vector<cost::Bandwidth> bandwidths_of(const Machine& m, const arch::Calibration& cal,
                                           std::vector<std::string> defaults) {
  auto texts = m.bandwidths.empty() ? std::move(defaults) : m.bandwidths;
  std::vector<cost::Bandwidth> out;
  for (const auto& t : texts) out.push_back(t == "default" ? cost::Bandwidth::limited(cal.memory.hbm_bandwidth)
                                                           : cost::parse_bandwidth(t));
  return out;
}

std::vector<arch::AespaConfig> machines_of(const Machine& m, const arch::Calibration& cal,
                                           const cost::Bandwidth& bw, std::vector<std::string> default_presets) {
  sched::ConfigSearchOptions cso;
  cso.search = search_options(m);
  std::vector<arch::AespaConfig> out;
  const auto names = m.presets.empty() && m.configs.empty() ? std::move(default_presets) : m.presets;
  for (const auto& p : names) out.push_back(sched::resolve_preset(p, cal, bw, cso));
  for (const auto& path : m.configs) out.push_back(arch::load_config(path, cal));
  for (const auto& c : out) c.validate();
  return out;
}

const arch::AespaConfig& single_machine(const std::vector<arch::AespaConfig>& v) {
  if (v.size() != 1) throw InputError(fmt::format("expected exactly one --preset or --config, got {}", v.size()));
  return v.front();
}

class Sink {
 public:
  Sink(const std::string& path, std::ostream& fallback) : os_(&fallback) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path);
      if (!*file_) throw InputError(fmt::format("cannot write '{}'", path));
      os_ = file_.get();
    }
  }
  std::ostream& operator*() { return *os_; }

 private:
  std::unique_ptr<std::ofstream> file_;
  std::ostream* os_;
};

void emit(const Table& t, const Common& c, const std::string& default_format, std::ostream& out) {
  Sink sink(c.out, out);
  if ((c.format.empty() ? default_format : c.format) == "json")
    *sink << t.to_json().dump(2) << '\n';
  else
    t.write_csv(*sink);
}

void emit(const json& tree, const Table& t, const Common& c, const std::string& default_format, std::ostream& out) {
  Sink sink(c.out, out);
  if ((c.format.empty() ? default_format : c.format) == "json")
    *sink << tree.dump(2) << '\n';
  else
    t.write_csv(*sink);
}

std::vector<std::string> breakdown_cells(const std::string& workload, std::size_t index, const cost::CostBreakdown& b) {
  return {workload,
          std::to_string(index),
          cost::dataflow_name(b.dataflow),
          std::to_string(b.pe_count),
          b.ccf.a.to_string() + "/" + b.ccf.b.to_string(),
          std::to_string(b.compute_cycles),
          std::to_string(b.memory_cycles),
          std::to_string(b.runtime_cycles),
          num(b.effective_utilization),
          num(b.energy),
          num(b.edp)};
}

const std::vector<std::string> kBreakdownHeader{"workload", "cluster", "dataflow", "pe_count", "ccf", "compute_cycles",
                                                "memory_cycles", "runtime", "utilization", "energy", "edp"};

// --- verify ----------------------------------------------------------------------------

struct VerifyArgs {
  Common common;
  int seeds = 100;
  Index max_extent = 64;
  std::vector<std::string> fixtures;
};

StoredMatrix oracle(const StoredMatrix& a, const StoredMatrix& b) {
  const auto M = a.rows(), K = a.cols(), N = b.cols();
  const auto da = decompress(a);
  const auto db = decompress(b);
  const auto av = da.values();
  const auto bv = db.values();
  std::vector<double> o(static_cast<std::size_t>(M * N), 0.0);
  for (Index m = 0; m < M; ++m)
    for (Index k = 0; k < K; ++k)
      for (Index n = 0; n < N; ++n) o[m * N + n] += av[m * K + k] * bv[k * N + n];
  return StoredMatrix::dense(M, N, canonical_dense(Role::Output), std::move(o));
}

bool same_dense(const StoredMatrix& x, const StoredMatrix& y) {
  if (x.rows() != y.rows() || x.cols() != y.cols()) return false;
  for (Index i = 0; i < x.rows(); ++i)
    for (Index j = 0; j < x.cols(); ++j)
      if (x.at(i, j) != y.at(i, j)) return false;
  return true;
}

int cmd_verify(const VerifyArgs& v, std::ostream& out, std::ostream& err) {
  struct Row {
    std::string kernel, layout;
    std::uint64_t instances = 0, passed = 0;
    kernels::KernelCounters counters;
  };
  const std::vector<std::pair<kernels::KernelKind, CcfPair>> cases = {
      {kernels::KernelKind::DenseGemm, parse_ccf_pair("UMUK,UKUN")},
      {kernels::KernelKind::SpmmEie, parse_ccf_pair("UMCK,UKUN")},
      {kernels::KernelKind::SpmmEie, parse_ccf_pair("UMUK,UNCK")},
      {kernels::KernelKind::SpgemmInner, parse_ccf_pair("UMCK,UNCK")},
      {kernels::KernelKind::SpgemmOuter, parse_ccf_pair("UKCM,UKCN")},
      {kernels::KernelKind::SpgemmGustavson, parse_ccf_pair("UKCM,UNCK")},
  };
  std::vector<Row> rows;
  if (v.seeds > 0) {
    for (const auto& [kind, pair] : cases) rows.push_back(Row{kernels::kernel_name(kind), pair.a.to_string() + "/" + pair.b.to_string(), 0, 0, {}});
    rows.push_back(Row{"k-split-merge", "UMUK/UKUN+UMCK/UNCK", 0, 0, {}});
  }
  int failures = 0;
  const double densities[] = {0.01, 0.1, 0.5, 1.0};
  for (int i = 0; i < v.seeds; ++i) {
    std::mt19937_64 rng(v.common.seed + static_cast<std::uint64_t>(i));
    const Index M = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(v.max_extent));
    const Index K = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(v.max_extent));
    const Index N = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(v.max_extent));
    const double d_a = densities[i % 4];
    const double d_b = densities[(i / 4) % 4];
    const auto a = gen_uniform_random(M, K, d_a, rng(), Role::A);
    const auto b = gen_uniform_random(K, N, d_b, rng(), Role::B);
    const auto want = oracle(a, b);
    for (std::size_t c = 0; c < cases.size(); ++c) {
      const auto& [kind, pair] = cases[c];
      const auto ca = convert(a, pair.a);
      const auto cb = convert(b, pair.b);
      const auto par = kernels::run(kind, ca, cb);
      const auto ser = kernels::serial::run(kind, ca, cb);
      auto& row = rows[c];
      ++row.instances;
      row.counters += par.counters;
      if (same_dense(par.output, want) && same_dense(ser.output, want) && par.counters == ser.counters) {
        ++row.passed;
      } else {
        ++failures;
        fmt::print(err, "mismatch: {} ({}) seed {} shape {}x{}x{}\n", row.kernel, row.layout, v.common.seed + i, M, K, N);
      }
    }
    if (K >= 2) {
      KernelSpec spec;
      spec.id = "verify";
      spec.M = M;
      spec.K = K;
      spec.N = N;
      spec.a = std::make_shared<const StoredMatrix>(a);
      spec.b = std::make_shared<const StoredMatrix>(b);
      spec.d_a = std::max(1.0 / static_cast<double>(M * K), static_cast<double>(a.count_nonzeros()) / static_cast<double>(M * K));
      spec.d_b = std::max(1.0 / static_cast<double>(K * N), static_cast<double>(b.count_nonzeros()) / static_cast<double>(K * N));
      sched::PartitionPlan plan;
      plan.k_cut = K / 2;
      plan.assignments.push_back({sched::Region{0, M, 0, K / 2, 0, N}, parse_ccf_pair("UMUK,UKUN"), 0});
      plan.assignments.push_back({sched::Region{0, M, K / 2, K, 0, N}, parse_ccf_pair("UMCK,UNCK"), 0});
      auto& row = rows.back();
      ++row.instances;
      if (same_dense(sched::execute_plan(plan, spec), want)) {
        ++row.passed;
      } else {
        ++failures;
        fmt::print(err, "mismatch: k-split merge seed {} shape {}x{}x{}\n", v.common.seed + i, M, K, N);
      }
    }
  }
  for (const auto& path : v.fixtures) {
    std::ifstream in(path);
    if (!in) throw InputError(fmt::format("cannot open fixture '{}'", path));
    const auto m = read_fixture(in, path);
    Row row{"fixture", path, 1, 0, {}};
    try {
      m.validate();
      row.passed = 1;
    } catch (const FormatError& e) {
      ++failures;
      fmt::print(err, "fixture {}: {}\n", path, e.what());
    }
    rows.push_back(row);
  }

  Table t;
  t.header = {"kernel", "layout", "instances", "passed", "loop_iterations", "macs", "index_comparisons"};
  for (const auto& r : rows)
    t.rows.push_back({r.kernel, r.layout, std::to_string(r.instances), std::to_string(r.passed),
                      std::to_string(r.counters.loop_iterations), std::to_string(r.counters.macs),
                      std::to_string(r.counters.index_comparisons)});
  emit(t, v.common, "csv", out);
  return failures == 0 ? kOk : kValidationFailure;
}

// --- cost ---------------------------------------------------------------------------------

struct CostArgs {
  Common common;
  Source source;
  Machine machine;
  bool search = false;
};

int cmd_cost(const CostArgs& a, std::ostream& out) {
  const auto cal = calibration_of(a.common);
  const auto bws = bandwidths_of(a.machine, cal, {"default"});
  if (bws.size() != 1) throw InputError("cost takes one --bandwidth");
  const auto bw = bws.front();
  const auto machines = machines_of(a.machine, cal, bw, {"aespa-quarters"});
  const auto& config = single_machine(machines);
  const auto suite = load_source(a.source, a.common, false);
  const auto so = search_options(a.machine);
  auto opts = so.plan.cost;
  opts.scratchpad_bandwidth = config.memory.scratchpad_bandwidth;

  Table t;
  t.header = kBreakdownHeader;
  json tree = json::array();
  for (const auto& w : suite) {
    if (a.search) {
      const auto r = sched::search_single_kernel(w.spec, config, bw, so);
      for (std::size_t c = 0; c < r.report.per_cluster.size(); ++c)
        t.rows.push_back(breakdown_cells(w.name, c, r.report.per_cluster[c]));
      tree.push_back({{"workload", w.name}, {"plan", io::to_json(r.plan)}, {"report", io::to_json(r.report)}});
      continue;
    }
    json clusters = json::array();
    for (std::size_t c = 0; c < config.clusters.size(); ++c) {
      const auto& cl = config.clusters[c];
      const auto ccf = cost::supports(cl.dataflow, w.spec.ccf) ? w.spec.ccf : cost::best_layout(cl, w.spec, bw, opts);
      const auto b = cost::runtime(cl, w.spec, ccf, bw, config.energy, opts);
      t.rows.push_back(breakdown_cells(w.name, c, b));
      clusters.push_back(io::to_json(b));
    }
    tree.push_back({{"workload", w.name}, {"clusters", clusters}});
  }
  emit(tree, t, a.common, "csv", out);
  return kOk;
}

// --- sweep --------------------------------------------------------------------------------

struct SweepArgs {
  Common common;
  Source source;
  Machine machine;
  std::string baseline = "homog-eie";
};

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  const auto cal = calibration_of(a.common);
  const auto suite = load_source(a.source, a.common, true);
  const auto so = search_options(a.machine);
  Table t;
  t.header = {"bandwidth", "workload", "preset", "makespan_cycles", "speedup", "utilization",
              "energy", "energy_improvement", "edp", "edp_improvement"};
  json tree = json::array();
  for (const auto& bw : bandwidths_of(a.machine, cal, {"default", "unlimited"})) {
    const auto machines = machines_of(a.machine, cal, bw, arch::all_preset_names());
    const auto table = sched::compare_baselines(suite, machines, bw, a.baseline, so);
    for (const auto& r : table.rows)
      t.rows.push_back({bw.to_string(), r.workload, r.preset, std::to_string(r.makespan_cycles), num(r.speedup),
                        num(r.effective_utilization), num(r.energy), num(r.energy_improvement), num(r.edp),
                        num(r.edp_improvement)});
    for (const auto& r : table.geomeans)
      t.rows.push_back({bw.to_string(), r.workload, r.preset, "", num(r.speedup), num(r.effective_utilization), "",
                        num(r.energy_improvement), "", num(r.edp_improvement)});
    json configs = json::array();
    for (const auto& m : machines) configs.push_back(io::to_json(m));
    auto j = io::to_json(table);
    j["configs"] = configs;
    tree.push_back(std::move(j));
  }
  emit(tree, t, a.common, "csv", out);
  return kOk;
}

// --- schedule-many --------------------------------------------------------------------------

struct ManyArgs {
  Common common;
  Machine machine;
  std::string queue;
};

int cmd_schedule_many(const ManyArgs& a, std::ostream& out) {
  const auto cal = calibration_of(a.common);
  const auto bws = bandwidths_of(a.machine, cal, {"default"});
  if (bws.size() != 1) throw InputError("schedule-many takes one --bandwidth");
  const auto bw = bws.front();
  const auto machines = machines_of(a.machine, cal, bw, {"aespa-quarters"});
  const auto& config = single_machine(machines);
  std::vector<KernelSpec> queue;
  for (const auto& e : workloads::load_spec_file(a.queue)) queue.push_back(e.spec);
  sched::PlanOptions po;
  po.cost.charge_conversion = a.machine.charge_conversion;

  const auto rep = sched::schedule_many(queue, config, bw, po);
  std::string homog_name;
  std::uint64_t homog_cycles = UINT64_MAX;
  for (const auto& name : arch::static_preset_names()) {
    if (name.rfind("homog-", 0) != 0) continue;
    const auto c = sched::serial_cycles(queue, arch::preset(name, cal), bw, po);
    if (c < homog_cycles) {
      homog_cycles = c;
      homog_name = name;
    }
  }

  auto tree = io::to_json(rep);
  tree["config"] = io::to_json(config);
  tree["bandwidth"] = bw.to_string();
  tree["serial_cycles"] = sched::serial_cycles(queue, config, bw, po);
  tree["best_homogeneous"] = {{"preset", homog_name}, {"serial_cycles", homog_cycles}};

  Table t;
  t.header = {"kernel", "id", "cluster", "dataflow", "ccf", "start", "end", "compute_cycles", "traffic_bytes"};
  for (const auto& p : rep.placements)
    t.rows.push_back({std::to_string(p.kernel), p.id, std::to_string(p.cluster),
                      cost::dataflow_name(config.clusters[p.cluster].dataflow), p.ccf.a.to_string() + "/" + p.ccf.b.to_string(),
                      std::to_string(p.start), std::to_string(p.end), std::to_string(p.compute_cycles),
                      std::to_string(p.traffic_bytes)});
  emit(tree, t, a.common, "json", out);
  return kOk;
}

// --- emit-presets ------------------------------------------------------------------------------

struct PresetArgs {
  Common common;
  Machine machine;
  std::string config_dir;
};

int cmd_emit_presets(const PresetArgs& a, std::ostream& out) {
  const auto cal = calibration_of(a.common);
  const auto bws = bandwidths_of(a.machine, cal, {"default"});
  if (bws.size() != 1) throw InputError("emit-presets takes one --bandwidth");
  const auto machines = machines_of(a.machine, cal, bws.front(), arch::all_preset_names());
  Table t;
  t.header = {"name", "static", "clusters", "total_pes", "used_area_mm2", "peak_tflops"};
  json tree = json::array();
  for (const auto& m : machines) {
    std::string clusters;
    for (const auto& c : m.clusters)
      clusters += fmt::format("{}{}:{}", clusters.empty() ? "" : ";", cost::dataflow_name(c.dataflow), c.pe_count);
    t.rows.push_back({m.name, m.is_static ? "true" : "false", clusters, std::to_string(m.total_pes()),
                      num(m.used_area()), num(arch::peak_tflops(m))});
    tree.push_back(io::to_json(m));
    if (!a.config_dir.empty()) {
      std::filesystem::create_directories(a.config_dir);
      const auto path = std::filesystem::path(a.config_dir) / (m.name + ".cfg");
      std::ofstream f(path);
      if (!f) throw InputError(fmt::format("cannot write '{}'", path.string()));
      arch::write_config(f, m);
    }
  }
  emit(tree, t, a.common, "csv", out);
  return kOk;
}

}  // namespace

StoredMatrix read_fixture(std::istream& in, const std::string& source) {
  std::optional<CcfDescriptor> ccf;
  Index rows = -1, cols = -1;
  std::vector<Index> pos, crd;
  std::vector<double> values;
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ss(line);
    std::string key;
    if (!(ss >> key) || key[0] == '#') continue;
    if (key == "ccf") {
      std::string tag;
      ss >> tag;
      ccf = parse_ccf(tag);
    } else if (key == "shape") {
      if (!(ss >> rows >> cols)) throw InputError(fmt::format("{}: bad shape line", source));
    } else if (key == "pos") {
      pos = read_list<Index>(ss, source, key);
    } else if (key == "crd") {
      crd = read_list<Index>(ss, source, key);
    } else if (key == "values") {
      values = read_list<double>(ss, source, key);
    } else {
      throw InputError(fmt::format("{}: unknown key '{}'", source, key));
    }
  }
  if (!ccf || rows < 0) throw InputError(fmt::format("{}: fixture needs ccf and shape lines", source));
  if (!ccf->compressed()) throw InputError(fmt::format("{}: fixture layout must be compressed", source));
  return StoredMatrix::compressed_unchecked(rows, cols, *ccf, std::move(pos), std::move(crd), std::move(values));
}

void write_fixture(std::ostream& out, const StoredMatrix& m) {
  fmt::print(out, "ccf {}\nshape {} {}\n", m.ccf().to_string(), m.rows(), m.cols());
  fmt::print(out, "pos {}\n", fmt::join(m.pos(), " "));
  fmt::print(out, "crd {}\n", fmt::join(m.crd(), " "));
  fmt::print(out, "values {}\n", fmt::join(m.values(), " "));
}

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Analytical simulator and scheduler for heterogeneous sparse matmul accelerators", "aespa"};
  app.require_subcommand(1);

  VerifyArgs verify;
  auto* v = app.add_subcommand("verify", "Check every kernel against a dense oracle on random instances");
  add_common(v, verify.common, "csv");
  v->add_option("--seeds", verify.seeds, "Number of random instances")->check(CLI::NonNegativeNumber);
  v->add_option("--max-extent", verify.max_extent, "Largest M, K or N")->check(CLI::PositiveNumber);
  v->add_option("--fixture", verify.fixtures, "Compressed-matrix dump to validate (repeatable)");

  CostArgs cost_args;
  auto* c = app.add_subcommand("cost", "Cost workloads on each cluster of one configuration");
  add_common(c, cost_args.common, "csv");
  add_source(c, cost_args.source);
  add_machine(c, cost_args.machine, false);
  c->add_flag("--search", cost_args.search, "Report the searched partition plan instead of per-cluster costs");

  SweepArgs sweep;
  auto* s = app.add_subcommand("sweep", "Compare presets over a workload suite with single-kernel scheduling");
  add_common(s, sweep.common, "csv");
  add_source(s, sweep.source);
  add_machine(s, sweep.machine, true);
  s->add_option("--baseline", sweep.baseline, "Preset the metrics are normalized to");

  ManyArgs many;
  auto* m = app.add_subcommand("schedule-many", "Assign a queue of kernels to clusters");
  add_common(m, many.common, "json");
  add_machine(m, many.machine, false);
  m->add_option("--queue", many.queue, "CSV spec file, one kernel per line, in queue order")
      ->required()
      ->check(CLI::ExistingFile);

  PresetArgs presets;
  auto* p = app.add_subcommand("emit-presets", "List preset configurations");
  add_common(p, presets.common, "csv");
  add_machine(p, presets.machine, false);
  p->add_option("--config-dir", presets.config_dir, "Also write each preset as <dir>/<name>.cfg");

  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kInputError;
  }

  try {
    if (*v) return cmd_verify(verify, out, err);
    if (*c) return cmd_cost(cost_args, out);
    if (*s) return cmd_sweep(sweep, out);
    if (*m) return cmd_schedule_many(many, out);
    if (*p) return cmd_emit_presets(presets, out);
  } catch (const InputError& e) {
    fmt::print(err, "error: {}\n", e.what());
    return kInputError;
  } catch (const FormatError& e) {
    fmt::print(err, "invalid: {}\n", e.what());
    return kValidationFailure;
  }
  return kInputError;
}

}  // namespace aespa::cli
