#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>

#include <fmt/format.h>

#include "internal.hpp"

namespace aespa::sched {

double Region::volume() const {
  return static_cast<double>(rows()) * static_cast<double>(depth()) * static_cast<double>(cols());
}

bool Region::overlaps(const Region& o) const {
  return m0 < o.m1 && o.m0 < m1 && k0 < o.k1 && o.k0 < k1 && n0 < o.n1 && o.n0 < n1;
}

int PartitionPlan::k_partitions() const {
  std::set<std::pair<Index, Index>> ranges;
  for (const auto& a : assignments)
    if (!a.region.empty()) ranges.emplace(a.region.k0, a.region.k1);
  return static_cast<int>(ranges.size());
}

Objective parse_objective(std::string_view text) {
  if (text == "makespan") return Objective::Makespan;
  if (text == "edp") return Objective::Edp;
  throw InputError(fmt::format("unknown objective '{}' (expected makespan or edp)", text));
}

const char* objective_name(Objective o) { return o == Objective::Makespan ? "makespan" : "edp"; }

void validate_plan(const PartitionPlan& plan, const KernelSpec& spec, const AespaConfig& config) {
  if (plan.assignments.empty()) throw InputError("plan has no assignments");
  // Zero-size regions (a cut at the edge of a dimension) are allowed and ignored.
  double volume = 0.0;
  for (std::size_t i = 0; i < plan.assignments.size(); ++i) {
    const auto& a = plan.assignments[i];
    const auto& r = a.region;
    if (a.cluster >= config.clusters.size())
      throw InputError(fmt::format("assignment {} names cluster {} but the config has {}", i, a.cluster,
                                   config.clusters.size()));
    if (r.rows() < 0 || r.depth() < 0 || r.cols() < 0 || r.m0 < 0 || r.k0 < 0 || r.n0 < 0 || r.m1 > spec.M ||
        r.k1 > spec.K || r.n1 > spec.N)
      throw InputError(fmt::format("assignment {} region [{},{})x[{},{})x[{},{}) is inverted or outside {}x{}x{}", i,
                                   r.m0, r.m1, r.k0, r.k1, r.n0, r.n1, spec.M, spec.K, spec.N));
    const auto kind = config.clusters[a.cluster].dataflow;
    if (!cost::supports(kind, a.ccf))
      throw cost::UnsupportedCcf(fmt::format("assignment {}: {} does not compute on ({})", i,
                                             cost::dataflow_name(kind), a.ccf.to_string()));
    for (std::size_t j = 0; j < i; ++j)
      if (!r.empty() && r.overlaps(plan.assignments[j].region))
        throw InputError(fmt::format("assignments {} and {} overlap", j, i));
    volume += r.volume();
  }
  const double total = static_cast<double>(spec.M) * static_cast<double>(spec.K) * static_cast<double>(spec.N);
  if (volume != total) throw InputError(fmt::format("plan covers {} of {} iterations", volume, total));
}

std::uint64_t merge_cycles(const KernelSpec& spec, int num_k_partitions, const AespaConfig& config) {
  const auto adds = detail::merge_adds(spec, num_k_partitions);
  if (adds == 0) return 0;
  const auto pes = static_cast<std::uint64_t>(std::max<std::int64_t>(1, config.total_pes()));
  return (adds + pes - 1) / pes;
}

PartitionPlan single_cluster_plan(const KernelSpec& spec, std::size_t cluster, const CcfPair& layout) {
  PartitionPlan plan;
  plan.assignments.push_back(Assignment{Region{0, spec.M, 0, spec.K, 0, spec.N}, layout, cluster});
  return plan;
}

namespace detail {

std::uint64_t merge_adds(const KernelSpec& spec, int num_k_partitions) {
  if (num_k_partitions <= 1) return 0;
  return static_cast<std::uint64_t>(num_k_partitions - 1) * static_cast<std::uint64_t>(spec.M) *
         static_cast<std::uint64_t>(spec.N);
}

cost::CostOptions effective_options(const PlanOptions& options, const AespaConfig& config) {
  auto o = options.cost;
  o.scratchpad_bandwidth = config.memory.scratchpad_bandwidth;
  return o;
}

OperandView OperandView::of(const KernelSpec& spec) {
  OperandView v;
  if (!spec.materialized()) return v;
  v.measured = true;
  const auto a = convert(*spec.a, compressed_along(Role::A, Dim::M));
  const auto b = convert(*spec.b, compressed_along(Role::B, Dim::N));

  auto order = [](const StoredMatrix& m) {
    const auto pos = m.pos();
    std::vector<Index> idx(static_cast<std::size_t>(m.outer_extent()));
    std::iota(idx.begin(), idx.end(), 0);
    std::stable_sort(idx.begin(), idx.end(),
                     [&](Index x, Index y) { return pos[x + 1] - pos[x] > pos[y + 1] - pos[y]; });
    return idx;
  };
  auto permute = [](const StoredMatrix& m, const std::vector<Index>& idx) {
    const auto pos = m.pos();
    const auto crd = m.crd();
    const auto val = m.values();
    std::vector<Index> p{0};
    std::vector<Index> c;
    std::vector<double> x;
    for (const auto o : idx) {
      for (Index q = pos[o]; q < pos[o + 1]; ++q) {
        c.push_back(crd[q]);
        x.push_back(val[q]);
      }
      p.push_back(static_cast<Index>(c.size()));
    }
    return StoredMatrix::compressed(m.rows(), m.cols(), m.ccf(), std::move(p), std::move(c), std::move(x));
  };
  v.row_of = order(a);
  v.col_of = order(b);
  v.a_rows = permute(a, v.row_of);
  v.b_cols = permute(b, v.col_of);
  return v;
}

namespace {

// Nonzeros of fibers [o0,o1) with coordinates in [i0,i1).
Index count_block(const StoredMatrix& m, Index o0, Index o1, Index i0, Index i1) {
  const auto pos = m.pos();
  const auto crd = m.crd();
  Index n = 0;
  for (Index o = o0; o < o1; ++o) {
    const auto* b = crd.data() + pos[o];
    const auto* e = crd.data() + pos[o + 1];
    n += std::lower_bound(b, e, i1) - std::lower_bound(b, e, i0);
  }
  return n;
}

}  // namespace

KernelSpec OperandView::region_spec(const KernelSpec& spec, const Region& r) const {
  KernelSpec s;
  s.id = spec.id;
  s.M = r.rows();
  s.K = r.depth();
  s.N = r.cols();
  s.ccf = spec.ccf;
  s.value_bytes = spec.value_bytes;
  s.index_bytes = spec.index_bytes;
  if (measured) {
    s.d_a = static_cast<double>(count_block(a_rows, r.m0, r.m1, r.k0, r.k1)) /
            (static_cast<double>(s.M) * static_cast<double>(s.K));
    s.d_b = static_cast<double>(count_block(b_cols, r.n0, r.n1, r.k0, r.k1)) /
            (static_cast<double>(s.K) * static_cast<double>(s.N));
  } else {
    s.d_a = spec.d_a;
    s.d_b = spec.d_b;
  }
  return s;
}

Totals score(const std::vector<ClusterLoad>& loads, const AespaConfig& config, const Bandwidth& bandwidth,
             const cost::CostOptions& options, std::uint64_t merge, double merge_work,
             std::vector<std::uint64_t>* memory_done) {
  const double f = config.memory.frequency;
  std::vector<double> bytes(loads.size());
  for (std::size_t c = 0; c < loads.size(); ++c) bytes[c] = loads[c].bytes;
  auto done = cost::concurrent_transfer_cycles(bytes, bandwidth, f);
  const auto spad = Bandwidth::limited(options.scratchpad_bandwidth);

  Totals t;
  double work = merge_work;
  double hbm_words = 0.0;
  double sram_words = 0.0;
  const auto word = static_cast<double>(options.word_bytes);
  for (std::size_t c = 0; c < loads.size(); ++c) {
    const auto& l = loads[c];
    done[c] += cost::transfer_cycles(l.conversion_bytes, spad, f);
    t.makespan = std::max({t.makespan, l.compute_cycles, done[c]});
    work += l.loop_work;
    hbm_words += l.bytes / word;
    sram_words += 2.0 * l.bytes / word + l.conversion_bytes / word;
  }
  t.makespan += merge;
  const double capacity = static_cast<double>(config.total_pes()) * static_cast<double>(t.makespan);
  const auto e = cost::energy(
      cost::EnergyInputs{work, hbm_words, sram_words, std::max(0.0, capacity - work), static_cast<double>(t.makespan) / f},
      config.energy);
  t.energy = e.energy;
  t.edp = e.edp;
  if (memory_done) *memory_done = std::move(done);
  return t;
}

}  // namespace detail

ScheduleReport evaluate_plan(const PartitionPlan& plan, const KernelSpec& spec, const AespaConfig& config,
                             const Bandwidth& bandwidth, const PlanOptions& options) {
  validate_plan(plan, spec, config);
  const auto opts = detail::effective_options(options, config);
  const auto view = detail::OperandView::of(spec);
  const auto nc = config.clusters.size();

  std::vector<cost::CostBreakdown> parts(nc);
  std::vector<detail::ClusterLoad> loads(nc);
  std::vector<bool> seen(nc, false);
  for (std::size_t c = 0; c < nc; ++c) {
    parts[c].dataflow = config.clusters[c].dataflow;
    parts[c].pe_count = config.clusters[c].pe_count;
    parts[c].ccf = cost::supported_ccfs(parts[c].dataflow).front();
  }
  double effectual = 0.0;
  for (const auto& a : plan.assignments) {
    if (a.region.empty()) continue;
    const auto sub = view.region_spec(spec, a.region);
    const auto& cl = config.clusters[a.cluster];
    const auto b = cost::runtime(cl, sub, a.ccf, Bandwidth::infinite(), config.energy, opts);
    auto& p = parts[a.cluster];
    if (!seen[a.cluster]) p.ccf = a.ccf;
    seen[a.cluster] = true;
    p.usable_pes = std::max(p.usable_pes, b.usable_pes);
    p.compute_cycles += b.compute_cycles;
    p.traffic_bytes += b.traffic_bytes;
    p.conversion_bytes += b.conversion_bytes;
    p.loop_work += b.loop_work;
    p.effectual_macs += b.effectual_macs;
    effectual += b.effectual_macs;
  }
  for (std::size_t c = 0; c < nc; ++c)
    loads[c] = detail::ClusterLoad{parts[c].compute_cycles, static_cast<double>(parts[c].traffic_bytes),
                                   static_cast<double>(parts[c].conversion_bytes), parts[c].loop_work,
                                   parts[c].effectual_macs};

  ScheduleReport r;
  const int kp = plan.k_partitions();
  r.merge_cycles = merge_cycles(spec, kp, config);
  std::vector<std::uint64_t> memory_done;
  const auto t = detail::score(loads, config, bandwidth, opts, r.merge_cycles,
                               static_cast<double>(detail::merge_adds(spec, kp)), &memory_done);
  for (std::size_t c = 0; c < nc; ++c) cost::finalize(parts[c], memory_done[c], config.memory.frequency, config.energy, opts);
  r.per_cluster = std::move(parts);
  r.makespan_cycles = t.makespan;
  r.total_energy = t.energy;
  r.edp = t.edp;
  r.effectual_macs = effectual;
  const double capacity = static_cast<double>(config.total_pes()) * static_cast<double>(t.makespan);
  r.effective_utilization = capacity > 0.0 ? std::min(1.0, effectual / capacity) : 0.0;
  return r;
}

StoredMatrix execute_plan(const PartitionPlan& plan, const KernelSpec& spec) {
  if (!spec.materialized()) throw InputError(fmt::format("kernel '{}' has no operands attached", spec.id));
  spec.validate();
  const auto view = detail::OperandView::of(spec);
  std::vector<double> out(static_cast<std::size_t>(spec.M * spec.N), 0.0);

  for (const auto& asg : plan.assignments) {
    const auto& r = asg.region;
    if (r.empty()) continue;
    // Dense blocks of the permuted operands, then the assigned layouts.
    std::vector<double> a(static_cast<std::size_t>(r.rows() * r.depth()), 0.0);
    {
      const auto pos = view.a_rows.pos();
      const auto crd = view.a_rows.crd();
      const auto val = view.a_rows.values();
      for (Index m = r.m0; m < r.m1; ++m)
        for (Index q = pos[m]; q < pos[m + 1]; ++q)
          if (crd[q] >= r.k0 && crd[q] < r.k1) a[(m - r.m0) * r.depth() + (crd[q] - r.k0)] = val[q];
    }
    std::vector<double> b(static_cast<std::size_t>(r.depth() * r.cols()), 0.0);
    {
      const auto pos = view.b_cols.pos();
      const auto crd = view.b_cols.crd();
      const auto val = view.b_cols.values();
      for (Index n = r.n0; n < r.n1; ++n)
        for (Index q = pos[n]; q < pos[n + 1]; ++q)
          if (crd[q] >= r.k0 && crd[q] < r.k1) b[(crd[q] - r.k0) * r.cols() + (n - r.n0)] = val[q];
    }
    const auto da = StoredMatrix::dense(r.rows(), r.depth(), canonical_dense(Role::A), std::move(a));
    const auto db = StoredMatrix::dense(r.depth(), r.cols(), canonical_dense(Role::B), std::move(b));
    kernels::KernelKind kind{};
    if (!kernels::kernel_for(asg.ccf, kind))
      throw cost::UnsupportedCcf(fmt::format("no kernel computes on ({})", asg.ccf.to_string()));
    const auto res = kernels::run(kind, convert(da, asg.ccf.a), convert(db, asg.ccf.b));
    for (Index i = 0; i < r.rows(); ++i)
      for (Index j = 0; j < r.cols(); ++j)
        out[view.row_of[r.m0 + i] * spec.N + view.col_of[r.n0 + j]] += res.output.at(i, j);
  }
  return StoredMatrix::dense(spec.M, spec.N, canonical_dense(Role::Output), std::move(out));
}

}  // namespace aespa::sched
