#include <algorithm>
#include <cmath>
#include <limits>

#include <fmt/format.h>

#include "internal.hpp"

namespace aespa::sched {

namespace {

struct Option {
  CcfPair ccf;
  detail::ClusterLoad load;
};

struct Geometry {
  Index kc = 0, mc = 0, nc = 0;
  std::vector<Region> regions;
  std::vector<std::vector<Option>> options;  // [region][cluster]
};

std::vector<Index> cut_points(Index extent, int divisions) {
  std::vector<Index> cuts;
  for (int i = 0; i <= divisions; ++i) cuts.push_back(extent * i / divisions);
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  return cuts;
}

// K0 = [0,kc) is split into up to four quadrants by mc and nc; K1 = [kc,K)
// stays whole. The unsplit plan (kc = K, mc = nc = 0) comes first.
std::vector<Geometry> geometries(const KernelSpec& spec, int divisions) {
  if (divisions < 1) throw InputError(fmt::format("grid divisions must be >= 1, got {}", divisions));
  auto ks = cut_points(spec.K, divisions);
  auto ms = cut_points(spec.M, divisions);
  auto ns = cut_points(spec.N, divisions);
  ks.erase(ks.begin());  // kc = 0 duplicates kc = K
  std::reverse(ks.begin(), ks.end());
  ms.pop_back();  // mc = M duplicates mc = 0
  ns.pop_back();

  std::vector<Geometry> out;
  for (const auto kc : ks)
    for (const auto mc : ms)
      for (const auto nc : ns) {
        Geometry g{kc, mc, nc, {}, {}};
        const Region quads[] = {{0, mc, 0, kc, 0, nc},
                                {mc, spec.M, 0, kc, 0, nc},
                                {0, mc, 0, kc, nc, spec.N},
                                {mc, spec.M, 0, kc, nc, spec.N}};
        for (const auto& q : quads)
          if (!q.empty()) g.regions.push_back(q);
        if (kc < spec.K) g.regions.push_back(Region{0, spec.M, kc, spec.K, 0, spec.N});
        out.push_back(std::move(g));
      }
  return out;
}

struct Candidate {
  double objective = std::numeric_limits<double>::infinity();
  std::size_t geometry = std::numeric_limits<std::size_t>::max();
  std::vector<std::size_t> choice;

  [[nodiscard]] bool before(const Candidate& o) const {
    if (objective != o.objective) return objective < o.objective;
    if (geometry != o.geometry) return geometry < o.geometry;
    return choice < o.choice;
  }
};

class Searcher {
 public:
  Searcher(const KernelSpec& spec, const AespaConfig& config, const Bandwidth& bandwidth, const SearchOptions& options)
      : spec_(spec), config_(config), bw_(bandwidth), options_(options),
        opts_(detail::effective_options(options.plan, config)), view_(detail::OperandView::of(spec)) {
    if (config.clusters.empty()) throw InputError(fmt::format("config '{}' has no clusters", config.name));
    geoms_ = geometries(spec, options.grid_divisions);
    rate_ = bandwidth.unlimited ? 0.0 : bandwidth.bytes_per_second / config.memory.frequency;
  }

  SearchResult run(bool parallel, bool prune) {
    prune_ = prune;
    Candidate best;
    const auto ng = static_cast<std::int64_t>(geoms_.size());
#pragma omp parallel if (parallel)
    {
      Candidate local;
#pragma omp for schedule(dynamic, 1)
      for (std::int64_t g = 0; g < ng; ++g) explore(static_cast<std::size_t>(g), local);
#pragma omp critical(aespa_search_reduce)
      if (local.before(best)) best = local;
    }

    SearchResult r;
    const auto& g = geoms_[best.geometry];
    if (g.kc < spec_.K) r.plan.k_cut = g.kc;
    if (g.mc > 0) r.plan.m_cut = g.mc;
    if (g.nc > 0) r.plan.n_cut = g.nc;
    for (std::size_t i = 0; i < g.regions.size(); ++i)
      r.plan.assignments.push_back(Assignment{g.regions[i], g.options[i][best.choice[i]].ccf, best.choice[i]});
    r.report = evaluate_plan(r.plan, spec_, config_, bw_, options_.plan);
    const double clusters = static_cast<double>(config_.clusters.size());
    for (const auto& geo : geoms_)
      r.candidates += static_cast<std::uint64_t>(std::pow(clusters, static_cast<double>(geo.regions.size())));
    return r;
  }

 private:
  void prepare(Geometry& g) const {
    g.options.resize(g.regions.size());
    for (std::size_t i = 0; i < g.regions.size(); ++i) {
      const auto sub = view_.region_spec(spec_, g.regions[i]);
      for (const auto& cl : config_.clusters) {
        const auto ccf = cost::best_layout(cl, sub, bw_, opts_);
        const auto b = cost::runtime(cl, sub, ccf, Bandwidth::infinite(), config_.energy, opts_);
        g.options[i].push_back(Option{ccf, detail::ClusterLoad{b.compute_cycles, static_cast<double>(b.traffic_bytes),
                                                               static_cast<double>(b.conversion_bytes), b.loop_work,
                                                               b.effectual_macs}});
      }
    }
  }

  void explore(std::size_t gi, Candidate& best) {
    auto& g = geoms_[gi];
    prepare(g);
    const int kp = g.kc < spec_.K && g.kc > 0 ? 2 : 1;
    merge_ = merge_cycles(spec_, kp, config_);
    merge_work_ = static_cast<double>(detail::merge_adds(spec_, kp));
    loads_.assign(config_.clusters.size(), detail::ClusterLoad{});
    choice_.assign(g.regions.size(), 0);
    descend(g, gi, 0, best);
  }

  // Lower bound on the objective of any completion of the current partial assignment.
  [[nodiscard]] double bound() const {
    std::uint64_t compute = 0;
    double bytes = 0.0, work = merge_work_, hbm = 0.0, sram = 0.0;
    const auto word = static_cast<double>(opts_.word_bytes);
    for (const auto& l : loads_) {
      compute = std::max(compute, l.compute_cycles);
      bytes += l.bytes;
      work += l.loop_work;
      hbm += l.bytes / word;
      sram += (2.0 * l.bytes + l.conversion_bytes) / word;
    }
    double ms = static_cast<double>(compute);
    if (!bw_.unlimited) ms = std::max(ms, std::floor(bytes / rate_ * (1.0 - 1e-12)));
    ms += static_cast<double>(merge_);
    if (options_.objective == Objective::Makespan) return ms;
    const auto e = cost::energy(cost::EnergyInputs{work, hbm, sram, 0.0, ms / config_.memory.frequency}, config_.energy);
    return e.edp * (1.0 - 1e-12);
  }

  void descend(const Geometry& g, std::size_t gi, std::size_t depth, Candidate& best) {
    if (prune_ && depth > 0 && bound() > best.objective) return;
    if (depth == g.regions.size()) {
      const auto t = detail::score(loads_, config_, bw_, opts_, merge_, merge_work_);
      const double obj = options_.objective == Objective::Makespan ? static_cast<double>(t.makespan) : t.edp;
      Candidate c{obj, gi, {}};
      if (c.objective < best.objective || (c.objective == best.objective && gi < best.geometry)) {
        c.choice = choice_;
        best = std::move(c);
      }
      return;
    }
    for (std::size_t c = 0; c < config_.clusters.size(); ++c) {
      const auto& o = g.options[depth][c].load;
      auto& l = loads_[c];
      const auto saved = l;
      l.compute_cycles += o.compute_cycles;
      l.bytes += o.bytes;
      l.conversion_bytes += o.conversion_bytes;
      l.loop_work += o.loop_work;
      l.effectual_macs += o.effectual_macs;
      choice_[depth] = c;
      descend(g, gi, depth + 1, best);
      l = saved;
    }
  }

  const KernelSpec& spec_;
  const AespaConfig& config_;
  Bandwidth bw_;
  SearchOptions options_;
  cost::CostOptions opts_;
  detail::OperandView view_;
  std::vector<Geometry> geoms_;
  double rate_ = 0.0;
  bool prune_ = true;
  // Per-thread scratch; explore() runs one geometry at a time per thread.
  static thread_local std::vector<detail::ClusterLoad> loads_;
  static thread_local std::vector<std::size_t> choice_;
  static thread_local std::uint64_t merge_;
  static thread_local double merge_work_;
};

thread_local std::vector<detail::ClusterLoad> Searcher::loads_;
thread_local std::vector<std::size_t> Searcher::choice_;
thread_local std::uint64_t Searcher::merge_ = 0;
thread_local double Searcher::merge_work_ = 0.0;

}  // namespace

SearchResult search_single_kernel(const KernelSpec& spec, const AespaConfig& config, const Bandwidth& bandwidth,
                                  const SearchOptions& options) {
  spec.validate();
  return Searcher(spec, config, bandwidth, options).run(true, true);
}

SearchResult search_single_kernel_exhaustive(const KernelSpec& spec, const AespaConfig& config,
                                             const Bandwidth& bandwidth, const SearchOptions& options) {
  spec.validate();
  return Searcher(spec, config, bandwidth, options).run(false, false);
}

}  // namespace aespa::sched
