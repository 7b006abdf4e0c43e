// Acceptance checks: one PASS/FAIL line per criterion; exit status is the
// number of failures.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <string>

#include <fmt/format.h>

#include "aespa/report_io.hpp"
#include "aespa/scheduler.hpp"
#include "fixtures.hpp"
#include "oracle.hpp"

using namespace aespa;
using namespace aespa::sched;
using cost::DataflowKind;

namespace {

using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = true;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

double geo_of(const ComparisonTable& t, const std::string& preset, double ComparisonRow::*field) {
  for (const auto& r : t.geomeans)
    if (r.preset == preset) return r.*field;
  return 0.0;
}

// 1 ---------------------------------------------------------------------------------
Outcome fig6_cycles() {
  const auto t0 = Clock::now();
  const auto spec = fixture::fig6_spec();
  const auto config = fixture::fig6_config();
  const auto plans = fixture::fig6_plans();
  Outcome o;
  const char* names = "abcde";
  for (std::size_t i = 0; i < plans.size(); ++i) {
    const auto r = evaluate_plan(plans[i], spec, config, Bandwidth::infinite());
    std::vector<std::uint64_t> got;
    for (const auto& b : r.per_cluster) got.push_back(b.compute_cycles);
    if (got != fixture::kFig6Cycles[i]) {
      o.pass = false;
      o.detail += fmt::format("({}) got {} {} {} {}; ", names[i], got[0], got[1], got[2], got[3]);
    }
  }
  const double s = seconds_since(t0);
  if (s >= 1.0) o.pass = false;
  o.detail += fmt::format("five plans in {:.3f} s", s);
  return o;
}

// 2 ---------------------------------------------------------------------------------
Outcome kernel_oracle() {
  const auto t0 = Clock::now();
  struct Flow {
    kernels::KernelKind kind;
    const char* a;
    const char* b;
  };
  const Flow flows[] = {{kernels::KernelKind::DenseGemm, "UMUK", "UKUN"},
                        {kernels::KernelKind::SpmmEie, "UMCK", "UKUN"},
                        {kernels::KernelKind::SpmmEie, "UMUK", "UNCK"},
                        {kernels::KernelKind::SpgemmInner, "UMCK", "UNCK"},
                        {kernels::KernelKind::SpgemmOuter, "UKCM", "UKCN"},
                        {kernels::KernelKind::SpgemmGustavson, "UKCM", "UNCK"}};
  const double densities[] = {0.01, 0.1, 0.5, 1.0};
  std::mt19937_64 rng(20240601);
  int instances = 0, mismatches = 0, split_mismatches = 0;
  for (int i = 0; i < 128; ++i) {
    const Index M = 1 + static_cast<Index>(rng() % 64);
    const Index K = 1 + static_cast<Index>(rng() % 64);
    const Index N = 1 + static_cast<Index>(rng() % 64);
    const double da = densities[rng() % 4];
    const double db = densities[rng() % 4];
    const auto a = gen_uniform_random(M, K, da, rng());
    const auto b = gen_uniform_random(K, N, db, rng(), Role::B);
    const auto want = oracle::matmul(a, b);
    for (const auto& f : flows) {
      const auto r = kernels::run(f.kind, convert(a, parse_ccf(f.a)), convert(b, parse_ccf(f.b)));
      mismatches += oracle::grid(r.output) != want;
    }
    // K split with partial outputs merged, each half on a different dataflow.
    if (K >= 2) {
      KernelSpec s;
      s.M = M;
      s.K = K;
      s.N = N;
      s.a = std::make_shared<StoredMatrix>(a);
      s.b = std::make_shared<StoredMatrix>(b);
      const Index kc = 1 + static_cast<Index>(rng() % static_cast<std::uint64_t>(K - 1));
      PartitionPlan p;
      p.k_cut = kc;
      const auto& f0 = flows[rng() % 6];
      const auto& f1 = flows[rng() % 6];
      p.assignments = {{Region{0, M, 0, kc, 0, N}, CcfPair{parse_ccf(f0.a), parse_ccf(f0.b)}, 0},
                       {Region{0, M, kc, K, 0, N}, CcfPair{parse_ccf(f1.a), parse_ccf(f1.b)}, 0}};
      split_mismatches += oracle::grid(execute_plan(p, s)) != want;
    }
    ++instances;
  }
  const double s = seconds_since(t0);
  Outcome o;
  o.pass = mismatches == 0 && split_mismatches == 0 && instances >= 100 && s < 30.0;
  o.detail = fmt::format("{} instances x 6 layout pairs, {} mismatches, {} K-split mismatches, {:.2f} s", instances,
                         mismatches, split_mismatches, s);
  return o;
}

// 3 ---------------------------------------------------------------------------------
Outcome trip_counts() {
  struct Flow {
    const char* name;
    kernels::KernelKind kind;
    const char* a;
    const char* b;
  };
  const Flow flows[] = {{"EIE", kernels::KernelKind::SpmmEie, "UMCK", "UKUN"},
                        {"EIE(B)", kernels::KernelKind::SpmmEie, "UMUK", "UNCK"},
                        {"ExTensor", kernels::KernelKind::SpgemmInner, "UMCK", "UNCK"},
                        {"OuterSpace", kernels::KernelKind::SpgemmOuter, "UKCM", "UKCN"},
                        {"MatRaptor", kernels::KernelKind::SpgemmGustavson, "UKCM", "UNCK"}};
  const Index M = 64, K = 48, N = 40;  // 122880 iterations
  const double da = 0.1, db = 0.2;
  Outcome o;
  for (const auto& f : flows) {
    const bool sa = parse_ccf(f.a).compressed(), sb = parse_ccf(f.b).compressed();
    const double a_d = sa ? da : 1.0, b_d = sb ? db : 1.0;
    double sum = 0.0;
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const auto a = convert(gen_uniform_random(M, K, a_d, seed), parse_ccf(f.a));
      const auto b = convert(gen_uniform_random(K, N, b_d, 1000 + seed, Role::B), parse_ccf(f.b));
      sum += static_cast<double>(kernels::run(f.kind, a, b).counters.macs);
    }
    const double mean = sum / 20.0;
    const double formula = static_cast<double>(M * K * N) * a_d * b_d;
    const double err = std::abs(mean - formula) / formula;
    if (err > 0.05) o.pass = false;
    o.detail += fmt::format("{} {:.2f}%; ", f.name, 100.0 * err);
  }
  o.detail += fmt::format("M*K*N = {}", M * K * N);
  return o;
}

// 4 ---------------------------------------------------------------------------------
Outcome round_trips() {
  const auto t0 = Clock::now();
  std::mt19937_64 rng(4);
  int bad = 0;
  for (int i = 0; i < 1000; ++i) {
    const Index r = 1 + static_cast<Index>(rng() % 48), c = 1 + static_cast<Index>(rng() % 48);
    const double d = static_cast<double>(1 + rng() % 100) / 100.0;
    const auto x = gen_uniform_random(r, c, d, rng());
    const auto g = oracle::grid(x);
    for (const char* tag : {"UMCK", "UKCM", "UMUK", "UKUM"}) bad += oracle::grid(decompress(compress(x, parse_ccf(tag)))) != g;
    const auto csr = compress(x, parse_ccf("UMCK"));
    const auto back = convert(convert(csr, parse_ccf("UKCM")), parse_ccf("UMCK"));
    const auto same = [](auto p, auto q) { return std::equal(p.begin(), p.end(), q.begin(), q.end()); };
    bad += !(same(csr.pos(), back.pos()) && same(csr.crd(), back.crd()) && same(csr.values(), back.values()));
  }
  const double s = seconds_since(t0);
  Outcome o;
  o.pass = bad == 0 && s < 10.0;
  o.detail = fmt::format("1000 matrices, {} failures, {:.2f} s", bad, s);
  return o;
}

// 5 ---------------------------------------------------------------------------------
Outcome calibration_endpoints() {
  const double tpu = arch::peak_tflops(arch::preset("homog-tpu"));
  const double hybrid = arch::peak_tflops(arch::preset("homog-hybrid"));
  double lowest = 1e300;
  std::string lowest_name;
  for (const auto& n : arch::static_preset_names()) {
    if (n.rfind("homog-", 0) != 0 || n == "homog-hybrid") continue;
    const double t = arch::peak_tflops(arch::preset(n));
    if (t < lowest) {
      lowest = t;
      lowest_name = n;
    }
  }
  auto near = [](double got, double want) { return std::abs(got - want) <= 0.005 * want; };
  Outcome o;
  o.pass = near(tpu, 34.56) && near(lowest, 9.98) && near(hybrid, 8.96);
  o.detail = fmt::format("homog-tpu {:.3f}, {} {:.3f}, homog-hybrid {:.3f}", tpu, lowest_name, lowest, hybrid);
  return o;
}

// 6 ---------------------------------------------------------------------------------
Outcome parallelism_bound() {
  const auto& t = workloads::find_builtin("transformer").spec;
  const CcfPair outer{parse_ccf("UKCM"), parse_ccf("UKCN")};
  Outcome o;
  for (std::int64_t pes : {100, 1024, 7200}) {
    const auto u = cost::usable_pes(cost::ClusterConfig{DataflowKind::OuterSpaceLike, pes, 1e9}, t, outer);
    if (u != 84) o.pass = false;
  }
  const auto os = arch::preset("homog-outerspace");
  const auto mixed = arch::preset("aespa-half-tpu-outerspace");
  const auto u = cost::usable_pes(os.clusters[0], t, outer);
  const auto bw = Bandwidth::limited(1e12);
  const auto m_os = search_single_kernel(t, os, bw).report.makespan_cycles;
  const auto m_mixed = search_single_kernel(t, mixed, bw).report.makespan_cycles;
  if (u != 84 || !(m_mixed < m_os)) o.pass = false;
  o.detail = fmt::format("usable {} of {} PEs; makespan homog-outerspace {} vs half-tpu-outerspace {}", u,
                         os.clusters[0].pe_count, m_os, m_mixed);
  return o;
}

// 7 ---------------------------------------------------------------------------------
Outcome headline_trends() {
  const auto suite = workloads::builtin_suite();
  const auto& cal = arch::default_calibration();
  struct Geo {
    double speedup, edp, hybrid_speedup;
  };
  auto at = [&](const Bandwidth& bw) {
    const std::vector<AespaConfig> presets = {arch::preset("homog-eie", cal), arch::preset("homog-hybrid", cal),
                                              resolve_preset(std::string(arch::kSearchedPreset), cal, bw)};
    const auto t = compare_baselines(suite, presets, bw, "homog-eie");
    return Geo{geo_of(t, "aespa-searched", &ComparisonRow::speedup),
               geo_of(t, "aespa-searched", &ComparisonRow::edp_improvement),
               geo_of(t, "homog-hybrid", &ComparisonRow::speedup)};
  };
  const auto lim = at(Bandwidth::limited(1e12));
  const auto inf = at(Bandwidth::infinite());
  const bool c_speed = lim.speedup > 1.5;
  const bool c_edp = lim.edp > 3.0;
  const bool c_up = inf.speedup > lim.speedup && inf.edp > lim.edp;
  const bool c_hybrid = lim.speedup >= lim.hybrid_speedup && inf.speedup >= inf.hybrid_speedup;
  Outcome o;
  o.pass = c_speed && c_edp && c_up && c_hybrid;
  o.detail = fmt::format(
      "1 TB/s: speedup {:.3f} (>1.5 {}), EDP {:.3f} (>3 {}); unlimited: speedup {:.3f}, EDP {:.3f} (both up {}); "
      "hybrid speedup {:.3f}/{:.3f} (searched >= hybrid {})",
      lim.speedup, c_speed ? "ok" : "MISSED", lim.edp, c_edp ? "ok" : "MISSED", inf.speedup, inf.edp,
      c_up ? "ok" : "MISSED", lim.hybrid_speedup, inf.hybrid_speedup, c_hybrid ? "ok" : "MISSED");
  return o;
}

// 8 ---------------------------------------------------------------------------------
Outcome dominance_determinism() {
  const auto suite = workloads::builtin_suite();
  Outcome o;
  int checked = 0, lost = 0;
  std::string first_dump;
  for (const auto* name : {"aespa-quarters", "aespa-half-tpu-outerspace", "aespa-half-tpu-eie", "homog-hybrid"}) {
    const auto config = arch::preset(name);
    for (const auto& bw : {Bandwidth::limited(1e12), Bandwidth::infinite()})
      for (const auto& w : suite) {
        const auto r = search_single_kernel(w.spec, config, bw);
        for (std::size_t c = 0; c < config.clusters.size(); ++c)
          for (const auto& p : cost::supported_ccfs(config.clusters[c].dataflow)) {
            const auto single = evaluate_plan(single_cluster_plan(w.spec, c, p), w.spec, config, bw);
            ++checked;
            if (r.report.makespan_cycles > single.makespan_cycles) ++lost;
          }
      }
  }
  // Byte-identical reports across repeated runs.
  auto dump = [&] {
    std::string s;
    const auto config = arch::preset("aespa-quarters");
    for (const auto& w : suite) {
      const auto r = search_single_kernel(w.spec, config, Bandwidth::limited(1e12));
      s += io::to_json(r.plan).dump() + io::to_json(r.report).dump();
    }
    const auto t = compare_baselines(suite, {arch::preset("homog-eie"), arch::preset("aespa-quarters")},
                                     Bandwidth::limited(1e12));
    return s + io::to_json(t).dump();
  };
  const auto d1 = dump();
  const auto d2 = dump();
  const auto materialized = workloads::synth_spec(40, 30, 50, 0.2, 0.3, 77, true);
  const auto m1 = io::to_json(search_single_kernel(materialized.spec, arch::preset("aespa-quarters"),
                                                   Bandwidth::infinite()).report).dump();
  const auto again = workloads::synth_spec(40, 30, 50, 0.2, 0.3, 77, true);
  const auto m2 = io::to_json(search_single_kernel(again.spec, arch::preset("aespa-quarters"),
                                                   Bandwidth::infinite()).report).dump();
  o.pass = lost == 0 && d1 == d2 && m1 == m2;
  o.detail = fmt::format("{} single-cluster plans compared, {} beat the search; reports identical: {}", checked, lost,
                         d1 == d2 && m1 == m2 ? "yes" : "no");
  return o;
}

// 9 ---------------------------------------------------------------------------------
Outcome many_kernel() {
  const auto entries = workloads::load_spec_file(AESPA_DATA_DIR "/fig7_queue.csv");
  std::vector<KernelSpec> queue;
  for (const auto& e : entries) queue.push_back(e.spec);
  const auto config = arch::preset("aespa-quarters");
  const auto bw = Bandwidth::infinite();
  const auto r = schedule_many(queue, config, bw);
  const DataflowKind want[] = {DataflowKind::TpuLike, DataflowKind::EieLike, DataflowKind::OuterSpaceLike,
                               DataflowKind::ExTensorLike};
  Outcome o;
  if (queue.size() != 4) {
    o.pass = false;
    o.detail = "queue file does not hold four tasks";
    return o;
  }
  for (std::size_t i = 0; i < 4; ++i) {
    const auto got = config.clusters[r.placements[i].cluster].dataflow;
    if (got != want[i]) o.pass = false;
    o.detail += fmt::format("{}->{} ", queue[i].id, cost::dataflow_name(got));
  }
  std::uint64_t best = UINT64_MAX;
  std::string best_name;
  for (const auto& n : arch::static_preset_names()) {
    if (n.rfind("homog-", 0) != 0) continue;
    const auto s = serial_cycles(queue, arch::preset(n), bw);
    if (s < best) {
      best = s;
      best_name = n;
    }
  }
  if (r.total_cycles > best) o.pass = false;
  o.detail += fmt::format("; total {} vs serial {} {}", r.total_cycles, best_name, best);
  return o;
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<Outcome()>> criteria[] = {
      {"walkthrough cycle counts", fig6_cycles},
      {"kernel-oracle equivalence", kernel_oracle},
      {"analytical vs instrumented trip counts", trip_counts},
      {"format round trips", round_trips},
      {"calibration endpoints", calibration_endpoints},
      {"parallelism bound", parallelism_bound},
      {"headline trends", headline_trends},
      {"scheduler dominance and determinism", dominance_determinism},
      {"many-kernel sanity", many_kernel},
  };
  int failures = 0;
  int n = 0;
  for (const auto& [name, check] : criteria) {
    ++n;
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o = Outcome{false, fmt::format("threw: {}", e.what())};
    }
    failures += !o.pass;
    std::printf("%s %d %s: %s\n", o.pass ? "PASS" : "FAIL", n, name, o.detail.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of %d criteria passed\n", n - failures, n);
  return failures == 0 ? 0 : 1;
}
