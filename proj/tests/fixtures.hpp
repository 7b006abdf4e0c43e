#pragma once

// The four-by-four walkthrough and the four-task queue, shared by the unit
// and acceptance tests.

#include <memory>
#include <string>
#include <utility>
#include <vector>

#include "aespa/scheduler.hpp"

namespace fixture {

using namespace aespa;
using sched::Assignment;
using sched::PartitionPlan;
using sched::Region;

enum Cluster : std::size_t { kTpu = 0, kEie = 1, kExt = 2, kOs = 3 };

/// Four clusters of two PEs each.
inline arch::AespaConfig fig6_config() {
  arch::AespaConfig c;
  c.name = "fig6";
  c.clusters = {{cost::DataflowKind::TpuLike, 2, 1e9},
                {cost::DataflowKind::EieLike, 2, 1e9},
                {cost::DataflowKind::ExTensorLike, 2, 1e9},
                {cost::DataflowKind::OuterSpaceLike, 2, 1e9}};
  return c;
}

/// M=N=K=4. Rows 0-1 of A and columns 0-1 of B carry the dense-ish work; the
/// other halves and the K1 slice each hold 25% nonzeros.
inline KernelSpec fig6_spec() {
  std::vector<double> a(16, 0.0), b(16, 0.0);
  for (auto [m, k] : {std::pair{0, 0}, {0, 1}, {0, 2}, {1, 0}, {1, 1}, {2, 0}, {3, 3}}) a[m * 4 + k] = 1.0 + m + k;
  for (auto [k, n] : {std::pair{0, 0}, {1, 0}, {2, 0}, {0, 1}, {1, 1}, {0, 2}, {3, 3}}) b[k * 4 + n] = 1.0 + k + 2 * n;
  KernelSpec s;
  s.id = "fig6";
  s.M = s.K = s.N = 4;
  s.d_a = s.d_b = 7.0 / 16.0;
  s.ccf = CcfPair{parse_ccf("UMUK"), parse_ccf("UKUN")};
  s.a = std::make_shared<StoredMatrix>(StoredMatrix::dense(4, 4, canonical_dense(Role::A), a));
  s.b = std::make_shared<StoredMatrix>(StoredMatrix::dense(4, 4, canonical_dense(Role::B), b));
  return s;
}

inline const CcfPair kDense{parse_ccf("UMUK"), parse_ccf("UKUN")};
inline const CcfPair kEieA{parse_ccf("UMCK"), parse_ccf("UKUN")};
inline const CcfPair kEieB{parse_ccf("UMUK"), parse_ccf("UNCK")};
inline const CcfPair kInner{parse_ccf("UMCK"), parse_ccf("UNCK")};
inline const CcfPair kOuter{parse_ccf("UKCM"), parse_ccf("UKCN")};

inline PartitionPlan plan_a() {
  PartitionPlan p;
  p.assignments = {{Region{0, 4, 0, 4, 0, 4}, kDense, kTpu}};
  return p;
}

inline PartitionPlan plan_b() {
  PartitionPlan p;
  p.m_cut = 2;
  p.assignments = {{Region{0, 2, 0, 4, 0, 4}, kDense, kTpu}, {Region{2, 4, 0, 4, 0, 4}, kEieA, kEie}};
  return p;
}

inline PartitionPlan plan_c() {
  PartitionPlan p;
  p.m_cut = 2;
  p.n_cut = 2;
  p.assignments = {{Region{0, 2, 0, 4, 0, 2}, kDense, kTpu},
                   {Region{0, 2, 0, 4, 2, 4}, kEieB, kEie},
                   {Region{2, 4, 0, 4, 0, 2}, kEieA, kEie},
                   {Region{2, 4, 0, 4, 2, 4}, kInner, kExt}};
  return p;
}

inline PartitionPlan plan_d() {
  PartitionPlan p;
  p.k_cut = 2;
  p.assignments = {{Region{0, 4, 0, 2, 0, 4}, kDense, kTpu}, {Region{0, 4, 2, 4, 0, 4}, kOuter, kOs}};
  return p;
}

inline PartitionPlan plan_e() {
  PartitionPlan p;
  p.m_cut = 2;
  p.n_cut = 2;
  p.k_cut = 2;
  p.assignments = {{Region{0, 2, 0, 2, 0, 2}, kDense, kTpu},
                   {Region{0, 2, 0, 2, 2, 4}, kEieB, kEie},
                   {Region{2, 4, 0, 2, 0, 2}, kEieA, kEie},
                   {Region{2, 4, 0, 2, 2, 4}, kInner, kExt},
                   {Region{0, 4, 2, 4, 0, 4}, kOuter, kOs}};
  return p;
}

/// Expected compute cycles per cluster (TPU, EIE, ExTensor, OuterSpace) for plans a-e.
inline const std::vector<std::vector<std::uint64_t>> kFig6Cycles = {
    {32, 0, 0, 0}, {16, 4, 0, 0}, {8, 4, 1, 0}, {16, 0, 0, 1}, {4, 2, 1, 1}};

inline std::vector<PartitionPlan> fig6_plans() { return {plan_a(), plan_b(), plan_c(), plan_d(), plan_e()}; }

/// Queue whose four tasks each suit one cluster type: dense; one sparse
/// operand with a long M; sparse with a long K; sparse with a long N.
inline std::vector<KernelSpec> fig7_queue() {
  auto spec = [](const char* id, Index M, Index K, Index N, double da, double db) {
    KernelSpec s;
    s.id = id;
    s.M = M;
    s.K = K;
    s.N = N;
    s.d_a = da;
    s.d_b = db;
    s.ccf = default_delivery(da, db);
    return s;
  };
  return {spec("red", 256, 256, 256, 1.0, 1.0), spec("blue", 4096, 256, 64, 0.05, 1.0),
          spec("green", 8, 8192, 8, 0.1, 0.1), spec("orange", 64, 8, 8192, 0.1, 0.1)};
}

}  // namespace fixture
