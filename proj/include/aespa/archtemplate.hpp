#pragma once

// Heterogeneous accelerator template: a fixed compute-area budget split into
// sub-accelerator clusters, plus the shared memory system.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "aespa/costmodel.hpp"

namespace aespa::arch {

using cost::ClusterConfig;
using cost::DataflowKind;
using cost::EnergyParams;

struct AreaModel {
  /// mm^2 per PE, indexed by DataflowKind, including the amortized controller share.
  std::vector<std::pair<DataflowKind, double>> area_per_pe;
  double compute_area_budget = 202.96;

  [[nodiscard]] double area_of(DataflowKind kind) const;
  friend bool operator==(const AreaModel&, const AreaModel&) = default;
};

struct MemorySystem {
  double hbm_bandwidth = 1e12;              // bytes/s
  double hbm_capacity = 32.0 * (1ull << 30);  // bytes
  double scratchpad_capacity = 64.0 * (1ull << 20);
  double scratchpad_bandwidth = 8.192e12;
  double frequency = 1e9;

  friend bool operator==(const MemorySystem&, const MemorySystem&) = default;
};

/// Everything a preset is derived from: per-PE areas, memory constants, energy.
struct Calibration {
  std::string label;
  AreaModel area;
  MemorySystem memory;
  EnergyParams energy;

  friend bool operator==(const Calibration&, const Calibration&) = default;
};

struct AespaConfig {
  std::string name;
  /// False for configurations produced by a search rather than fixed ratios.
  bool is_static = true;
  std::vector<ClusterConfig> clusters;
  MemorySystem memory;
  EnergyParams energy;
  AreaModel area;

  [[nodiscard]] std::int64_t total_pes() const;
  [[nodiscard]] double used_area() const;
  /// Throws InputError if empty or over the area budget.
  void validate() const;

  friend bool operator==(const AespaConfig&, const AespaConfig&) = default;
};

using Mix = std::vector<std::pair<DataflowKind, double>>;

/// pe_count = floor(fraction * budget / area_per_pe); zero-PE clusters are dropped.
AespaConfig allocate(const Mix& mix, const Calibration& calibration, std::string name = "custom");

/// Sum over clusters of pe_count * 2 flops * frequency, in TFLOPS/s.
double peak_tflops(const AespaConfig& config);

/// The shipped calibration (data/calibration.cfg, embedded at build time).
const Calibration& default_calibration();
std::string_view default_calibration_text();

inline constexpr std::string_view kSearchedPreset = "aespa-searched";

/// Fixed-ratio preset names, in report order. aespa-searched is resolved by the scheduler.
std::vector<std::string> static_preset_names();
std::vector<std::string> all_preset_names();
Mix preset_mix(std::string_view name);
AespaConfig preset(std::string_view name, const Calibration& calibration = default_calibration());

// --- key = value file format -------------------------------------------------

Calibration parse_calibration(std::istream& in, std::string_view source = "<stream>");
/// Loads a config file: calibration keys override `base`, then `cluster` or
/// `mix` lines (or a `preset` line) define the clusters.
AespaConfig parse_config(std::istream& in, const Calibration& base = default_calibration(),
                         std::string_view source = "<stream>");
AespaConfig load_config(const std::string& path, const Calibration& base = default_calibration());

void write_calibration(std::ostream& out, const Calibration& calibration);
void write_config(std::ostream& out, const AespaConfig& config);

}  // namespace aespa::arch
