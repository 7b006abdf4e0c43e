#include "aespa/archtemplate.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <fmt/ostream.h>

namespace aespa::arch {

double AreaModel::area_of(DataflowKind kind) const {
  for (const auto& [k, a] : area_per_pe)
    if (k == kind) return a;
  throw InputError(fmt::format("calibration has no area for {}", cost::dataflow_name(kind)));
}

std::int64_t AespaConfig::total_pes() const {
  std::int64_t n = 0;
  for (const auto& c : clusters) n += c.pe_count;
  return n;
}

double AespaConfig::used_area() const {
  double a = 0.0;
  for (const auto& c : clusters) a += static_cast<double>(c.pe_count) * area.area_of(c.dataflow);
  return a;
}

void AespaConfig::validate() const {
  if (clusters.empty()) throw InputError(fmt::format("config '{}' has no clusters", name));
  for (const auto& c : clusters)
    if (c.pe_count < 1) throw InputError(fmt::format("config '{}': cluster with {} PEs", name, c.pe_count));
  const double used = used_area();
  if (used > area.compute_area_budget * (1.0 + 1e-9))
    throw InputError(fmt::format("config '{}' uses {} mm^2, over the {} mm^2 budget", name, used,
                                 area.compute_area_budget));
}

AespaConfig allocate(const Mix& mix, const Calibration& calibration, std::string name) {
  double total = 0.0;
  for (const auto& [kind, f] : mix) {
    if (!(f >= 0.0)) throw InputError(fmt::format("mix fraction {} for {} is negative", f, cost::dataflow_name(kind)));
    total += f;
  }
  if (total > 1.0 + 1e-9) throw InputError(fmt::format("mix fractions sum to {} > 1", total));

  AespaConfig config;
  config.name = std::move(name);
  config.memory = calibration.memory;
  config.energy = calibration.energy;
  config.area = calibration.area;
  for (const auto& [kind, f] : mix) {
    const double per_pe = calibration.area.area_of(kind);
    // The relative slack keeps exact back-solved counts (202.96 / (202.96/17280)) from flooring down.
    const auto pes = static_cast<std::int64_t>(
        std::floor(f * calibration.area.compute_area_budget / per_pe * (1.0 + 1e-12)));
    if (pes > 0) config.clusters.push_back(ClusterConfig{kind, pes, calibration.memory.frequency});
  }
  if (config.clusters.empty()) throw InputError(fmt::format("mix for '{}' allocates no PEs", config.name));
  config.validate();
  return config;
}

double peak_tflops(const AespaConfig& config) {
  double flops = 0.0;
  for (const auto& c : config.clusters) flops += static_cast<double>(c.pe_count) * 2.0 * c.frequency;
  return flops / 1e12;
}

const Calibration& default_calibration() {
  static const Calibration calibration = [] {
    std::istringstream in{std::string(default_calibration_text())};
    return parse_calibration(in, "data/calibration.cfg");
  }();
  return calibration;
}

std::vector<std::string> static_preset_names() {
  return {"homog-tpu",      "homog-eie",       "homog-extensor",          "homog-outerspace",   "homog-matraptor",
          "homog-hybrid",   "aespa-quarters",  "aespa-half-tpu-outerspace", "aespa-half-tpu-eie"};
}

std::vector<std::string> all_preset_names() {
  auto names = static_preset_names();
  names.emplace_back(kSearchedPreset);
  return names;
}

Mix preset_mix(std::string_view name) {
  using K = DataflowKind;
  if (name == "homog-tpu") return {{K::TpuLike, 1.0}};
  if (name == "homog-eie") return {{K::EieLike, 1.0}};
  if (name == "homog-extensor") return {{K::ExTensorLike, 1.0}};
  if (name == "homog-outerspace") return {{K::OuterSpaceLike, 1.0}};
  if (name == "homog-matraptor") return {{K::MatRaptorLike, 1.0}};
  if (name == "homog-hybrid") return {{K::HybridLike, 1.0}};
  if (name == "aespa-quarters")
    return {{K::TpuLike, 0.25}, {K::EieLike, 0.25}, {K::ExTensorLike, 0.25}, {K::OuterSpaceLike, 0.25}};
  if (name == "aespa-half-tpu-outerspace") return {{K::TpuLike, 0.5}, {K::OuterSpaceLike, 0.5}};
  if (name == "aespa-half-tpu-eie") return {{K::TpuLike, 0.5}, {K::EieLike, 0.5}};
  if (name == kSearchedPreset)
    throw InputError("aespa-searched has no fixed mix; it is produced by the configuration search");
  throw InputError(fmt::format("unknown preset '{}'", name));
}

AespaConfig preset(std::string_view name, const Calibration& calibration) {
  return allocate(preset_mix(name), calibration, std::string(name));
}

// ---------------------------------------------------------------------------

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

struct LineError {
  std::string_view source;
  int line;

  [[noreturn]] void fail(const std::string& what) const {
    throw InputError(fmt::format("{}:{}: {}", source, line, what));
  }
};

double parse_number(std::string_view text, const LineError& where) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || !std::isfinite(v)) where.fail(fmt::format("bad number '{}'", text));
  return v;
}

std::pair<std::string_view, std::string_view> split_two(std::string_view value, const LineError& where) {
  const auto sp = value.find_first_of(" \t");
  if (sp == std::string_view::npos) where.fail(fmt::format("expected '<Dataflow> <number>', got '{}'", value));
  return {trim(value.substr(0, sp)), trim(value.substr(sp))};
}

// Applies a calibration key; returns false if the key is not a calibration key.
bool apply_calibration_key(Calibration& c, std::string_view key, std::string_view value, const LineError& where) {
  if (key == "label") {
    c.label = std::string(value);
  } else if (key == "frequency_hz") {
    c.memory.frequency = parse_number(value, where);
  } else if (key == "hbm_bandwidth_Bps") {
    c.memory.hbm_bandwidth = parse_number(value, where);
  } else if (key == "hbm_capacity_bytes") {
    c.memory.hbm_capacity = parse_number(value, where);
  } else if (key == "scratchpad_capacity_bytes") {
    c.memory.scratchpad_capacity = parse_number(value, where);
  } else if (key == "scratchpad_bandwidth_Bps") {
    c.memory.scratchpad_bandwidth = parse_number(value, where);
  } else if (key == "area_budget_mm2") {
    c.area.compute_area_budget = parse_number(value, where);
  } else if (key.starts_with("area_per_pe_mm2.")) {
    DataflowKind kind{};
    try {
      kind = cost::parse_dataflow(key.substr(16));
    } catch (const InputError& e) {
      where.fail(e.what());
    }
    const double a = parse_number(value, where);
    if (!(a > 0.0)) where.fail("per-PE area must be positive");
    auto it = std::find_if(c.area.area_per_pe.begin(), c.area.area_per_pe.end(),
                           [&](const auto& p) { return p.first == kind; });
    if (it == c.area.area_per_pe.end()) c.area.area_per_pe.emplace_back(kind, a);
    else it->second = a;
  } else if (key == "energy.e_mac") {
    c.energy.e_mac = parse_number(value, where);
  } else if (key == "energy.e_sram_word") {
    c.energy.e_sram_word = parse_number(value, where);
  } else if (key == "energy.e_hbm_word") {
    c.energy.e_hbm_word = parse_number(value, where);
  } else if (key == "energy.e_idle_pe_cycle") {
    c.energy.e_idle_pe_cycle = parse_number(value, where);
  } else {
    return false;
  }
  return true;
}

template <typename OnOther>
void for_each_entry(std::istream& in, std::string_view source, OnOther&& on_entry) {
  std::string raw;
  int line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = raw;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const LineError where{source, line_no};
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) where.fail(fmt::format("expected 'key = value', got '{}'", line));
    on_entry(trim(line.substr(0, eq)), trim(line.substr(eq + 1)), where);
  }
}

void check_calibration(const Calibration& c, std::string_view source) {
  if (!(c.area.compute_area_budget > 0.0)) throw InputError(fmt::format("{}: area budget must be positive", source));
  if (!(c.memory.frequency > 0.0)) throw InputError(fmt::format("{}: frequency must be positive", source));
  const auto& e = c.energy;
  if (e.e_mac < 0 || e.e_sram_word < 0 || e.e_hbm_word < 0 || e.e_idle_pe_cycle < 0)
    throw InputError(fmt::format("{}: energy parameters must be non-negative", source));
}

}  // namespace

Calibration parse_calibration(std::istream& in, std::string_view source) {
  Calibration c;
  c.area.area_per_pe.clear();
  for_each_entry(in, source, [&](std::string_view key, std::string_view value, const LineError& where) {
    if (!apply_calibration_key(c, key, value, where)) where.fail(fmt::format("unknown calibration key '{}'", key));
  });
  check_calibration(c, source);
  return c;
}

AespaConfig parse_config(std::istream& in, const Calibration& base, std::string_view source) {
  Calibration c = base;
  std::string name = "custom";
  bool is_static = true;
  std::vector<ClusterConfig> clusters;
  Mix mix;
  std::string preset_name;
  for_each_entry(in, source, [&](std::string_view key, std::string_view value, const LineError& where) {
    if (apply_calibration_key(c, key, value, where)) return;
    if (key == "name") {
      name = std::string(value);
    } else if (key == "static") {
      if (value != "true" && value != "false") where.fail("static must be true or false");
      is_static = value == "true";
    } else if (key == "preset") {
      preset_name = std::string(value);
    } else if (key == "cluster" || key == "mix") {
      const auto [kind_text, num_text] = split_two(value, where);
      DataflowKind kind{};
      try {
        kind = cost::parse_dataflow(kind_text);
      } catch (const InputError& e) {
        where.fail(e.what());
      }
      const double num = parse_number(num_text, where);
      if (key == "mix") {
        mix.emplace_back(kind, num);
      } else {
        if (num < 1 || num != std::floor(num)) where.fail(fmt::format("PE count '{}' must be a positive integer", num_text));
        clusters.push_back(ClusterConfig{kind, static_cast<std::int64_t>(num), 0.0});
      }
    } else {
      where.fail(fmt::format("unknown key '{}'", key));
    }
  });
  check_calibration(c, source);
  const int sources = !clusters.empty() + !mix.empty() + !preset_name.empty();
  if (sources != 1)
    throw InputError(fmt::format("{}: give exactly one of 'cluster' lines, 'mix' lines or a 'preset' line", source));

  AespaConfig config;
  if (!preset_name.empty()) {
    config = preset(preset_name, c);
    if (name != "custom") config.name = name;
  } else if (!mix.empty()) {
    config = allocate(mix, c, name);
  } else {
    config.name = name;
    config.memory = c.memory;
    config.energy = c.energy;
    config.area = c.area;
    for (auto& cl : clusters) cl.frequency = c.memory.frequency;
    config.clusters = std::move(clusters);
  }
  config.is_static = is_static;
  config.validate();
  return config;
}

AespaConfig load_config(const std::string& path, const Calibration& base) {
  std::ifstream in(path);
  if (!in) throw InputError(fmt::format("cannot open config '{}'", path));
  return parse_config(in, base, path);
}

namespace {

void write_calibration_keys(std::ostream& out, const MemorySystem& m, const AreaModel& a, const EnergyParams& e) {
  fmt::print(out, "frequency_hz = {}\n", m.frequency);
  fmt::print(out, "hbm_bandwidth_Bps = {}\n", m.hbm_bandwidth);
  fmt::print(out, "hbm_capacity_bytes = {}\n", m.hbm_capacity);
  fmt::print(out, "scratchpad_capacity_bytes = {}\n", m.scratchpad_capacity);
  fmt::print(out, "scratchpad_bandwidth_Bps = {}\n", m.scratchpad_bandwidth);
  fmt::print(out, "area_budget_mm2 = {}\n", a.compute_area_budget);
  for (const auto& [kind, area] : a.area_per_pe)
    fmt::print(out, "area_per_pe_mm2.{} = {}\n", cost::dataflow_name(kind), area);
  fmt::print(out, "energy.e_mac = {}\n", e.e_mac);
  fmt::print(out, "energy.e_sram_word = {}\n", e.e_sram_word);
  fmt::print(out, "energy.e_hbm_word = {}\n", e.e_hbm_word);
  fmt::print(out, "energy.e_idle_pe_cycle = {}\n", e.e_idle_pe_cycle);
}

}  // namespace

void write_calibration(std::ostream& out, const Calibration& c) {
  fmt::print(out, "label = {}\n", c.label);
  write_calibration_keys(out, c.memory, c.area, c.energy);
}

void write_config(std::ostream& out, const AespaConfig& config) {
  fmt::print(out, "name = {}\n", config.name);
  fmt::print(out, "static = {}\n", config.is_static ? "true" : "false");
  write_calibration_keys(out, config.memory, config.area, config.energy);
  for (const auto& c : config.clusters) fmt::print(out, "cluster = {} {}\n", cost::dataflow_name(c.dataflow), c.pe_count);
}

}  // namespace aespa::arch
