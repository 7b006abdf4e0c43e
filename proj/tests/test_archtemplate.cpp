#include <doctest.h>

#include <sstream>

#include "aespa/archtemplate.hpp"

using namespace aespa;
using namespace aespa::arch;

TEST_CASE("homogeneous presets") {
  const auto tpu = preset("homog-tpu");
  REQUIRE(tpu.clusters.size() == 1);
  CHECK(tpu.clusters[0].dataflow == DataflowKind::TpuLike);
  CHECK(tpu.used_area() <= tpu.area.compute_area_budget + 1e-9);
  CHECK(tpu.used_area() > tpu.area.compute_area_budget - tpu.area.area_of(DataflowKind::TpuLike));

  const auto half = preset("aespa-half-tpu-outerspace");
  REQUIRE(half.clusters.size() == 2);
  CHECK(half.clusters[0].dataflow == DataflowKind::TpuLike);
  CHECK(half.clusters[1].dataflow == DataflowKind::OuterSpaceLike);
  const double budget = half.area.compute_area_budget;
  CHECK(half.clusters[0].pe_count * half.area.area_of(DataflowKind::TpuLike) <= budget / 2 + 1e-9);
  CHECK(half.clusters[1].pe_count * half.area.area_of(DataflowKind::OuterSpaceLike) <= budget / 2 + 1e-9);

  CHECK(preset("aespa-quarters").clusters.size() == 4);
  CHECK_THROWS_AS(preset("homog-nothing"), InputError);
  CHECK_THROWS_AS(preset(kSearchedPreset), InputError);
}

TEST_CASE("peak TFLOPS endpoints") {
  CHECK(peak_tflops(preset("homog-tpu")) == doctest::Approx(34.56).epsilon(0.005));
  CHECK(peak_tflops(preset("homog-hybrid")) == doctest::Approx(8.96).epsilon(0.005));
  double lowest = 1e300;
  for (const auto* n : {"homog-tpu", "homog-eie", "homog-extensor", "homog-outerspace", "homog-matraptor"})
    lowest = std::min(lowest, peak_tflops(preset(n)));
  CHECK(lowest == doctest::Approx(9.98).epsilon(0.005));

  AespaConfig unit;
  unit.clusters = {ClusterConfig{DataflowKind::TpuLike, 1, 1e9}};
  CHECK(peak_tflops(unit) == doctest::Approx(2e-3));
}

TEST_CASE("allocate respects the area budget") {
  const auto& cal = default_calibration();
  const auto c = allocate({{DataflowKind::TpuLike, 0.5}, {DataflowKind::OuterSpaceLike, 0.5}}, cal);
  double area = 0;
  for (const auto& cl : c.clusters) area += cl.pe_count * cal.area.area_of(cl.dataflow);
  CHECK(area <= cal.area.compute_area_budget + 1e-9);
  CHECK(area == doctest::Approx(c.used_area()));
  CHECK_NOTHROW(c.validate());

  CHECK_THROWS_AS(allocate({}, cal), InputError);
  CHECK_THROWS_AS(allocate({{DataflowKind::TpuLike, 0.0}}, cal), InputError);
  CHECK_THROWS_AS(allocate({{DataflowKind::TpuLike, 0.7}, {DataflowKind::EieLike, 0.7}}, cal), InputError);
}

TEST_CASE("calibration and config files round trip") {
  std::stringstream s;
  write_calibration(s, default_calibration());
  CHECK(parse_calibration(s) == default_calibration());

  for (const auto& name : static_preset_names()) {
    const auto c = preset(name);
    std::stringstream t;
    write_config(t, c);
    CHECK(parse_config(t) == c);
  }
}

TEST_CASE("config files: mix, cluster and errors") {
  std::istringstream mix("name = mine\nmix = TpuLike 0.25\nmix = EieLike 0.75\n");
  const auto m = parse_config(mix);
  REQUIRE(m.clusters.size() == 2);
  CHECK(m.clusters[1].dataflow == DataflowKind::EieLike);

  std::istringstream explicit_clusters("cluster = ExTensorLike 2\ncluster = TpuLike 2\nhbm_bandwidth_Bps = 5e11\n");
  const auto e = parse_config(explicit_clusters);
  REQUIRE(e.clusters.size() == 2);
  CHECK(e.clusters[0].pe_count == 2);
  CHECK(e.memory.hbm_bandwidth == 5e11);

  std::istringstream bad_key("flux_capacitor = 1\ncluster = TpuLike 1\n");
  CHECK_THROWS_AS(parse_config(bad_key), InputError);
  std::istringstream empty("name = x\n");
  CHECK_THROWS_AS(parse_config(empty), InputError);
  std::istringstream zero_mix("mix = TpuLike 0\n");
  CHECK_THROWS_AS(parse_config(zero_mix), InputError);
}
