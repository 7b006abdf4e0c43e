#include <doctest.h>

#include <sstream>

#include "aespa/workloads.hpp"
#include "oracle.hpp"

using namespace aespa;
using namespace aespa::workloads;

TEST_CASE("builtin suite matches the table") {
  const auto suite = builtin_suite();
  REQUIRE(suite.size() == 9);

  struct Row {
    const char* name;
    Index M, K, N;
    double da, db;
  };
  const Row golden[] = {
      {"chem97ZtZ", 2500, 2500, 1200, 0.0011, 1.0},   {"journals", 124, 124, 62, 0.785, 1.0},
      {"m3plates", 11000, 11000, 5500, 0.000054, 1.0}, {"synthetic_dense", 5000, 5000, 2500, 1.0, 1.0},
      {"bibd_81_3", 3200, 85000, 43000, 0.00093, 1.0}, {"speech", 7700, 2600, 1300, 0.05, 1.0},
      {"gnmt", 1600, 1000, 36000, 0.5, 0.3},           {"transformer", 32000, 84, 1000, 0.5, 0.3},
      {"citeseer", 3300, 3300, 3700, 0.0011, 0.0085},
  };
  for (std::size_t i = 0; i < 9; ++i) {
    CAPTURE(golden[i].name);
    CHECK(suite[i].name == golden[i].name);
    CHECK(suite[i].spec.M == golden[i].M);
    CHECK(suite[i].spec.K == golden[i].K);
    CHECK(suite[i].spec.N == golden[i].N);
    CHECK(suite[i].spec.d_a == golden[i].da);
    CHECK(suite[i].spec.d_b == golden[i].db);
    CHECK(suite[i].spec.ccf.b.compressed() == (golden[i].db < 1.0));
    CHECK_NOTHROW(suite[i].spec.validate());
  }
  CHECK(find_builtin("transformer").spec.K == 84);
  CHECK_THROWS_AS(find_builtin("nope"), InputError);
}

TEST_CASE("read_mtx") {
  std::istringstream diag("%%MatrixMarket matrix coordinate real general\n% comment\n2 2 2\n1 1 5\n2 2 7\n");
  const auto d = read_mtx(diag);
  CHECK(d.density == 0.5);
  CHECK(d.matrix.ccf() == parse_ccf("UMCK"));
  CHECK(oracle::grid(d.matrix) == std::vector<double>{5, 0, 0, 7});

  std::istringstream out_of_range("%%MatrixMarket matrix coordinate real general\n2 2 1\n3 1 1\n");
  CHECK_THROWS_AS(read_mtx(out_of_range), InputError);
  std::istringstream dup("%%MatrixMarket matrix coordinate real general\n2 2 2\n1 1 1\n1 1 2\n");
  CHECK_THROWS_AS(read_mtx(dup), InputError);
  std::istringstream header("%%MatrixMarket matrix array real general\n2 2\n1\n2\n3\n4\n");
  CHECK_THROWS_AS(read_mtx(header), InputError);
  std::istringstream short_file("%%MatrixMarket matrix coordinate real general\n2 2 3\n1 1 1\n");
  CHECK_THROWS_AS(read_mtx(short_file), InputError);

  std::istringstream sym("%%MatrixMarket matrix coordinate pattern symmetric\n3 3 2\n2 1\n3 3\n");
  const auto s = read_mtx(sym);
  CHECK(oracle::grid(s.matrix) == std::vector<double>{0, 1, 0, 1, 0, 0, 0, 0, 1});
  CHECK(s.density == doctest::Approx(3.0 / 9.0));
}

TEST_CASE("mtx round trip") {
  const auto m = compress(gen_uniform_random(37, 21, 0.15, 8), parse_ccf("UMCK"));
  std::stringstream io;
  write_mtx(io, m);
  const auto back = read_mtx(io);
  CHECK(oracle::grid(back.matrix) == oracle::grid(m));
  CHECK(back.density == static_cast<double>(oracle::nonzeros(oracle::grid(m))) / (37.0 * 21.0));
}

TEST_CASE("synth_spec") {
  const auto bare = synth_spec(10, 20, 30, 0.1, 0.2, 4, false);
  CHECK_FALSE(bare.spec.materialized());
  CHECK(bare.spec.M == 10);

  const auto full = synth_spec(10, 20, 30, 1.0, 0.2, 4, true);
  REQUIRE(full.spec.materialized());
  CHECK(oracle::nonzeros(oracle::grid(*full.spec.a)) == 200);
  CHECK(full.spec.b->rows() == 20);
  CHECK(full.spec.b->cols() == 30);

  const auto again = synth_spec(10, 20, 30, 1.0, 0.2, 4, true);
  CHECK(again.name == full.name);
  CHECK(oracle::grid(*again.spec.b) == oracle::grid(*full.spec.b));

  CHECK_THROWS_AS(synth_spec(0, 1, 1, 0.5, 0.5, 1, false), InputError);
  CHECK_THROWS_AS(synth_spec(1, 1, 1, 0.0, 0.5, 1, true), InputError);
}

TEST_CASE("spec files round trip") {
  const auto suite = builtin_suite();
  std::stringstream io;
  write_spec_file(io, suite);
  const auto back = read_spec_file(io);
  REQUIRE(back.size() == suite.size());
  for (std::size_t i = 0; i < suite.size(); ++i) {
    CHECK(back[i].name == suite[i].name);
    CHECK(back[i].application == suite[i].application);
    CHECK(back[i].spec.M == suite[i].spec.M);
    CHECK(back[i].spec.d_a == suite[i].spec.d_a);
    CHECK(back[i].spec.ccf == suite[i].spec.ccf);
  }

  std::istringstream bad("id,M,K,N,d_A,d_B,ccf_A,ccf_B\nx,4,4,4,1.5,1,UMUK,UKUN\n");
  CHECK_THROWS_AS(read_spec_file(bad), InputError);
  std::istringstream bad_tag("id,M,K,N,d_A,d_B,ccf_A,ccf_B\nx,4,4,4,1,1,UMUK,UKUM\n");
  CHECK_THROWS_AS(read_spec_file(bad_tag), InputError);
}
