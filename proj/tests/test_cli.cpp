#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "aespa/cli.hpp"
#include "aespa/workloads.hpp"

using namespace aespa;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
  std::string err;
};

Run run(std::vector<std::string> args) {
  args.insert(args.begin(), "aespa");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::stringstream ls(line);
    std::string c;
    while (std::getline(ls, c, ',')) cells.push_back(c);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "aespa_cli_tests";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == cli::kOk);
  CHECK(run({}).code == cli::kInputError);
  CHECK(run({"bogus"}).code == cli::kInputError);
  CHECK(run({"cost", "--workload", "journals", "--preset", "homog-nope"}).code == cli::kInputError);
  CHECK(run({"cost", "--workload", "nope"}).code == cli::kInputError);
  CHECK(run({"cost", "--workload", "journals", "--bandwidth", "fast"}).code == cli::kInputError);
  CHECK(run({"schedule-many"}).code == cli::kInputError);
  CHECK(run({"verify", "--seeds", "3", "--max-extent", "8"}).code == cli::kOk);
}

TEST_CASE("verify with no instances prints only the header") {
  const auto r = run({"verify", "--seeds", "0"});
  CHECK(r.code == cli::kOk);
  CHECK(parse_csv(r.out).size() == 1);
}

TEST_CASE("verify flags corrupt fixtures") {
  const auto good = scratch("good.fix");
  const auto bad = scratch("bad.fix");
  {
    std::ofstream g(good);
    cli::write_fixture(g, compress(gen_uniform_random(5, 6, 0.4, 2), parse_ccf("UMCK")));
    std::ofstream b(bad);
    b << "ccf UMCK\nshape 2 3\npos 0 1 2\ncrd 0 7\nvalues 1 2\n";
  }
  CHECK(run({"verify", "--seeds", "0", "--fixture", good.string()}).code == cli::kOk);
  const auto r = run({"verify", "--seeds", "0", "--fixture", bad.string()});
  CHECK(r.code == cli::kValidationFailure);
  CHECK(r.err.find("crd") != std::string::npos);
}

TEST_CASE("cost of the dense walkthrough on two TPU PEs") {
  const auto spec = scratch("fig6a.csv");
  const auto cfg = scratch("tpu2.cfg");
  {
    std::ofstream s(spec);
    s << "id,M,K,N,d_A,d_B,ccf_A,ccf_B\nfig6a,4,4,4,1,1,UMUK,UKUN\n";
    std::ofstream c(cfg);
    c << "cluster = TpuLike 2\n";
  }
  const auto r = run({"cost", "--spec", spec.string(), "--config", cfg.string(), "--bandwidth", "unlimited"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 2);
  CHECK(rows[1][7] == "32");  // runtime
  CHECK(rows[1][6] == "0");   // memory_cycles
}

TEST_CASE("csv and json carry the same numbers") {
  const std::vector<std::string> base = {"cost", "--workload", "gnmt", "--workload", "citeseer", "--preset",
                                         "aespa-quarters"};
  auto csv_args = base;
  csv_args.insert(csv_args.end(), {"--format", "csv"});
  auto json_args = base;
  json_args.insert(json_args.end(), {"--format", "json"});
  const auto csv = parse_csv(run(csv_args).out);
  const auto tree = nlohmann::json::parse(run(json_args).out);
  std::size_t row = 1;
  for (const auto& w : tree)
    for (const auto& c : w.at("clusters")) {
      REQUIRE(row < csv.size());
      CHECK(std::stoull(csv[row][5]) == c.at("compute_cycles").get<std::uint64_t>());
      CHECK(std::stoull(csv[row][6]) == c.at("memory_cycles").get<std::uint64_t>());
      CHECK(std::stoull(csv[row][7]) == c.at("runtime_cycles").get<std::uint64_t>());
      CHECK(std::stod(csv[row][9]) == c.at("energy").get<double>());
      ++row;
    }
  CHECK(row == csv.size());
}

TEST_CASE("sweep against itself is all ones") {
  const auto r = run({"sweep", "--workload", "journals", "--workload", "speech", "--preset", "homog-eie",
                      "--bandwidth", "1e12"});
  REQUIRE(r.code == cli::kOk);
  const auto rows = parse_csv(r.out);
  REQUIRE(rows.size() == 4);  // header, two workloads, geomean
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(std::stod(rows[i][4]) == 1.0);
  CHECK(rows[3][1] == "geomean");
}

TEST_CASE("schedule-many") {
  const auto queue = scratch("queue.csv");
  {
    std::ofstream q(queue);
    q << "id,M,K,N,d_A,d_B,ccf_A,ccf_B\n"
         "red,256,256,256,1,1,UMUK,UKUN\nblue,4096,256,64,0.05,1,UMCK,UKUN\n";
  }
  const auto r = run({"schedule-many", "--queue", queue.string(), "--preset", "aespa-quarters", "--bandwidth",
                      "unlimited"});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j.at("placements").size() == 2);
  CHECK(j.at("total_cycles").get<std::uint64_t>() <= j.at("serial_cycles").get<std::uint64_t>());

  const auto empty = scratch("empty.csv");
  {
    std::ofstream q(empty);
    q << "id,M,K,N,d_A,d_B,ccf_A,ccf_B\n";
  }
  CHECK(run({"schedule-many", "--queue", empty.string()}).code == cli::kInputError);
}

TEST_CASE("reports are byte-identical across runs") {
  const std::vector<std::string> args = {"cost", "--workload", "all", "--preset", "aespa-quarters", "--search",
                                         "--format", "json"};
  const auto a = run(args);
  REQUIRE(a.code == cli::kOk);
  CHECK(a.out == run(args).out);
  const auto v = run({"verify", "--seeds", "5", "--seed", "9"});
  CHECK(v.out == run({"verify", "--seeds", "5", "--seed", "9"}).out);
}

TEST_CASE("emit-presets writes loadable configs") {
  const auto dir = scratch("presets");
  const auto r = run({"emit-presets", "--config-dir", dir.string()});
  REQUIRE(r.code == cli::kOk);
  const auto rows = parse_csv(r.out);
  CHECK(rows.size() > 9);
  CHECK(fs::exists(dir / "homog-tpu.cfg"));
  CHECK(run({"cost", "--workload", "journals", "--config", (dir / "homog-tpu.cfg").string()}).code == cli::kOk);
}

TEST_CASE("fixture text round trip") {
  const auto m = compress(gen_uniform_random(7, 9, 0.3, 1), parse_ccf("UKCM"));
  std::stringstream io;
  cli::write_fixture(io, m);
  const auto back = cli::read_fixture(io);
  CHECK(same_values(back, m));
  CHECK(back.ccf() == m.ccf());
}
