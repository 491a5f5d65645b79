#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "avgq/errors.hpp"
#include "avgq/experiments.hpp"
#include "avgq/families.hpp"
#include "avgq/randgen.hpp"
#include "cli.hpp"
#include "doctest.h"
#include "test_support.hpp"

namespace fs = std::filesystem;
using namespace avgq;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  args.insert(args.begin(), "avgq");
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("avgq_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string write(const std::string& name, const std::string& body) const {
    const auto p = path / name;
    std::ofstream(p) << body;
    return p.string();
  }
};

}  // namespace

TEST_CASE("exact on pso(2)") {
  TempDir dir;
  const auto file = dir.write("pso2.txt", format_truth_table(pso(2)));
  const auto r = run({"exact", file});
  REQUIRE(r.code == cli::kOk);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["schema_version"] == 1);
  CHECK(j["experiment"] == "exact");
  CHECK(j["statistics"]["D_ave"]["fraction"] == "104/32");
  CHECK(j["statistics"]["D"] == 5);
}

TEST_CASE("exit codes") {
  TempDir dir;
  const auto x4 = dir.write("x4.txt", format_truth_table(testing::xor_table(4)));
  const auto bad = dir.write("bad.txt", "3\n0101\n");
  CHECK(run({"exact", x4}).code == cli::kOk);
  CHECK(run({"exact", bad}).code == cli::kParse);
  CHECK(run({"exact", (dir.path / "missing.txt").string()}).code == cli::kParse);
  CHECK(run({"--bogus-flag", "exact", x4}).code == cli::kParse);
  CHECK(run({"--format", "xml", "exact", x4}).code == cli::kParse);
  CHECK(run({"--dp-limit", "3", "exact", x4}).code == cli::kLimit);
  CHECK(run({"experiment", "no-such-thing"}).code == cli::kUnknownExperiment);
  CHECK(run({"experiment", "pso-table", "bogus=1"}).code == cli::kParse);

  // wt = 8 is far above log n.
  const auto r = run({"strategy", x4, "ecs"});
  CHECK(r.code == cli::kPrecondition);
  CHECK(r.err.find("wt(f)") != std::string::npos);
}

TEST_CASE("parse errors name the file and line") {
  TempDir dir;
  const auto bad = dir.write("bad.txt", "3\n0101\n");
  const auto r = run({"exact", bad});
  CHECK(r.err.find("bad.txt") != std::string::npos);
  CHECK(r.err.find("line 2") != std::string::npos);
}

TEST_CASE("--out writes the report to a file") {
  TempDir dir;
  const auto x4 = dir.write("x4.txt", format_truth_table(testing::xor_table(4)));
  const auto target = (dir.path / "report.json").string();
  const auto r = run({"--out", target, "exact", x4});
  REQUIRE(r.code == cli::kOk);
  CHECK(r.out.empty());
  std::ifstream in(target);
  const auto j = nlohmann::json::parse(in);
  CHECK(j["statistics"]["D_ave"]["fraction"] == "64/16");
}

TEST_CASE("csv output has a header and one row") {
  TempDir dir;
  const auto x4 = dir.write("x4.txt", format_truth_table(testing::xor_table(4)));
  const auto r = run({"--format", "csv", "exact", x4});
  REQUIRE(r.code == cli::kOk);
  std::istringstream in(r.out);
  std::string header, row, extra;
  std::getline(in, header);
  std::getline(in, row);
  CHECK_FALSE(std::getline(in, extra));
  CHECK(header.find("statistics.D_ave.fraction") != std::string::npos);
  CHECK(row.find("64/16") != std::string::npos);

  const auto table = run({"--format", "csv", "experiment", "pso-table", "n=0..5"});
  REQUIRE(table.code == cli::kOk);
  int lines = 0;
  std::istringstream tin(table.out);
  for (std::string line; std::getline(tin, line);) ++lines;
  CHECK(lines == 7);
}

TEST_CASE("output does not depend on thread count or repetition") {
  TempDir dir;
  const auto f = dir.write("f.txt", format_truth_table(sample_fixed_weight(10, 40, 7)));
  const std::vector<std::vector<std::string>> commands = {
      {"--seed", "3", "strategy", f, "naive", "--mode", "mc", "--trials", "5000"},
      {"--seed", "3", "strategy", f, "restriction:1/4", "--trials", "300"},
      {"--seed", "5", "experiment", "lemma36", "trials=2000"},
      {"--seed", "5", "experiment", "criticality", "n=8", "count=6"},
      {"--seed", "9", "sample", "12", "2^5"},
  };
  for (const auto& cmd : commands) {
    auto one = cmd, four = cmd;
    one.insert(one.begin(), {"--threads", "1"});
    four.insert(four.begin(), {"--threads", "4"});
    const auto a = run(one), b = run(four), c = run(one);
    CHECK(a.code == cli::kOk);
    CHECK(a.out == b.out);
    CHECK(a.out == c.out);
  }
}

TEST_CASE("sample writes a parseable table of the right weight") {
  const auto r = run({"--seed", "1", "sample", "9", "2^6"});
  REQUIRE(r.code == cli::kOk);
  const auto f = parse_truth_table(r.out);
  CHECK(f.num_vars() == 9);
  CHECK(f.weight() == 64);
  CHECK(f == sample_fixed_weight(9, 64, 1));
}

TEST_CASE("bounds subcommand") {
  auto value = [](std::vector<std::string> args) {
    args.insert(args.begin(), "bounds");
    const auto r = run(args);
    REQUIRE(r.code == cli::kOk);
    return nlohmann::json::parse(r.out)["bound"]["value"].get<double>();
  };
  CHECK(value({"lemma32", "m=256"}) == doctest::Approx(10));
  CHECK(value({"lemma34"}) == doctest::Approx(5));
  CHECK(value({"lemma43", "n=10", "lambda=2"}) == doctest::Approx(5 + 2 * std::sqrt(5.0)));
  CHECK(run({"bounds", "lemma32"}).code == cli::kParse);
  CHECK(run({"bounds", "nope"}).code == cli::kParse);
}

TEST_CASE("Params parsing") {
  const auto p = Params::parse({"n=2^10", "r=3..7", "x=1/4", "k=12"});
  CHECK(p.count("n", 0) == 1024);
  CHECK(p.range("r", {0, 0}) == std::pair{3, 7});
  CHECK(p.real("x", 0) == doctest::Approx(0.25));
  CHECK(p.integer("k", 0) == 12);
  CHECK(p.integer("missing", 5) == 5);
  CHECK_THROWS_AS(Params::parse({"novalue"}), ParseError);
  CHECK_THROWS_AS(p.only({"n", "r"}), ParseError);
  CHECK_NOTHROW(p.only({"n", "r", "x", "k"}));
  CHECK(parse_count("2^62") == (std::uint64_t{1} << 62));
  CHECK_THROWS_AS(parse_count("abc"), ParseError);
}
