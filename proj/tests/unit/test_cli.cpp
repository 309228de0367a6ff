#include <doctest.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "../../tools/cli.hpp"
#include "axbench/container.hpp"
#include "axbench/external.hpp"
#include "axbench/oracle.hpp"
#include "axbench/report.hpp"
#include "axbench/zoo.hpp"
#include "fixtures.hpp"

using namespace axbench;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string slurp(const std::filesystem::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("exit codes") {
  CHECK(run({"--help"}).code == 0);
  CHECK(run({}).code == 1);
  CHECK(run({"frobnicate"}).code == 1);
  CHECK(run({"generate", "--n", "10"}).code == 1);
  CHECK(run({"generate", "--n", "-3", "--out", "x"}).code == 1);
  CHECK(run({"generate", "--scm", "bogus", "--n", "3", "--out", "x"}).code == 1);
  const auto missing = run({"evaluate", "--model", "identity", "--metrics", "composition", "--dataset", "/nonexistent/d.cfds"});
  CHECK(missing.code == 2);
  CHECK(missing.err.find("error") != std::string::npos);
}

TEST_CASE("effectiveness without oracles is a usage error") {
  fixtures::TempDir dir;
  const auto data = (dir / "d.cfds").string();
  REQUIRE(run({"generate", "--n", "20", "--out", data}).code == 0);
  const auto r = run({"evaluate", "--model", "identity", "--dataset", data});
  CHECK(r.code == 1);
  CHECK(r.err.find("--oracle") != std::string::npos);
}

TEST_CASE("generate writes a container") {
  fixtures::TempDir dir;
  const auto path = dir / "d.cfds";
  const auto r = run({"generate", "--scm", "confounded", "--n", "50", "--seed", "4", "--out", path.string(), "--csv",
                      (dir / "d.csv").string()});
  REQUIRE(r.code == 0);
  CHECK(slurp(path).substr(0, 6) == "CFDS1\n");
  const auto d = read_container(path);
  CHECK(d.size() == 50);
  const auto expected = sample_dataset(ScmKind::confounded_no_support(0.05), 50, 4);
  CHECK(std::ranges::equal(d.all_parents(), expected.all_parents()));
  CHECK(slurp(dir / "d.csv").rfind("digit,hue\n", 0) == 0);
}

TEST_CASE("evaluate is reproducible byte for byte") {
  fixtures::TempDir dir;
  const auto data = (dir / "d.cfds").string();
  REQUIRE(run({"generate", "--n", "300", "--seed", "2", "--out", data}).code == 0);
  REQUIRE(run({"train-oracle", "--dataset", data, "--parent", "digit", "--epochs", "2", "--out",
               (dir / "digit.json").string()})
              .code == 0);
  REQUIRE(run({"train-oracle", "--dataset", data, "--parent", "hue", "--out", (dir / "hue.json").string()}).code == 0);
  auto evaluate = [&](const std::string& tag) {
    return run({"evaluate", "--model", "blend:0.5", "--dataset", data, "--oracle", (dir / "digit.json").string(),
                "--oracle", (dir / "hue.json").string(), "--m", "3", "--seeds", "0,1", "--n-samples", "40", "--json",
                (dir / (tag + ".json")).string(), "--csv", (dir / (tag + ".csv")).string(), "--markdown",
                (dir / (tag + ".md")).string()});
  };
  const auto a = evaluate("a");
  const auto b = evaluate("b");
  REQUIRE(a.code == 0);
  REQUIRE(b.code == 0);
  CHECK(a.out == b.out);
  for (const char* ext : {".json", ".csv", ".md"}) {
    CHECK(slurp(dir / (std::string("a") + ext)) == slurp(dir / (std::string("b") + ext)));
  }
  const auto report = report_from_json(slurp(dir / "a.json"));
  CHECK(report.model == "blend:0.5");
  CHECK(report.seeds == std::vector<std::uint64_t>{0, 1});
  CHECK(report.oracle_quality.size() == 2);

  const auto md = run({"report", (dir / "a.json").string(), (dir / "b.json").string()});
  REQUIRE(md.code == 0);
  CHECK(md.out.find("| blend:0.5 |") != std::string::npos);
  CHECK(run({"report", (dir / "missing.json").string()}).code == 2);
}

TEST_CASE("evaluate can train its own oracles and draw a mosaic") {
  fixtures::TempDir dir;
  const auto data = (dir / "d.cfds").string();
  REQUIRE(run({"generate", "--n", "200", "--seed", "5", "--out", data}).code == 0);
  const auto r = run({"evaluate", "--model", "ground-truth", "--dataset", data, "--train-dataset", data, "--m", "2",
                      "--seeds", "0", "--n-samples", "10", "--mosaic", (dir / "m.png").string(), "--mosaic-rows",
                      "3"});
  REQUIRE(r.code == 0);
  CHECK(slurp(dir / "m.png").substr(1, 3) == "PNG");
  CHECK(r.out.find("| ground-truth |") != std::string::npos);
}

TEST_CASE("intervene reports support and writes the resampled set") {
  fixtures::TempDir dir;
  const auto src = (dir / "c.cfds").string();
  REQUIRE(run({"generate", "--scm", "confounded-full", "--n", "30000", "--seed", "1", "--out", src}).code == 0);
  const auto ok = run({"intervene", "--dataset", src, "--out", (dir / "i.cfds").string(), "--n-out", "500",
                       "--support-json", (dir / "s.json").string()});
  REQUIRE(ok.code == 0);
  CHECK(ok.out.find("full support") != std::string::npos);
  CHECK(read_container(dir / "i.cfds").size() == 500);
  CHECK(slurp(dir / "s.json").find("\"full_support\"") != std::string::npos);

  const auto bad = (dir / "n.cfds").string();
  REQUIRE(run({"generate", "--scm", "confounded", "--n", "3000", "--seed", "1", "--out", bad}).code == 0);
  const auto fail = run({"intervene", "--dataset", bad, "--out", (dir / "j.cfds").string()});
  CHECK(fail.code == 2);
  CHECK(fail.err.find("simulated intervention impossible") != std::string::npos);
  CHECK_FALSE(std::filesystem::exists(dir / "j.cfds"));
}

TEST_CASE("train-oracle writes a loadable oracle") {
  fixtures::TempDir dir;
  const auto data = (dir / "d.cfds").string();
  REQUIRE(run({"generate", "--n", "400", "--seed", "8", "--out", data}).code == 0);
  const auto r = run({"train-oracle", "--dataset", data, "--parent", "hue", "--out", (dir / "h.json").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("mean absolute error") != std::string::npos);
  const auto o = PseudoOracle::load(dir / "h.json");
  CHECK(o.parent() == 1);
  CHECK(run({"train-oracle", "--dataset", data, "--parent", "shade", "--out", (dir / "x.json").string()}).code == 2);
}

TEST_CASE("external evaluation over stdio matches in-process") {
  fixtures::TempDir dir;
  const auto data = (dir / "d.cfds").string();
  REQUIRE(run({"generate", "--n", "120", "--seed", "6", "--out", data}).code == 0);
  auto evaluate = [&](const std::string& model, const std::string& tag) {
    return run({"evaluate", "--model", model, "--dataset", data, "--metrics", "composition,reversibility,commutativity",
                "--m", "3", "--seeds", "0,1", "--n-samples", "25", "--json", (dir / (tag + ".json")).string()});
  };
  REQUIRE(evaluate("ground-truth", "local").code == 0);
  const auto ext = evaluate(std::string("external:stdio:") + AXBENCH_TOOL_PATH +
                                " serve-zoo --model ground-truth --pipelining 2 --dataset " + data,
                            "remote");
  REQUIRE(ext.code == 0);
  const auto local = report_from_json(slurp(dir / "local.json"));
  const auto remote = report_from_json(slurp(dir / "remote.json"));
  REQUIRE(local.summaries.size() == remote.summaries.size());
  CHECK(remote.failed == 0);
  for (std::size_t c = 0; c < local.summaries.size(); ++c) {
    CHECK(std::abs(local.summaries[c].mean - remote.summaries[c].mean) <= 1e-9);
  }
}

TEST_CASE("AXBENCH_SEED must be numeric") {
  ::setenv("AXBENCH_SEED", "abc", 1);
  const auto r = run({"generate", "--n", "3", "--out", "/tmp/never"});
  ::unsetenv("AXBENCH_SEED");
  CHECK(r.code == 1);
}
