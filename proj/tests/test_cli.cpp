#include <doctest.h>
#include <json.hpp>

#include "support.hpp"

#include <array>
#include <cstdio>
#include <sys/wait.h>

namespace {

struct Run {
  int code = -1;
  std::string out;
};

Run cli(const std::string& args) {
  const std::string cmd = std::string(ARTSEG_CLI_PATH) + " " + args + " 2>/dev/null";
  Run r;
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) r.out.append(buf.data(), n);
  const int status = pclose(pipe);
  r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return r;
}

std::string q(const std::filesystem::path& p) { return "'" + p.string() + "'"; }

}  // namespace

TEST_CASE("usage errors exit with 2") {
  CHECK(cli("").code == 2);
  CHECK(cli("frobnicate").code == 2);
  CHECK(cli("segment --workers -3 x.pgm").code == 2);
  CHECK(cli("synth --format tiff").code == 2);
  testing::TempDir dir("cli_usage");
  testing::spit(dir / "bad.conf", "colour = red\n");
  CHECK(cli("segment --config " + q(dir / "bad.conf") + " " + q(dir.path())).code == 2);
}

TEST_CASE("help and printed defaults") {
  CHECK(cli("--help").code == 0);
  const auto config = cli("segment --print-config");
  CHECK(config.code == 0);
  CHECK(config.out.find("connectivity = 8") != std::string::npos);
  const auto recipe = cli("synth --print-recipe");
  CHECK(recipe.code == 0);
  CHECK(nlohmann::json::parse(recipe.out)["schema"] == "artseg.recipe");
}

TEST_CASE("synth, segment, overlay and eval round trip") {
  testing::TempDir dir("cli_flow");
  CHECK(cli("synth --seed 4 --count 2 --out " + q(dir / "gt")).code == 0);
  const auto seg = cli("segment " + q(dir / "gt") + " --out " + q(dir / "pred"));
  CHECK(seg.code == 0);
  CHECK(std::filesystem::exists(dir / "pred/issue0002/mets.xml"));
  CHECK(std::filesystem::exists(dir / "pred/run.jsonl"));
  const auto ev = cli("eval " + q(dir / "pred") + " " + q(dir / "gt") + " --out " + q(dir / "report.json"));
  CHECK(ev.code == 0);
  CHECK(ev.out.find("100.00") != std::string::npos);
  CHECK(nlohmann::json::parse(testing::slurp(dir / "report.json"))["pctCorrect"] == 100.0);
  CHECK(cli("overlay " + q(dir / "gt/issue0001/p0001.pgm") + " --stage grid --out " + q(dir / "g.png")).code == 0);
  CHECK(cli("overlay " + q(dir / "gt/issue0001/p0001.pgm") + " --stage nope --out " + q(dir / "g.png")).code == 2);
}

TEST_CASE("failures exit with 1") {
  testing::TempDir dir("cli_fail");
  testing::spit(dir / "broken.pgm", "P5\n8 8\n255\n");
  CHECK(cli("segment " + q(dir / "broken.pgm") + " --out " + q(dir / "out")).code == 1);
  CHECK(std::filesystem::exists(dir / "out/run.jsonl"));
  std::filesystem::create_directories(dir / "nogt/issue0001");
  testing::spit(dir / "nogt/issue0001/p0001.pgm", "P5\n1 1\n255\n\x01");
  CHECK(cli("eval " + q(dir / "out") + " " + q(dir / "nogt")).code == 1);
  CHECK(cli("overlay " + q(dir / "missing.pgm") + " --out " + q(dir / "o.png")).code == 1);
}

TEST_CASE("repeated runs are byte-identical") {
  testing::TempDir dir("cli_repeat");
  REQUIRE(cli("synth --seed 12 --count 2 --out " + q(dir / "gt")).code == 0);
  REQUIRE(cli("segment " + q(dir / "gt") + " --workers 1 --out " + q(dir / "a")).code == 0);
  REQUIRE(cli("segment " + q(dir / "gt") + " --workers 3 --out " + q(dir / "b")).code == 0);
  for (const auto& e : std::filesystem::recursive_directory_iterator(dir / "a")) {
    if (!e.is_regular_file() || e.path().filename() == "run.jsonl") continue;
    const auto rel = std::filesystem::relative(e.path(), dir / "a");
    INFO(rel.string());
    CHECK(testing::slurp(e.path()) == testing::slurp(dir / "b" / rel));
  }
}
