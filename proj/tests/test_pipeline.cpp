#include <doctest.h>
#include <json.hpp>

#include "support.hpp"

#include "artseg/pipeline.hpp"
#include "artseg/synth.hpp"

#include <sstream>

using namespace artseg;
using nlohmann::json;

namespace {

std::vector<json> json_lines(const std::string& text) {
  std::vector<json> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(json::parse(line));
  return out;
}

// Three single-page synthetic maps written as loose files.
std::vector<std::filesystem::path> three_pages(const testing::TempDir& dir) {
  synth::RecipeFile recipe;
  synth::IssueTemplate tmpl;
  tmpl.pages = {1, 1};
  tmpl.spanning = {0, 0};
  recipe.tmpl = tmpl;
  synth::write_corpus(dir / "corpus", recipe, 5, 3);
  std::vector<std::filesystem::path> out;
  for (int i = 1; i <= 3; ++i) {
    const auto to = dir / ("page" + std::to_string(i) + ".pgm");
    std::filesystem::copy_file(dir / ("corpus/issue000" + std::to_string(i) + "/p0001.pgm"), to);
    out.push_back(to);
  }
  return out;
}

}  // namespace

TEST_CASE("a corrupt page fails alone and the others are written") {
  testing::TempDir dir("pipeline_corrupt");
  auto pages = three_pages(dir);
  testing::spit(pages[1], "P5\n10 10\n255\n\x01\x02");
  const auto summary = run_segment(PipelineConfig{}, pages, "batch", dir / "out");
  CHECK(summary.issues == 1);
  CHECK(summary.pages == 3);
  CHECK(summary.failedPages == 1);
  CHECK(std::filesystem::exists(dir / "out/batch/alto/p0001.xml"));
  CHECK_FALSE(std::filesystem::exists(dir / "out/batch/alto/p0002.xml"));
  CHECK(std::filesystem::exists(dir / "out/batch/alto/p0003.xml"));

  const auto log = json_lines(testing::slurp(dir / "out/run.jsonl"));
  REQUIRE(log.size() == 4);
  CHECK(log[0]["status"] == "ok");
  CHECK(log[1]["status"] == "error");
  CHECK(log[1]["error"]["code"] == "TruncatedData");
  CHECK(log[2]["status"] == "ok");
  CHECK(log[3]["failedPages"] == 1);
  for (const char* stage : {"load", "smooth", "entities", "lines", "mask", "split", "grid", "boxes", "order", "articles"})
    CHECK(log[0]["timingsMs"].contains(stage));

  const auto articles = json::parse(testing::slurp(dir / "out/batch/articles.json"));
  CHECK(articles["schema"] == "artseg.articles");
  REQUIRE(articles["pages"].size() == 3);
  CHECK(articles["pages"][1]["status"] == "error");
  for (const auto& a : articles["articles"])
    for (const auto& part : a["parts"]) CHECK(part["page"] != 2);
}

TEST_CASE("segmenting an issue directly") {
  testing::TempDir dir("pipeline_issue");
  const auto pages = three_pages(dir);
  const auto issue = segment_issue(PipelineConfig{}, "i", pages);
  CHECK(issue.failed_pages() == 0);
  CHECK(issue.tolerances.gapTol == doctest::Approx(0.33 * 16));
  CHECK(issue.tolerances.offsetTol == doctest::Approx(1.5));
  for (std::size_t i = 0; i < issue.articles.size(); ++i) CHECK(issue.articles[i].readingIndex == int(i));
  for (const auto& p : issue.pages) CHECK(p.image.width() == 0);
  const auto kept = segment_issue(PipelineConfig{}, "i", pages, true);
  CHECK(kept.pages[0].image.width() > 0);

  PipelineConfig fixed;
  fixed.gapTol = 3.0;
  fixed.offsetTol = 0.25;
  const auto tol = segment_issue(fixed, "i", pages).tolerances;
  CHECK(tol.gapTol == 3.0);
  CHECK(tol.offsetTol == 0.25);
}

TEST_CASE("worker count does not change the output") {
  testing::TempDir dir("pipeline_workers");
  const auto pages = three_pages(dir);
  PipelineConfig one;
  one.workers = 1;
  PipelineConfig four;
  four.workers = 4;
  CHECK(articles_json(segment_issue(one, "i", pages)) == articles_json(segment_issue(four, "i", pages)));
}

TEST_CASE("input grouping") {
  testing::TempDir dir("pipeline_group");
  synth::RecipeFile recipe;
  recipe.tmpl = synth::IssueTemplate{};
  synth::write_corpus(dir / "corpus", recipe, 1, 2);

  SUBCASE("manifest corpus") {
    const auto g = group_inputs({dir / "corpus"}, "x");
    REQUIRE(g.size() == 2);
    CHECK(g[0].id == "issue0001");
  }
  SUBCASE("one issue directory") {
    const auto g = group_inputs({dir / "corpus/issue0002"}, "x");
    REQUIRE(g.size() == 1);
    CHECK(g[0].id == "issue0002");
    CHECK(g[0].pages.front().filename() == "p0001.pgm");
  }
  SUBCASE("directory of issue directories") {
    std::filesystem::remove(dir / "corpus/manifest.json");
    CHECK(group_inputs({dir / "corpus"}, "x").size() == 2);
  }
  SUBCASE("loose files come first under the default id") {
    const auto g = group_inputs({dir / "corpus/issue0002", dir / "corpus/issue0001/p0001.pgm"}, "loose");
    REQUIRE(g.size() == 2);
    CHECK(g[0].id == "loose");
    CHECK(g[1].id == "issue0002");
  }
  SUBCASE("nothing to do") {
    CHECK_THROWS_AS(group_inputs({}, "x"), Error);
    std::filesystem::create_directories(dir / "void");
    CHECK_THROWS_AS(group_inputs({dir / "void"}, "x"), Error);
  }
}
