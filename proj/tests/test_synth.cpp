#include <doctest.h>
#include <json.hpp>

#include "support.hpp"

#include "artseg/synth.hpp"

using namespace artseg;
using namespace artseg::synth;

namespace {

PageRecipe single_column(int articles, int lines) {
  PageRecipe r;
  r.pageWidth = 800;
  SectionSpec s;
  s.columns = 1;
  for (int i = 0; i < articles; ++i) s.articles.push_back({lines, 40, false, 60});
  r.sections.push_back(s);
  r.rngSeed = 5;
  return r;
}

int count_code(const LabelImage& img, const Rect& r, std::initializer_list<RawLabel> codes) {
  int n = 0;
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x)
      for (auto c : codes) n += img.at(x, y) == c;
  return n;
}

}  // namespace

TEST_CASE("mix_seed is a fixed bijection step") {
  CHECK(mix_seed(0) == 0xe220a8397b1dcdafULL);
  CHECK(mix_seed(1) != mix_seed(2));
}

TEST_CASE("page truth describes every painted article") {
  const auto [img, gt] = generate_page(single_column(4, 3));
  const auto& truth = gt.pages.at(0);
  CHECK(img.width() == 800);
  CHECK(truth.width == 800);
  CHECK(truth.height == img.height());
  REQUIRE(truth.parts.size() == 4);
  for (const auto& part : truth.parts) {
    REQUIRE(part.title);
    CHECK(part.lines.size() == 3);
    CHECK(count_code(img, *part.title, {RawLabel::TitleCharacter, RawLabel::TitleInterWord, RawLabel::TitleInterCharacter}) ==
          part.title->area());
    for (const auto& l : part.lines)
      CHECK(count_code(img, l, {RawLabel::Character, RawLabel::InterCharacter, RawLabel::InterWord}) == l.area());
  }
  CHECK(truth.mislabeledLines.empty());
  CHECK(truth.fusedLines.empty());
}

TEST_CASE("generation is deterministic for a seed") {
  IssueTemplate tmpl;
  const auto a = generate_issue(random_issue_recipe(tmpl, 99));
  const auto b = generate_issue(random_issue_recipe(tmpl, 99));
  CHECK(a.truth == b.truth);
  REQUIRE(a.images.size() == b.images.size());
  for (std::size_t i = 0; i < a.images.size(); ++i) CHECK(a.images[i] == b.images[i]);
  CHECK_FALSE(random_issue_recipe(tmpl, 99) == random_issue_recipe(tmpl, 100));
}

TEST_CASE("forced mislabels hit every middle line but never two in a row") {
  auto recipe = single_column(5, 3);
  recipe.degradations.titleMislabelProb = 1.0;
  const auto [img, gt] = generate_page(recipe);
  const auto& truth = gt.pages.at(0);
  CHECK(truth.mislabeledLines.size() == 5);
  for (const auto& r : truth.mislabeledLines)
    CHECK(count_code(img, r, {RawLabel::TitleCharacter, RawLabel::TitleInterCharacter, RawLabel::TitleInterWord}) == r.area());

  auto longer = single_column(2, 7);
  longer.degradations.titleMislabelProb = 1.0;
  CHECK(generate_page(longer).second.pages.at(0).mislabeledLines.size() == 6);
}

TEST_CASE("fused pairs are recorded and bridged") {
  auto recipe = single_column(6, 5);
  recipe.degradations.lineFuseProb = 1.0;
  const auto [img, gt] = generate_page(recipe);
  const auto& truth = gt.pages.at(0);
  REQUIRE_FALSE(truth.fusedLines.empty());
  for (const auto& [a, b] : truth.fusedLines) {
    CHECK(a.y1 <= b.y0);
    const Rect gap{a.x0, a.y1, a.x1, b.y0};
    CHECK(count_code(img, gap, {RawLabel::Character, RawLabel::InterWord, RawLabel::InterCharacter}) > 0);
  }
}

TEST_CASE("infeasible recipes are rejected") {
  PageRecipe narrow = single_column(1, 3);
  narrow.pageWidth = 50;
  CHECK_THROWS_AS(generate_page(narrow), Error);
  PageRecipe crowded = single_column(1, 3);
  crowded.sections[0].columns = 40;
  try {
    generate_page(crowded);
    FAIL("expected InfeasibleRecipe");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::InfeasibleRecipe);
  }
  PageRecipe short_page = single_column(10, 7);
  short_page.pageHeight = 200;
  CHECK_THROWS_AS(generate_page(short_page), Error);
}

TEST_CASE("spanning articles continue on the next page") {
  IssueRecipe r;
  r.pages = {single_column(3, 4), single_column(3, 4)};
  r.spanningArticles = 1;
  r.seed = 17;
  const auto issue = generate_issue(r);
  REQUIRE(issue.truth.pages.size() == 2);
  const auto& head = issue.truth.pages[1].parts.front();
  CHECK_FALSE(head.title.has_value());
  CHECK(continues_previous(head.continuation));
  int spanning = 0;
  for (const auto& a : issue.truth.articles) spanning += a.parts.size() == 2;
  CHECK(spanning == 1);
  CHECK(issue.truth.readingOrder.size() == issue.truth.articles.size());
}

TEST_CASE("page truth JSON round-trips") {
  auto recipe = single_column(3, 5);
  recipe.degradations = {0.5, 0.5, 0.5};
  const auto truth = generate_page(recipe).second.pages.at(0);
  const auto text = page_truth_json(truth, "issue0001", 1);
  CHECK(parse_page_truth_json(text) == truth);
  CHECK(nlohmann::json::parse(text)["issue"] == "issue0001");
  CHECK(truth_sidecar_path("x/p0001.pgm") == std::filesystem::path("x/p0001.gt.json"));
}

TEST_CASE("recipe JSON round-trips for templates and explicit issues") {
  IssueTemplate tmpl;
  tmpl.pages = {2, 3};
  tmpl.degradations = robustness_defaults();
  const auto back = parse_recipe_json(recipe_json(tmpl));
  REQUIRE(back.tmpl);
  CHECK(*back.tmpl == tmpl);
  const auto issue = random_issue_recipe(tmpl, 4);
  const auto again = parse_recipe_json(recipe_json(issue));
  REQUIRE(again.issue);
  CHECK(*again.issue == issue);
  CHECK_THROWS_AS(parse_recipe_json("{\"schema\": \"artseg.recipe\", \"version\": 1, \"kind\": \"other\"}"), Error);
}

TEST_CASE("corpus: layout, manifest totals and reproducibility") {
  testing::TempDir a("synth_a");
  testing::TempDir b("synth_b");
  RecipeFile recipe;
  recipe.tmpl = IssueTemplate{};
  const auto sa = write_corpus(a.path(), recipe, 3, 4);
  write_corpus(b.path(), recipe, 3, 4);
  CHECK(sa.issues == 4);
  const auto manifest = nlohmann::json::parse(testing::slurp(a / "manifest.json"));
  CHECK(manifest["totals"]["pages"] == sa.pages);
  CHECK(manifest["totals"]["pageArticles"] == sa.parts);
  CHECK(manifest["totals"]["articles"] == sa.articles);
  int pages = 0;
  for (const auto& issue : manifest["issues"])
    for (const auto& page : issue["pages"]) {
      ++pages;
      const std::string file = page["file"];
      CHECK(std::filesystem::exists(a / file));
      CHECK(testing::slurp(a / file) == testing::slurp(b / file));
      CHECK(testing::slurp(a / page["groundTruth"].get<std::string>()) ==
            testing::slurp(b / page["groundTruth"].get<std::string>()));
    }
  CHECK(pages == sa.pages);
  CHECK(std::filesystem::exists(a / "issue0001/p0001.pgm"));
  CHECK(testing::slurp(a / "manifest.json") == testing::slurp(b / "manifest.json"));
}

TEST_CASE("zero issues writes an empty manifest") {
  testing::TempDir dir("synth_empty");
  RecipeFile recipe;
  recipe.tmpl = IssueTemplate{};
  const auto s = write_corpus(dir.path(), recipe, 1, 0);
  CHECK(s.issues == 0);
  const auto manifest = nlohmann::json::parse(testing::slurp(dir / "manifest.json"));
  CHECK(manifest["issues"].empty());
  CHECK(manifest["totals"]["pages"] == 0);
  CHECK_THROWS_AS(write_corpus(dir.path(), recipe, 1, -1), Error);
}

TEST_CASE("PNG corpus writes indexed label maps") {
  testing::TempDir dir("synth_png");
  RecipeFile recipe;
  IssueRecipe r;
  r.pages = {single_column(2, 3)};
  recipe.issue = r;
  write_corpus(dir.path(), recipe, 1, 1, LabelMapFormat::IndexedPng);
  const auto img = load_label_map_file(dir / "issue0001/p0001.png");
  CHECK(img.width() == 800);
}
