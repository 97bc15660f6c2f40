#pragma once

#include "artseg/articles.hpp"
#include "artseg/geometry.hpp"
#include "artseg/grid.hpp"
#include "artseg/labels.hpp"
#include "artseg/label_io.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace artseg::synth {

/// Page geometry in pixels (300 dpi-like scale).
struct Geometry {
  int margin = 40;
  int columnInset = 12;
  int lineBand = 16;
  int lineGap = 24;        // between consecutive blocks in a column
  int titleGap = 16;       // between a title and its first line
  int ruleThickness = 3;
  int sectionPad = 16;     // section rule centre to content
  int minTextWidth = 40;
  double dpi = 300.0;
};

struct Degradations {
  double separatorBreakProb = 0.0;
  double lineFuseProb = 0.0;
  double titleMislabelProb = 0.0;

  friend bool operator==(const Degradations&, const Degradations&) = default;
};

/// Defaults for the robustness corpus: breaks stay within the default
/// connect tolerances and fused pairs above the split threshold.
Degradations robustness_defaults();

struct ArticleSpec {
  int lines = 3;
  int titleHeight = 40;
  bool headless = false;      // continuation from the previous page
  int lastLineWidthPct = 60;  // width of the final line

  friend bool operator==(const ArticleSpec&, const ArticleSpec&) = default;
};

struct SectionSpec {
  int columns = 1;
  std::vector<ArticleSpec> articles;

  friend bool operator==(const SectionSpec&, const SectionSpec&) = default;
};

struct PageRecipe {
  int pageWidth = 1600;
  std::optional<int> pageHeight;  // derived from content when absent
  std::vector<SectionSpec> sections;
  Degradations degradations;
  std::uint64_t rngSeed = 0;

  friend bool operator==(const PageRecipe&, const PageRecipe&) = default;
};

struct TruthPart {
  int article = 0;  // logical article id within the issue
  std::optional<Rect> title;
  std::vector<Rect> lines;
  std::vector<Rect> boxes;
  Continuation continuation = Continuation::None;

  friend bool operator==(const TruthPart&, const TruthPart&) = default;
};

struct TruthSeparator {
  Orientation orientation = Orientation::Vertical;
  int position = 0;
  int start = 0;
  int end = 0;
  int thickness = 0;

  friend bool operator==(const TruthSeparator&, const TruthSeparator&) = default;
};

struct PageTruth {
  int width = 0;
  int height = 0;
  std::vector<TruthPart> parts;  // reading order
  std::vector<TruthSeparator> separators;
  std::vector<Rect> mislabeledLines;
  std::vector<std::pair<Rect, Rect>> fusedLines;
  int brokenSeparators = 0;

  friend bool operator==(const PageTruth&, const PageTruth&) = default;
};

struct LogicalArticle {
  int id = 0;
  std::vector<std::pair<int, int>> parts;  // (page index, part index)
  Continuation continuation = Continuation::None;

  friend bool operator==(const LogicalArticle&, const LogicalArticle&) = default;
};

struct GroundTruth {
  std::vector<PageTruth> pages;
  std::vector<LogicalArticle> articles;
  std::vector<int> readingOrder;  // logical ids

  friend bool operator==(const GroundTruth&, const GroundTruth&) = default;
};

struct GeneratedIssue {
  std::vector<LabelImage> images;
  GroundTruth truth;
};

/// Throws InfeasibleRecipe when the layout does not fit.
std::pair<LabelImage, GroundTruth> generate_page(const PageRecipe& recipe, const Geometry& geometry = {});

/// Ends page p with a titled article and starts page p+1 with its headless
/// remainder for `spanningArticles` page boundaries chosen from `seed`.
GeneratedIssue generate_issue(std::vector<PageRecipe> recipes, int spanningArticles, std::uint64_t seed,
                              const Geometry& geometry = {});

struct Range {
  int lo = 0;
  int hi = 0;

  friend bool operator==(const Range&, const Range&) = default;
};

struct IssueTemplate {
  Range pages{1, 4};
  Range sections{1, 3};
  Range columns{1, 4};
  Range articlesPerPage{1, 12};
  Range linesPerArticle{2, 7};
  Range titleHeight{36, 56};
  Range spanning{0, 2};
  int pageWidth = 1600;
  Degradations degradations;

  friend bool operator==(const IssueTemplate&, const IssueTemplate&) = default;
};

struct IssueRecipe {
  std::vector<PageRecipe> pages;
  int spanningArticles = 0;
  std::uint64_t seed = 0;

  friend bool operator==(const IssueRecipe&, const IssueRecipe&) = default;
};

IssueRecipe random_issue_recipe(const IssueTemplate& tmpl, std::uint64_t seed);
GeneratedIssue generate_issue(const IssueRecipe& recipe, const Geometry& geometry = {});

/// SplitMix64 step, used to derive independent seeds.
std::uint64_t mix_seed(std::uint64_t x);

/// Recipe files hold either an IssueTemplate (kind "template") or an explicit
/// IssueRecipe (kind "issue").
struct RecipeFile {
  std::optional<IssueTemplate> tmpl;
  std::optional<IssueRecipe> issue;
};
RecipeFile parse_recipe_json(const std::string& text);
std::string recipe_json(const IssueTemplate& tmpl);
std::string recipe_json(const IssueRecipe& recipe);

std::string page_truth_json(const PageTruth& page, const std::string& issueId, int pageNumber);
PageTruth parse_page_truth_json(const std::string& text);

/// Gt sidecar path for a label map: p0001.pgm -> p0001.gt.json.
std::filesystem::path truth_sidecar_path(const std::filesystem::path& labelMap);

struct CorpusSummary {
  int issues = 0;
  int pages = 0;
  int parts = 0;
  int articles = 0;
};

/// Writes `count` issues as {out}/issueNNNN/pNNNN.{pgm|png} with .gt.json
/// sidecars and {out}/manifest.json. Issue i uses seed mix_seed(seed + i).
CorpusSummary write_corpus(const std::filesystem::path& out, const RecipeFile& recipe, std::uint64_t seed,
                           int count, LabelMapFormat format = LabelMapFormat::Pgm);

}  // namespace artseg::synth
