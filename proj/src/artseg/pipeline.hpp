#pragma once

#include "artseg/articles.hpp"
#include "artseg/config.hpp"
#include "artseg/error.hpp"
#include "artseg/grid.hpp"
#include "artseg/labels.hpp"
#include "artseg/metsalto.hpp"
#include "artseg/textlines.hpp"

#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace artseg {

struct StageTiming {
  std::string stage;
  double ms = 0.0;
};

struct PageError {
  ErrorCode code = ErrorCode::Internal;
  std::string message;
};

/// Everything computed for one page, kept for serialization and overlays.
struct PageResult {
  int number = 0;  // 1-based input position
  std::filesystem::path path;
  int width = 0;
  int height = 0;
  LabelImage image;
  EntityImage smoothed;
  std::vector<TextLine> lines;
  SeparatorMask mask;
  SeparatorGrid grid;
  std::vector<GridBox> boxes;
  SectionTree tree;
  std::vector<int> order;  // box ids in reading order
  PageArticles articles;
  std::vector<Diagnostic> diagnostics;
  std::vector<StageTiming> timings;
  std::optional<PageError> error;

  bool ok() const { return !error.has_value(); }
};

struct IssueTolerances {
  double gapTol = 0.0;
  double offsetTol = 0.0;
  double medianLineHeight = 0.0;
  double medianSeparatorThickness = 0.0;
  LineStats lineStats;
};

struct IssueResult {
  std::string issueId;
  std::vector<PageResult> pages;
  std::vector<Article> articles;
  IssueTolerances tolerances;

  std::size_t failed_pages() const;
};

/// Runs the full pipeline over the pages of one issue; page-level failures
/// are recorded on the page and do not stop the others. Keeps the images in
/// each PageResult when `keepRasters` is set.
IssueResult segment_issue(const PipelineConfig& config, const std::string& issueId,
                          const std::vector<std::filesystem::path>& pages, bool keepRasters = false);

/// Tolerances derived from the issue's lines and separators unless fixed
/// in the configuration.
IssueTolerances issue_tolerances(const PipelineConfig& config, const std::vector<PageResult>& pages);

IssueDocument to_issue_document(const IssueResult& issue);

/// Machine-readable article list written next to mets.xml.
std::string articles_json(const IssueResult& issue);

/// One JSON object per page, then one for the issue.
std::string run_log_records(const IssueResult& issue);

struct IssueInput {
  std::string id;
  std::vector<std::filesystem::path> pages;
};

/// Groups command-line inputs into issues: a corpus directory with
/// manifest.json, a directory of label maps (one issue), a directory of
/// issue directories, or a list of files (one issue named `defaultIssueId`).
std::vector<IssueInput> group_inputs(const std::vector<std::filesystem::path>& inputs,
                                     const std::string& defaultIssueId);

struct SegmentSummary {
  int issues = 0;
  int pages = 0;
  int failedPages = 0;
  int articles = 0;
};

/// Segments every issue and writes {out}/{issue}/mets.xml, alto/, articles.json
/// and {out}/run.jsonl.
SegmentSummary run_segment(const PipelineConfig& config, const std::vector<std::filesystem::path>& inputs,
                           const std::string& defaultIssueId, const std::filesystem::path& out);

}  // namespace artseg
