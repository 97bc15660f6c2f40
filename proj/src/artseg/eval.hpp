#pragma once

#include "artseg/geometry.hpp"

#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace artseg::eval {

inline constexpr double kDefaultIouThreshold = 0.8;

/// Counts plus percentages held as exact hundredths, rounded half away from
/// zero.
struct Rates {
  std::int64_t nArticlesGT = 0;
  std::int64_t nDetected = 0;
  std::int64_t nCorrect = 0;
  std::int64_t correctHundredths = 0;
  std::int64_t overSegHundredths = 0;

  double pctCorrect() const { return double(correctHundredths) / 100.0; }
  double pctOverSeg() const { return double(overSegHundredths) / 100.0; }

  friend bool operator==(const Rates&, const Rates&) = default;
};

/// Throws DivisionByZero when nArticlesGT is 0 and InvalidArgument for
/// inconsistent counts.
Rates compute_rates(std::int64_t nArticlesGT, std::int64_t nDetected, std::int64_t nCorrect);

/// "85.84", "-3.10", "0.00".
std::string format_hundredths(std::int64_t hundredths);

/// Pixel region of an article: rectangles tagged with their page number.
struct Region {
  std::vector<std::pair<int, Rect>> rects;
};

/// Area of a union of rectangles.
std::int64_t union_area(std::span<const Rect> rects);
std::int64_t region_area(const Region& r);
std::int64_t intersection_area(const Region& a, const Region& b);
double iou(const Region& a, const Region& b);

struct Match {
  int gt = 0;
  int pred = 0;
  double iou = 0.0;
};

/// Greedy one-to-one matching by descending IoU over pairs at or above the
/// threshold; ties go to the lower (gt, pred) index pair.
std::vector<Match> match_articles(std::span<const Region> predicted, std::span<const Region> gt,
                                  double iouThreshold = kDefaultIouThreshold);

struct PageCounts {
  std::string issue;
  int page = 0;
  std::int64_t nArticlesGT = 0;
  std::int64_t nDetected = 0;
  std::int64_t nCorrect = 0;
};

struct IssueCounts {
  std::string issue;
  std::int64_t nArticlesGT = 0;
  std::int64_t nDetected = 0;
  std::int64_t nCorrect = 0;
  bool missingPrediction = false;
};

struct EvalReport {
  double iouThreshold = kDefaultIouThreshold;
  std::int64_t nArticlesGT = 0;
  std::int64_t nDetected = 0;
  std::int64_t nCorrect = 0;
  std::optional<Rates> rates;  // absent when there is no ground truth
  std::vector<IssueCounts> issues;
  std::vector<PageCounts> perPage;
};

/// Scores one issue: article-level counts plus a per-page breakdown computed
/// from the page-restricted regions.
void score_issue(const std::string& issueId, std::span<const Region> predicted, std::span<const Region> gt,
                 double iouThreshold, EvalReport& report);

/// Regions read from an issue's *.gt.json sidecars, grouped by logical
/// article. Throws MissingGroundTruth when a label map lacks its sidecar.
std::vector<Region> load_truth_regions(const std::filesystem::path& issueDir);

/// Regions read from a segment run's articles.json.
std::vector<Region> load_prediction_regions(const std::filesystem::path& articlesJson);

/// Walks a ground-truth corpus (manifest or issue directories) and the
/// matching prediction tree.
EvalReport evaluate_directories(const std::filesystem::path& predDir, const std::filesystem::path& gtDir,
                                double iouThreshold = kDefaultIouThreshold);

std::string report_json(const EvalReport& report);
std::string report_table(const EvalReport& report);

}  // namespace artseg::eval
