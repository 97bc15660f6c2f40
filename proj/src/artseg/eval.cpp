#include "artseg/eval.hpp"

#include "artseg/error.hpp"
#include "artseg/label_io.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace artseg::eval {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

std::int64_t percent_hundredths(std::int64_t num, std::int64_t den) {
  const std::int64_t n = num * 10000;
  std::int64_t q = n / den;
  const std::int64_t r = n % den;
  const std::int64_t abs_r = r < 0 ? -r : r;
  if (2 * abs_r >= den) q += n < 0 ? -1 : 1;
  return q;
}

}  // namespace

Rates compute_rates(std::int64_t nArticlesGT, std::int64_t nDetected, std::int64_t nCorrect) {
  if (nArticlesGT < 0 || nDetected < 0 || nCorrect < 0)
    throw Error(ErrorCode::InvalidArgument, "counts must be non-negative");
  if (nCorrect > nDetected || nCorrect > nArticlesGT)
    throw Error(ErrorCode::InvalidArgument, "#correct cannot exceed #detected or #articles");
  if (nArticlesGT == 0) throw Error(ErrorCode::DivisionByZero, "rates are undefined without ground-truth articles");
  Rates r;
  r.nArticlesGT = nArticlesGT;
  r.nDetected = nDetected;
  r.nCorrect = nCorrect;
  r.correctHundredths = percent_hundredths(nCorrect, nArticlesGT);
  r.overSegHundredths = percent_hundredths(nDetected - nArticlesGT, nArticlesGT);
  return r;
}

std::string format_hundredths(std::int64_t h) {
  const bool negative = h < 0;
  const std::int64_t a = negative ? -h : h;
  char buf[48];
  std::snprintf(buf, sizeof buf, "%s%lld.%02lld", negative ? "-" : "", static_cast<long long>(a / 100),
                static_cast<long long>(a % 100));
  return buf;
}

std::int64_t union_area(std::span<const Rect> rects) {
  std::vector<int> xs;
  for (const auto& r : rects) {
    if (r.empty()) continue;
    xs.push_back(r.x0);
    xs.push_back(r.x1);
  }
  std::sort(xs.begin(), xs.end());
  xs.erase(std::unique(xs.begin(), xs.end()), xs.end());
  std::int64_t total = 0;
  std::vector<std::pair<int, int>> spans;
  for (std::size_t i = 0; i + 1 < xs.size(); ++i) {
    const int a = xs[i];
    const int b = xs[i + 1];
    spans.clear();
    for (const auto& r : rects)
      if (!r.empty() && r.x0 <= a && r.x1 >= b) spans.push_back({r.y0, r.y1});
    if (spans.empty()) continue;
    std::sort(spans.begin(), spans.end());
    std::int64_t covered = 0;
    int lo = spans.front().first;
    int hi = spans.front().second;
    for (const auto& [y0, y1] : spans) {
      if (y0 > hi) {
        covered += hi - lo;
        lo = y0;
        hi = y1;
      } else {
        hi = std::max(hi, y1);
      }
    }
    covered += hi - lo;
    total += covered * (b - a);
  }
  return total;
}

namespace {

std::map<int, std::vector<Rect>> by_page(const Region& r) {
  std::map<int, std::vector<Rect>> out;
  for (const auto& [page, rect] : r.rects) out[page].push_back(rect);
  return out;
}

}  // namespace

std::int64_t region_area(const Region& r) {
  std::int64_t total = 0;
  for (const auto& [page, rects] : by_page(r)) total += union_area(rects);
  return total;
}

std::int64_t intersection_area(const Region& a, const Region& b) {
  const auto pa = by_page(a);
  const auto pb = by_page(b);
  std::int64_t total = 0;
  for (const auto& [page, ra] : pa) {
    auto it = pb.find(page);
    if (it == pb.end()) continue;
    std::vector<Rect> pieces;
    for (const auto& x : ra)
      for (const auto& y : it->second) {
        auto i = x.intersected(y);
        if (!i.empty()) pieces.push_back(i);
      }
    total += union_area(pieces);
  }
  return total;
}

double iou(const Region& a, const Region& b) {
  const auto inter = intersection_area(a, b);
  const auto uni = region_area(a) + region_area(b) - inter;
  return uni > 0 ? double(inter) / double(uni) : 0.0;
}

std::vector<Match> match_articles(std::span<const Region> predicted, std::span<const Region> gt,
                                  double iouThreshold) {
  std::vector<Match> candidates;
  for (std::size_t g = 0; g < gt.size(); ++g)
    for (std::size_t p = 0; p < predicted.size(); ++p) {
      const double v = iou(predicted[p], gt[g]);
      if (v > 0.0 && v >= iouThreshold) candidates.push_back({int(g), int(p), v});
    }
  std::stable_sort(candidates.begin(), candidates.end(), [](const Match& a, const Match& b) {
    if (a.iou != b.iou) return a.iou > b.iou;
    if (a.gt != b.gt) return a.gt < b.gt;
    return a.pred < b.pred;
  });
  std::vector<bool> gt_used(gt.size(), false), pred_used(predicted.size(), false);
  std::vector<Match> out;
  for (const auto& m : candidates) {
    if (gt_used[std::size_t(m.gt)] || pred_used[std::size_t(m.pred)]) continue;
    gt_used[std::size_t(m.gt)] = pred_used[std::size_t(m.pred)] = true;
    out.push_back(m);
  }
  std::sort(out.begin(), out.end(), [](const Match& a, const Match& b) { return a.gt < b.gt; });
  return out;
}

void score_issue(const std::string& issueId, std::span<const Region> predicted, std::span<const Region> gt,
                 double iouThreshold, EvalReport& report) {
  IssueCounts ic;
  ic.issue = issueId;
  ic.nArticlesGT = std::int64_t(gt.size());
  ic.nDetected = std::int64_t(predicted.size());
  ic.nCorrect = std::int64_t(match_articles(predicted, gt, iouThreshold).size());

  std::set<int> pages;
  for (const auto& r : gt)
    for (const auto& pr : r.rects) pages.insert(pr.first);
  for (const auto& r : predicted)
    for (const auto& pr : r.rects) pages.insert(pr.first);
  for (int page : pages) {
    auto restrict = [page](std::span<const Region> regions) {
      std::vector<Region> out;
      for (const auto& r : regions) {
        Region x;
        for (const auto& pr : r.rects)
          if (pr.first == page) x.rects.push_back(pr);
        if (!x.rects.empty()) out.push_back(std::move(x));
      }
      return out;
    };
    const auto g = restrict(gt);
    const auto p = restrict(predicted);
    report.perPage.push_back({issueId, page, std::int64_t(g.size()), std::int64_t(p.size()),
                              std::int64_t(match_articles(p, g, iouThreshold).size())});
  }

  report.nArticlesGT += ic.nArticlesGT;
  report.nDetected += ic.nDetected;
  report.nCorrect += ic.nCorrect;
  report.issues.push_back(std::move(ic));
}

namespace {

Rect rect_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidArgument, "rectangle must be [x0,y0,x1,y1]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

json read_json(const fs::path& path) {
  const auto bytes = read_file_bytes(path);
  try {
    return json::parse(bytes.begin(), bytes.end());
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, path.string() + ": invalid JSON: " + e.what());
  }
}

bool is_label_map(const fs::path& p) {
  const auto ext = p.extension().string();
  return ext == ".pgm" || ext == ".png";
}

bool is_truth_file(const fs::path& p) {
  const auto name = p.filename().string();
  return name.size() > 8 && name.ends_with(".gt.json");
}

std::vector<fs::path> sorted_entries(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

bool holds_truth(const fs::path& dir) {
  for (const auto& p : sorted_entries(dir))
    if (fs::is_regular_file(p) && (is_truth_file(p) || is_label_map(p))) return true;
  return false;
}

}  // namespace

std::vector<Region> load_truth_regions(const fs::path& issueDir) {
  if (!fs::is_directory(issueDir)) throw Error(ErrorCode::MissingGroundTruth, issueDir.string() + " is not a directory");
  std::set<fs::path> sidecars;
  for (const auto& p : sorted_entries(issueDir)) {
    if (!fs::is_regular_file(p)) continue;
    if (is_truth_file(p)) sidecars.insert(p);
  }
  for (const auto& p : sorted_entries(issueDir)) {
    if (!fs::is_regular_file(p) || !is_label_map(p)) continue;
    auto sidecar = p;
    sidecar.replace_extension(".gt.json");
    if (!sidecars.count(sidecar))
      throw Error(ErrorCode::MissingGroundTruth, "missing ground truth " + sidecar.string());
  }
  std::map<int, Region> articles;
  int position = 0;
  for (const auto& path : sidecars) {
    ++position;
    const auto j = read_json(path);
    if (j.value("schema", "") != "artseg.groundtruth")
      throw Error(ErrorCode::InvalidArgument, path.string() + " is not a ground-truth sidecar");
    const int page = j.value("page", position);
    try {
      for (const auto& a : j.at("articles")) {
        auto& region = articles[a.at("article").get<int>()];
        if (a.contains("title") && !a["title"].is_null()) region.rects.push_back({page, rect_from(a["title"])});
        for (const auto& l : a.at("lines")) region.rects.push_back({page, rect_from(l)});
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, path.string() + ": " + e.what());
    }
  }
  std::vector<Region> out;
  for (auto& [id, r] : articles) out.push_back(std::move(r));
  return out;
}

std::vector<Region> load_prediction_regions(const fs::path& articlesJson) {
  const auto j = read_json(articlesJson);
  if (j.value("schema", "") != "artseg.articles")
    throw Error(ErrorCode::InvalidArgument, articlesJson.string() + " is not an articles document");
  std::vector<Region> out;
  try {
    for (const auto& a : j.at("articles")) {
      Region r;
      for (const auto& part : a.at("parts")) {
        const int page = part.at("page").get<int>();
        if (part.contains("title") && !part["title"].is_null())
          r.rects.push_back({page, rect_from(part["title"].at("bbox"))});
        for (const auto& l : part.at("lines")) r.rects.push_back({page, rect_from(l.at("bbox"))});
      }
      out.push_back(std::move(r));
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, articlesJson.string() + ": " + e.what());
  }
  return out;
}

EvalReport evaluate_directories(const fs::path& predDir, const fs::path& gtDir, double iouThreshold) {
  if (!(iouThreshold > 0.0 && iouThreshold <= 1.0))
    throw Error(ErrorCode::InvalidArgument, "IoU threshold must lie in (0, 1]");
  if (!fs::is_directory(gtDir)) throw Error(ErrorCode::MissingGroundTruth, gtDir.string() + " is not a directory");

  std::vector<std::pair<std::string, fs::path>> issues;
  if (fs::exists(gtDir / "manifest.json")) {
    const auto m = read_json(gtDir / "manifest.json");
    for (const auto& i : m.at("issues")) {
      const auto id = i.at("id").get<std::string>();
      issues.push_back({id, gtDir / id});
    }
  } else if (holds_truth(gtDir)) {
    auto norm = fs::absolute(gtDir).lexically_normal();
    if (norm.filename().empty()) norm = norm.parent_path();
    issues.push_back({norm.filename().string(), gtDir});
  } else {
    for (const auto& p : sorted_entries(gtDir))
      if (fs::is_directory(p) && holds_truth(p)) issues.push_back({p.filename().string(), p});
  }

  EvalReport report;
  report.iouThreshold = iouThreshold;
  for (const auto& [id, dir] : issues) {
    const auto gt = load_truth_regions(dir);
    std::vector<Region> pred;
    bool missing = false;
    if (fs::exists(predDir / id / "articles.json"))
      pred = load_prediction_regions(predDir / id / "articles.json");
    else if (issues.size() == 1 && fs::exists(predDir / "articles.json"))
      pred = load_prediction_regions(predDir / "articles.json");
    else if (fs::is_directory(predDir / id) && holds_truth(predDir / id))
      pred = load_truth_regions(predDir / id);
    else if (issues.size() == 1 && holds_truth(predDir))
      pred = load_truth_regions(predDir);
    else
      missing = true;
    score_issue(id, pred, gt, iouThreshold, report);
    report.issues.back().missingPrediction = missing;
  }
  if (report.nArticlesGT > 0) report.rates = compute_rates(report.nArticlesGT, report.nDetected, report.nCorrect);
  return report;
}

std::string report_json(const EvalReport& r) {
  json j{{"schema", "artseg.eval"}, {"version", 1}, {"iouThreshold", r.iouThreshold}};
  j["nArticlesGT"] = r.nArticlesGT;
  j["nDetected"] = r.nDetected;
  j["nCorrect"] = r.nCorrect;
  j["pctCorrect"] = r.rates ? json(r.rates->pctCorrect()) : json(nullptr);
  j["pctOverSeg"] = r.rates ? json(r.rates->pctOverSeg()) : json(nullptr);
  j["issues"] = json::array();
  for (const auto& i : r.issues)
    j["issues"].push_back({{"issue", i.issue},
                           {"nArticlesGT", i.nArticlesGT},
                           {"nDetected", i.nDetected},
                           {"nCorrect", i.nCorrect},
                           {"missingPrediction", i.missingPrediction}});
  j["perPage"] = json::array();
  for (const auto& p : r.perPage)
    j["perPage"].push_back({{"issue", p.issue},
                            {"page", p.page},
                            {"nArticlesGT", p.nArticlesGT},
                            {"nDetected", p.nDetected},
                            {"nCorrect", p.nCorrect}});
  return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& r) {
  const std::vector<std::string> header{"#articles", "#detected", "#correct", "%correct", "%over-seg"};
  std::vector<std::string> row{std::to_string(r.nArticlesGT), std::to_string(r.nDetected), std::to_string(r.nCorrect),
                               r.rates ? format_hundredths(r.rates->correctHundredths) : "undefined",
                               r.rates ? format_hundredths(r.rates->overSegHundredths) : "undefined"};
  std::ostringstream out;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto w = std::max(header[i].size(), row[i].size());
    if (i) out << ' ';
    out << std::string(w - header[i].size(), ' ') << header[i];
  }
  out << '\n';
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto w = std::max(header[i].size(), row[i].size());
    if (i) out << ' ';
    out << std::string(w - row[i].size(), ' ') << row[i];
  }
  out << '\n';
  return out.str();
}

}  // namespace artseg::eval
