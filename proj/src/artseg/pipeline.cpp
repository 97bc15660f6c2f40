#include "artseg/pipeline.hpp"

#include "artseg/label_io.hpp"
#include "artseg/smoothing.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <mutex>
#include <thread>

namespace artseg {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

namespace {

template <typename Fn>
void parallel_for(std::size_t n, int workers, Fn&& fn) {
  std::size_t threads = workers > 0 ? std::size_t(workers) : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, n);
  if (threads <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

template <typename Fn>
auto timed(PageResult& page, const char* stage, Fn&& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  if constexpr (std::is_void_v<decltype(fn())>) {
    fn();
    page.timings.push_back({stage, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()});
  } else {
    auto out = fn();
    page.timings.push_back({stage, std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count()});
    return out;
  }
}

template <typename Fn>
void guarded(PageResult& page, Fn&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    page.error = PageError{e.code(), e.what()};
  } catch (const std::exception& e) {
    page.error = PageError{ErrorCode::Internal, e.what()};
  }
}

double median(std::vector<double> v) {
  if (v.empty()) return 0.0;
  std::sort(v.begin(), v.end());
  const auto n = v.size();
  return n % 2 ? v[n / 2] : (v[n / 2 - 1] + v[n / 2]) / 2.0;
}

void analyze_page(const PipelineConfig& config, PageResult& page) {
  guarded(page, [&] {
    page.image = timed(page, "load", [&] { return load_label_map_file(page.path); });
    page.width = page.image.width();
    page.height = page.image.height();
    page.smoothed = timed(page, "smooth", [&] { return majority_vote_smooth(page.image, config.connectivity, config.tieOrder); });
    auto components = timed(page, "entities", [&] { return entity_components(page.smoothed, config.connectivity); });
    page.lines = timed(page, "lines", [&] { return text_lines_from_components(components); });
    page.mask = timed(page, "mask", [&] { return build_separator_mask(components, config.maxSeparatorThickness); });
    page.diagnostics.insert(page.diagnostics.end(), page.mask.diagnostics.begin(), page.mask.diagnostics.end());
  });
}

void finish_page(const PipelineConfig& config, const IssueTolerances& tol, PageResult& page) {
  if (!page.ok()) return;
  guarded(page, [&] {
    page.lines = timed(page, "split", [&] {
      return split_merged_lines(std::move(page.lines), tol.lineStats,
                                {config.splitFactor, config.splitRounds, config.splitValleyRatio});
    });
    for (const auto& l : page.lines)
      if (l.oversized)
        page.diagnostics.push_back({"OversizedLine", "line " + std::to_string(l.id) + " still exceeds the split threshold"});
    page.grid = timed(page, "grid", [&] {
      return generate_grid(page.mask, Rect{0, 0, page.width, page.height}, GridOptions{tol.gapTol, tol.offsetTol});
    });
    page.boxes = timed(page, "boxes", [&] {
      return assign_content(extract_grid_boxes(page.grid), page.lines, page.grid.titles, page.grid);
    });
    timed(page, "order", [&] {
      page.tree = build_section_tree(page.boxes, page.grid, config.lengthEpsilon);
      page.order = order_sections(page.tree);
    });
    page.articles = timed(page, "articles", [&] {
      return extract_articles(page.order, page.boxes, page.grid, page.number - 1, page.number == 1, config.lengthEpsilon);
    });
    page.diagnostics.insert(page.diagnostics.end(), page.articles.diagnostics.begin(), page.articles.diagnostics.end());
  });
}

json rect_json(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

}  // namespace

std::size_t IssueResult::failed_pages() const {
  return std::size_t(std::count_if(pages.begin(), pages.end(), [](const PageResult& p) { return !p.ok(); }));
}

IssueTolerances issue_tolerances(const PipelineConfig& config, const std::vector<PageResult>& pages) {
  IssueTolerances tol;
  std::vector<double> heights;
  std::vector<double> thickness;
  std::vector<std::vector<TextLine>> line_sets;
  double hull_sum = 0.0;
  for (const auto& p : pages) {
    if (!p.ok()) continue;
    for (const auto& l : p.lines) {
      heights.push_back(l.bbox.height());
      hull_sum += l.hullArea;
    }
    tol.lineStats.count += p.lines.size();
    for (const auto& s : p.mask.verticals) thickness.push_back(s.thickness);
    for (const auto& s : p.mask.horizontals) thickness.push_back(s.thickness);
  }
  if (tol.lineStats.count > 0) tol.lineStats.meanHullArea = hull_sum / double(tol.lineStats.count);
  tol.medianLineHeight = median(heights);
  tol.medianSeparatorThickness = median(thickness);
  tol.gapTol = config.gapTol.value_or(config.gapTolFactor * tol.medianLineHeight);
  tol.offsetTol = config.offsetTol.value_or(config.offsetTolFactor * tol.medianSeparatorThickness);
  return tol;
}

IssueResult segment_issue(const PipelineConfig& config, const std::string& issueId,
                          const std::vector<fs::path>& pages, bool keepRasters) {
  IssueResult issue;
  issue.issueId = issueId;
  issue.pages.resize(pages.size());
  for (std::size_t i = 0; i < pages.size(); ++i) {
    issue.pages[i].number = int(i) + 1;
    issue.pages[i].path = pages[i];
  }
  parallel_for(pages.size(), config.workers, [&](std::size_t i) {
    analyze_page(config, issue.pages[i]);
    if (!keepRasters) {
      issue.pages[i].image = {};
      issue.pages[i].smoothed = {};
    }
  });
  issue.tolerances = issue_tolerances(config, issue.pages);
  parallel_for(pages.size(), config.workers, [&](std::size_t i) { finish_page(config, issue.tolerances, issue.pages[i]); });

  std::vector<std::vector<Article>> per_page;
  for (const auto& p : issue.pages) per_page.push_back(p.ok() ? p.articles.articles : std::vector<Article>{});
  issue.articles = link_cross_page(std::move(per_page));
  return issue;
}

IssueDocument to_issue_document(const IssueResult& issue) {
  IssueDocument doc;
  doc.issueId = issue.issueId;
  for (const auto& p : issue.pages) {
    if (!p.ok()) continue;
    PageModel m;
    m.number = p.number;
    m.width = p.width;
    m.height = p.height;
    m.sourceImage = p.path.filename().string();
    for (const auto& l : p.lines) m.lines.push_back(l.bbox);
    for (const auto& t : p.grid.titles) m.titles.push_back(t.bbox);
    m.boxes = p.boxes;
    doc.pages.push_back(std::move(m));
  }
  doc.articles = issue.articles;
  return doc;
}

std::string articles_json(const IssueResult& issue) {
  json j{{"schema", "artseg.articles"}, {"version", 1}, {"issue", issue.issueId}};
  j["pages"] = json::array();
  for (const auto& p : issue.pages) {
    json jp{{"number", p.number}, {"source", p.path.filename().string()}, {"status", p.ok() ? "ok" : "error"}};
    if (p.ok()) {
      jp["width"] = p.width;
      jp["height"] = p.height;
      jp["lines"] = p.lines.size();
      jp["boxes"] = p.boxes.size();
    } else {
      jp["error"] = {{"code", error_code_name(p.error->code)}, {"message", p.error->message}};
    }
    jp["diagnostics"] = json::array();
    for (const auto& d : p.diagnostics) jp["diagnostics"].push_back({{"code", d.code}, {"message", d.message}});
    j["pages"].push_back(std::move(jp));
  }
  j["articles"] = json::array();
  for (const auto& a : issue.articles) {
    json ja{{"id", a.id},
            {"readingIndex", a.readingIndex},
            {"continuation", continuation_name(a.continuation)},
            {"orphan", a.orphan},
            {"parts", json::array()}};
    for (const auto& part : a.parts) {
      const auto& page = issue.pages.at(std::size_t(part.page));
      json jpart{{"page", part.page + 1}};
      if (part.title)
        jpart["title"] = {{"id", *part.title}, {"bbox", rect_json(page.grid.titles.at(std::size_t(*part.title)).bbox)}};
      else
        jpart["title"] = nullptr;
      jpart["boxes"] = json::array();
      for (int b : part.boxes) jpart["boxes"].push_back({{"id", b}, {"bbox", rect_json(page.boxes.at(std::size_t(b)).bbox)}});
      jpart["lines"] = json::array();
      for (int l : part.textLines) {
        const auto& line = page.lines.at(std::size_t(l));
        json jl{{"id", l}, {"bbox", rect_json(line.bbox)}};
        if (line.residue) jl["residue"] = true;
        jpart["lines"].push_back(std::move(jl));
      }
      ja["parts"].push_back(std::move(jpart));
    }
    j["articles"].push_back(std::move(ja));
  }
  return j.dump(1) + "\n";
}

std::string run_log_records(const IssueResult& issue) {
  std::string out;
  for (const auto& p : issue.pages) {
    json r{{"issue", issue.issueId}, {"page", p.number}, {"source", p.path.string()}, {"status", p.ok() ? "ok" : "error"}};
    if (p.ok()) {
      r["lines"] = p.lines.size();
      r["boxes"] = p.boxes.size();
      r["articles"] = p.articles.articles.size();
    } else {
      r["error"] = {{"code", error_code_name(p.error->code)}, {"message", p.error->message}};
    }
    json t = json::object();
    for (const auto& s : p.timings) t[s.stage] = std::round(s.ms * 1000.0) / 1000.0;
    r["timingsMs"] = t;
    r["diagnostics"] = json::array();
    for (const auto& d : p.diagnostics) r["diagnostics"].push_back({{"code", d.code}, {"message", d.message}});
    out += r.dump() + "\n";
  }
  json s{{"issue", issue.issueId},
         {"pages", issue.pages.size()},
         {"failedPages", issue.failed_pages()},
         {"articles", issue.articles.size()},
         {"gapTol", issue.tolerances.gapTol},
         {"offsetTol", issue.tolerances.offsetTol}};
  out += s.dump() + "\n";
  return out;
}

namespace {

bool is_label_map(const fs::path& p) {
  const auto ext = p.extension().string();
  return fs::is_regular_file(p) && (ext == ".pgm" || ext == ".png");
}

std::vector<fs::path> label_maps_in(const fs::path& dir) {
  std::vector<fs::path> out;
  for (const auto& e : fs::directory_iterator(dir))
    if (is_label_map(e.path())) out.push_back(e.path());
  std::sort(out.begin(), out.end());
  return out;
}

std::string dir_name(const fs::path& dir) {
  auto norm = fs::absolute(dir).lexically_normal();
  if (norm.filename().empty()) norm = norm.parent_path();
  return norm.filename().string();
}

void group_directory(const fs::path& dir, std::vector<IssueInput>& out) {
  if (fs::exists(dir / "manifest.json")) {
    const auto bytes = read_file_bytes(dir / "manifest.json");
    json m;
    try {
      m = json::parse(bytes.begin(), bytes.end());
      for (const auto& i : m.at("issues")) {
        IssueInput in{i.at("id").get<std::string>(), {}};
        for (const auto& p : i.at("pages")) in.pages.push_back(dir / p.at("file").get<std::string>());
        out.push_back(std::move(in));
      }
    } catch (const json::exception& e) {
      throw Error(ErrorCode::InvalidArgument, (dir / "manifest.json").string() + ": " + e.what());
    }
    return;
  }
  if (auto maps = label_maps_in(dir); !maps.empty()) {
    out.push_back({dir_name(dir), std::move(maps)});
    return;
  }
  std::vector<fs::path> subdirs;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_directory()) subdirs.push_back(e.path());
  std::sort(subdirs.begin(), subdirs.end());
  bool any = false;
  for (const auto& s : subdirs)
    if (auto maps = label_maps_in(s); !maps.empty()) {
      out.push_back({dir_name(s), std::move(maps)});
      any = true;
    }
  if (!any) throw Error(ErrorCode::InvalidArgument, "no label maps found under " + dir.string());
}

}  // namespace

std::vector<IssueInput> group_inputs(const std::vector<fs::path>& inputs, const std::string& defaultIssueId) {
  std::vector<IssueInput> out;
  IssueInput loose{defaultIssueId, {}};
  for (const auto& in : inputs) {
    if (fs::is_directory(in))
      group_directory(in, out);
    else
      loose.pages.push_back(in);
  }
  if (!loose.pages.empty()) out.insert(out.begin(), std::move(loose));
  if (out.empty()) throw Error(ErrorCode::InvalidArgument, "no inputs");
  return out;
}

SegmentSummary run_segment(const PipelineConfig& config, const std::vector<fs::path>& inputs,
                           const std::string& defaultIssueId, const fs::path& out) {
  const auto issues = group_inputs(inputs, defaultIssueId);
  SegmentSummary summary;
  std::string log;
  fs::create_directories(out);
  for (const auto& in : issues) {
    auto issue = segment_issue(config, in.id, in.pages);
    write_issue_tree(to_issue_document(issue), out);
    write_text_atomic(out / issue.issueId / "articles.json", articles_json(issue));
    log += run_log_records(issue);
    ++summary.issues;
    summary.pages += int(issue.pages.size());
    summary.failedPages += int(issue.failed_pages());
    summary.articles += int(issue.articles.size());
  }
  write_text_atomic(out / "run.jsonl", log);
  return summary;
}

}  // namespace artseg
