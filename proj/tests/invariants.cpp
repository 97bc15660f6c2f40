#include "invariants.hpp"

#include "support.hpp"

#include "artseg/articles.hpp"
#include "artseg/pipeline.hpp"
#include "artseg/smoothing.hpp"

#include <algorithm>
#include <map>
#include <set>

namespace invariants {

using namespace artseg;

namespace {

std::string rect_text(const Rect& r) {
  return "[" + std::to_string(r.x0) + "," + std::to_string(r.y0) + "," + std::to_string(r.x1) + "," +
         std::to_string(r.y1) + "]";
}

// Values of attribute `name` on every element `tag` in `xml`.
std::vector<std::string> attribute_values(const std::string& xml, const std::string& tag, const std::string& name) {
  std::vector<std::string> out;
  const std::string open = "<" + tag + " ";
  const std::string key = " " + name + "=\"";
  for (auto pos = xml.find(open); pos != std::string::npos; pos = xml.find(open, pos + 1)) {
    const auto end = xml.find('>', pos);
    const auto element = xml.substr(pos, end - pos);
    const auto at = element.find(key);
    if (at == std::string::npos) continue;
    const auto start = at + key.size();
    out.push_back(element.substr(start, element.find('"', start) - start));
  }
  return out;
}

// (attribute a, attribute b) pairs per element.
std::vector<std::pair<std::string, std::string>> attribute_pairs(const std::string& xml, const std::string& tag,
                                                                 const std::string& a, const std::string& b) {
  std::vector<std::pair<std::string, std::string>> out;
  const std::string open = "<" + tag + " ";
  auto value = [](const std::string& element, const std::string& name) {
    const std::string key = " " + name + "=\"";
    const auto at = element.find(key);
    if (at == std::string::npos) return std::string();
    const auto start = at + key.size();
    return element.substr(start, element.find('"', start) - start);
  };
  for (auto pos = xml.find(open); pos != std::string::npos; pos = xml.find(open, pos + 1)) {
    const auto element = xml.substr(pos, xml.find('>', pos) - pos);
    out.emplace_back(value(element, a), value(element, b));
  }
  return out;
}

}  // namespace

std::string partition(std::span<const GridBox> boxes, const Rect& page) {
  std::int64_t total = 0;
  for (std::size_t i = 0; i < boxes.size(); ++i) {
    if (!page.contains(boxes[i].bbox)) return "box " + rect_text(boxes[i].bbox) + " leaves the page";
    total += boxes[i].bbox.area();
    for (std::size_t j = i + 1; j < boxes.size(); ++j)
      if (overlap_area(boxes[i].bbox, boxes[j].bbox) > 0)
        return "boxes " + rect_text(boxes[i].bbox) + " and " + rect_text(boxes[j].bbox) + " overlap";
  }
  if (total != page.area())
    return "box areas sum to " + std::to_string(total) + ", page area " + std::to_string(page.area());
  return {};
}

std::string prolongation(const SeparatorMask& mask, const Rect& page, const GridOptions& options) {
  SeparatorGrid connected;
  connected.pageBox = page;
  connected.titles = mask.titles;
  connected.horizontals = mask.horizontals;
  connected.verticals = connect_collinear(mask.verticals, options.gapTol, options.offsetTol);
  const auto after_v = prolong_verticals(connected);
  for (std::size_t i = 0; i < connected.verticals.size(); ++i) {
    const auto& a = connected.verticals[i];
    const auto& b = after_v.verticals[i];
    if (a.position != b.position || b.start > a.start || b.end < a.end)
      return "vertical at " + std::to_string(a.position) + " shrank or moved";
  }
  auto before_h = after_v;
  before_h.horizontals = connect_collinear(after_v.horizontals, options.gapTol, options.offsetTol);
  const auto full = prolong_horizontals_and_titles(before_h);
  for (std::size_t i = 0; i < before_h.horizontals.size(); ++i) {
    const auto& a = before_h.horizontals[i];
    const auto& b = full.horizontals[i];
    if (a.position != b.position || b.start > a.start || b.end < a.end)
      return "horizontal at " + std::to_string(a.position) + " shrank or moved";
  }
  for (const auto& t : full.titleSegments) {
    const auto& title = full.titles.at(std::size_t(t.titleId)).bbox;
    if (t.y != title.y0 || t.start > title.x0 || t.end < title.x1) return "title segment does not cover its title";
  }
  if (normalized_segments(full) != normalized_segments(generate_grid(mask, page, options)))
    return "generate_grid differs from the staged construction";
  const auto again = prolong_horizontals_and_titles(prolong_verticals(full));
  if (normalized_segments(again) != normalized_segments(full)) return "second prolongation changed the grid";
  return {};
}

std::string order_permutation(std::span<const int> order, std::span<const GridBox> boxes) {
  std::vector<int> sorted(order.begin(), order.end());
  std::sort(sorted.begin(), sorted.end());
  std::vector<int> ids;
  for (const auto& b : boxes) ids.push_back(b.id);
  std::sort(ids.begin(), ids.end());
  if (sorted != ids)
    return "reading order lists " + std::to_string(order.size()) + " ids for " + std::to_string(boxes.size()) +
           " boxes, not a permutation";
  return {};
}

std::string split_conservation(std::span<const TextLine> before, std::span<const TextLine> after) {
  std::vector<Point> a, b;
  for (const auto& l : before) a.insert(a.end(), l.pixels.begin(), l.pixels.end());
  for (const auto& l : after) b.insert(b.end(), l.pixels.begin(), l.pixels.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  if (std::adjacent_find(b.begin(), b.end()) != b.end()) return "split lines share a pixel";
  if (a != b) return "splitting changed the pixel set (" + std::to_string(a.size()) + " -> " + std::to_string(b.size()) + ")";
  for (std::size_t i = 0; i < after.size(); ++i)
    if (after[i].id != int(i)) return "line ids are not 0..n-1";
  return {};
}

std::string assignment_conservation(std::span<const TextLine> lines, std::span<const GridBox> boxes) {
  std::map<int, int> seen;
  for (const auto& b : boxes)
    for (int l : b.textLines) ++seen[l];
  for (const auto& l : lines)
    if (seen[l.id] != 1) return "line " + std::to_string(l.id) + " sits in " + std::to_string(seen[l.id]) + " boxes";
  if (seen.size() != lines.size()) return "boxes reference unknown lines";
  for (const auto& b : boxes)
    if (b.textLines.empty()) return "box " + std::to_string(b.id) + " kept without lines";
  return {};
}

std::vector<std::string> page_structure(const LabelImage& image, const PipelineConfig& config) {
  std::vector<std::string> problems;
  auto add = [&](std::string s) {
    if (!s.empty()) problems.push_back(std::move(s));
  };
  const Rect page{0, 0, image.width(), image.height()};
  const auto smoothed = majority_vote_smooth(image, config.connectivity, config.tieOrder);
  const auto components = entity_components(smoothed, config.connectivity);
  PageResult result;
  result.lines = text_lines_from_components(components);
  result.mask = build_separator_mask(components, config.maxSeparatorThickness);
  const auto tol = issue_tolerances(config, {result});
  const auto split = split_merged_lines(result.lines, tol.lineStats,
                                        {config.splitFactor, config.splitRounds, config.splitValleyRatio});
  add(split_conservation(result.lines, split));
  const GridOptions options{tol.gapTol, tol.offsetTol};
  add(prolongation(result.mask, page, options));
  const auto grid = generate_grid(result.mask, page, options);
  const auto raw_boxes = extract_grid_boxes(grid);
  add(partition(raw_boxes, page));
  const auto boxes = assign_content(raw_boxes, split, grid.titles, grid);
  add(assignment_conservation(split, boxes));
  auto tree = build_section_tree(boxes, grid, config.lengthEpsilon);
  const auto order = order_sections(tree);
  add(order_permutation(order, boxes));
  return problems;
}

std::string mets_integrity(const std::filesystem::path& issueDir) {
  const auto mets = testing::slurp(issueDir / "mets.xml");
  if (mets.empty()) return "missing mets.xml";
  std::map<std::string, std::set<std::string>> ids_by_file;
  for (auto pos = mets.find("<mets:file "); pos != std::string::npos; pos = mets.find("<mets:file ", pos + 1)) {
    const auto id = attribute_values(mets.substr(pos, mets.find('>', pos) - pos + 1), "mets:file", "ID");
    if (id.empty() || id.front().rfind("ALTO", 0) != 0) continue;
    const auto locat = mets.find("<mets:FLocat ", pos);
    const auto href = attribute_values(mets.substr(locat, mets.find('>', locat) - locat + 1), "mets:FLocat", "xlink:href");
    if (href.empty()) return "ALTO file " + id.front() + " has no location";
    const auto alto = testing::slurp(issueDir / href.front());
    if (alto.empty()) return "ALTO file " + href.front() + " missing";
    std::set<std::string> ids;
    for (const char* tag : {"Page", "TextBlock", "TextLine"})
      for (const auto& v : attribute_values(alto, tag, "ID"))
        if (!ids.insert(v).second) return "duplicate ID " + v + " in " + href.front();
    ids_by_file[id.front()] = std::move(ids);
  }
  for (const auto& [file, begin] : attribute_pairs(mets, "mets:area", "FILEID", "BEGIN")) {
    const auto found = ids_by_file.find(file);
    if (found == ids_by_file.end()) return "area points at unknown file " + file;
    if (!found->second.count(begin)) return "area " + begin + " missing from " + file;
  }
  return {};
}

}  // namespace invariants
