#include "artseg/articles.hpp"

#include <algorithm>
#include <map>
#include <string>

namespace artseg {

bool precedes(const Rect& a, const Rect& b) {
  return a.x0 != b.x0 ? a.x0 < b.x0 : a.y0 < b.y0;
}

namespace {

struct Candidate {
  int id;
  int position;
  int start;
  int end;

  int length() const { return end - start; }
};

class TreeBuilder {
 public:
  TreeBuilder(const SeparatorGrid& grid, int epsilon) : grid_(grid), epsilon_(epsilon) {
    const auto& page = grid.pageBox;
    candidates_.push_back({kPageTopDelimiter, page.y0, page.x0, page.x1});
    for (const auto& h : grid.horizontals) candidates_.push_back({h.id, h.position, h.start, h.end});
    tree_.nodes.push_back({0, page, std::nullopt, {}, {}, std::nullopt});
  }

  void add_box(const GridBox& box) {
    auto sep = parent_separator(box.bbox, std::nullopt);
    int parent = sep ? section_for(*sep) : 0;
    SectionNode leaf;
    leaf.id = int(tree_.nodes.size());
    leaf.bbox = box.bbox;
    leaf.parent = parent;
    leaf.boxes = {box.id};
    if (sep) leaf.delimiter = sep->id;
    tree_.nodes.push_back(leaf);
    tree_.nodes[std::size_t(parent)].children.push_back(leaf.id);
  }

  SectionTree take() { return std::move(tree_); }

 private:
  std::optional<Candidate> parent_separator(const Rect& r, std::optional<int> exclude) const {
    std::optional<Candidate> best;
    for (const auto& c : candidates_) {
      if (exclude && c.id == *exclude) continue;
      if (c.position > r.y0) continue;
      if (c.start > r.x0 + epsilon_ || c.end < r.x1 - epsilon_) continue;
      if (c.length() <= r.width() + epsilon_) continue;
      if (!best || c.position > best->position ||
          (c.position == best->position &&
           (c.length() > best->length() || (c.length() == best->length() && c.id < best->id))))
        best = c;
    }
    return best;
  }

  int section_for(const Candidate& sep) {
    if (auto it = sections_.find(sep.id); it != sections_.end()) return it->second;
    int bottom = grid_.pageBox.y1;
    for (const auto& h : grid_.horizontals) {
      if (h.position <= sep.position) continue;
      if (h.start <= sep.start + epsilon_ && h.end >= sep.end - epsilon_) bottom = std::min(bottom, h.position);
    }
    Rect bbox{sep.start, sep.position, sep.end, bottom};
    auto up = parent_separator(bbox, sep.id);
    int parent = up ? section_for(*up) : 0;

    SectionNode node;
    node.id = int(tree_.nodes.size());
    node.bbox = bbox;
    node.parent = parent;
    node.delimiter = sep.id;
    tree_.nodes.push_back(node);
    tree_.nodes[std::size_t(parent)].children.push_back(node.id);
    sections_[sep.id] = node.id;
    return node.id;
  }

  const SeparatorGrid& grid_;
  int epsilon_;
  std::vector<Candidate> candidates_;
  std::map<int, int> sections_;
  SectionTree tree_;
};

void collect_leaves(SectionTree& tree, int id, std::vector<int>& out) {
  auto& node = tree.nodes[std::size_t(id)];
  auto& children = node.children;
  std::sort(children.begin(), children.end(), [&](int a, int b) {
    const auto& ra = tree.nodes[std::size_t(a)].bbox;
    const auto& rb = tree.nodes[std::size_t(b)].bbox;
    if (precedes(ra, rb)) return true;
    if (precedes(rb, ra)) return false;
    return a < b;
  });
  out.insert(out.end(), node.boxes.begin(), node.boxes.end());
  for (std::size_t i = 0; i < tree.nodes[std::size_t(id)].children.size(); ++i)
    collect_leaves(tree, tree.nodes[std::size_t(id)].children[i], out);
}

std::optional<int> box_title(const GridBox& box, const SeparatorGrid& grid) {
  if (!box.titles.empty()) return *std::min_element(box.titles.begin(), box.titles.end());
  for (const auto& seg : grid.titleSegments) {
    if (seg.y != box.bbox.y0 || seg.start > box.bbox.x0 || seg.end < box.bbox.x1) continue;
    for (const auto& t : grid.titles)
      if (t.id == seg.titleId && overlap_area(t.bbox, box.bbox) > 0) return t.id;
  }
  return std::nullopt;
}

void append_box(Article& article, const GridBox& box, int page) {
  if (article.parts.empty() || article.parts.back().page != page) article.parts.push_back({page, {}, {}, {}});
  auto& part = article.parts.back();
  part.boxes.push_back(box.id);
  part.textLines.insert(part.textLines.end(), box.textLines.begin(), box.textLines.end());
}

}  // namespace

SectionTree build_section_tree(std::span<const GridBox> boxes, const SeparatorGrid& grid, int epsilon) {
  TreeBuilder builder(grid, epsilon);
  for (const auto& box : boxes) builder.add_box(box);
  return builder.take();
}

std::vector<int> order_sections(SectionTree& tree) {
  std::vector<int> out;
  if (!tree.nodes.empty()) collect_leaves(tree, 0, out);
  return out;
}

const char* continuation_name(Continuation c) noexcept {
  switch (c) {
    case Continuation::None: return "none";
    case Continuation::ContinuesPrevious: return "continues-previous";
    case Continuation::ContinuesNext: return "continues-next";
    case Continuation::Both: return "both";
  }
  return "?";
}

Continuation continuation_from_name(std::string_view name) {
  for (auto c : {Continuation::None, Continuation::ContinuesPrevious, Continuation::ContinuesNext,
                 Continuation::Both})
    if (name == continuation_name(c)) return c;
  throw Error(ErrorCode::InvalidArgument, "unknown continuation '" + std::string(name) + "'");
}

bool continues_previous(Continuation c) {
  return c == Continuation::ContinuesPrevious || c == Continuation::Both;
}

bool continues_next(Continuation c) {
  return c == Continuation::ContinuesNext || c == Continuation::Both;
}

Continuation operator|(Continuation a, Continuation b) {
  const bool prev = continues_previous(a) || continues_previous(b);
  const bool next = continues_next(a) || continues_next(b);
  if (prev && next) return Continuation::Both;
  if (prev) return Continuation::ContinuesPrevious;
  if (next) return Continuation::ContinuesNext;
  return Continuation::None;
}

std::size_t Article::line_count() const {
  std::size_t n = 0;
  for (const auto& p : parts) n += p.textLines.size();
  return n;
}

FragmentResult merge_fragment(Article* current, const GridBox& box, const SeparatorGrid& grid, int epsilon) {
  auto d = top_delimiter(box.bbox, grid);
  if (!d || d->length <= box.bbox.width() + epsilon) return FragmentResult::NotFragment;
  if (current == nullptr) return FragmentResult::Orphan;
  append_box(*current, box, current->parts.empty() ? 0 : current->parts.back().page);
  return FragmentResult::Merged;
}

PageArticles extract_articles(std::span<const int> orderedBoxIds, std::span<const GridBox> boxes,
                              const SeparatorGrid& grid, int page, bool firstPageOfIssue, int epsilon) {
  PageArticles out;
  auto find_box = [&](int id) -> const GridBox& {
    if (id >= 0 && std::size_t(id) < boxes.size() && boxes[std::size_t(id)].id == id) return boxes[std::size_t(id)];
    auto it = std::find_if(boxes.begin(), boxes.end(), [id](const GridBox& b) { return b.id == id; });
    if (it == boxes.end()) throw Error(ErrorCode::InvalidArgument, "unknown box id " + std::to_string(id));
    return *it;
  };

  for (int id : orderedBoxIds) {
    const auto& box = find_box(id);
    if (box.hasTitle) {
      Article a;
      append_box(a, box, page);
      a.parts.back().title = box_title(box, grid);
      out.articles.push_back(std::move(a));
      continue;
    }
    if (!out.articles.empty()) {
      auto& current = out.articles.back();
      if (merge_fragment(&current, box, grid, epsilon) == FragmentResult::NotFragment)
        append_box(current, box, page);
      continue;
    }
    Article a;
    append_box(a, box, page);
    a.continuation = Continuation::ContinuesPrevious;
    if (firstPageOfIssue) {
      a.orphan = true;
      out.diagnostics.push_back({"OrphanFragment", "page " + std::to_string(page + 1) + " box " +
                                                       std::to_string(box.id) +
                                                       " has no title and no predecessor"});
    }
    out.articles.push_back(std::move(a));
  }
  for (std::size_t i = 0; i < out.articles.size(); ++i) {
    out.articles[i].id = int(i);
    out.articles[i].readingIndex = int(i);
  }
  return out;
}

std::vector<Article> link_cross_page(std::vector<std::vector<Article>> pages) {
  std::vector<Article> issue;
  std::optional<std::size_t> previous_last;  // logical article holding the previous page's last part
  for (std::size_t p = 0; p < pages.size(); ++p) {
    std::optional<std::size_t> last;
    for (std::size_t i = 0; i < pages[p].size(); ++i) {
      auto& a = pages[p][i];
      const bool headless_first = i == 0 && p > 0 && continues_previous(a.continuation) && !a.orphan;
      if (headless_first && previous_last) {
        auto& target = issue[*previous_last];
        for (auto& part : a.parts) target.parts.push_back(std::move(part));
        target.continuation = target.continuation | Continuation::ContinuesNext;
        last = previous_last;
        continue;
      }
      if (headless_first) a.orphan = true;
      issue.push_back(std::move(a));
      last = issue.size() - 1;
    }
    previous_last = last;
  }
  for (std::size_t i = 0; i < issue.size(); ++i) {
    issue[i].id = int(i);
    issue[i].readingIndex = int(i);
  }
  return issue;
}

}  // namespace artseg
