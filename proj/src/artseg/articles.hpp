#pragma once

#include "artseg/error.hpp"
#include "artseg/geometry.hpp"
#include "artseg/grid.hpp"

#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace artseg {

inline constexpr int kDefaultLengthEpsilon = 2;

struct SectionNode {
  int id = 0;
  Rect bbox;
  std::optional<int> parent;
  std::vector<int> children;
  std::vector<int> boxes;         // leaves only: the one grid box they stand for
  std::optional<int> delimiter;   // horizontal id; kPageTopDelimiter for the page edge
};

/// Flat node storage; node 0 is the root and covers the page.
struct SectionTree {
  std::vector<SectionNode> nodes;

  const SectionNode& root() const { return nodes.front(); }
  bool is_leaf(int id) const { return !nodes[std::size_t(id)].boxes.empty(); }
};

/// Top-left precedence between siblings: smaller x first, then smaller y.
bool precedes(const Rect& a, const Rect& b);

/// Each box (and each section in turn) hangs under the section opened by the
/// nearest horizontal above it that covers it and is longer than it by more
/// than `epsilon`. The page top acts as a full-width horizontal at y = 0.
SectionTree build_section_tree(std::span<const GridBox> boxes, const SeparatorGrid& grid,
                               int epsilon = kDefaultLengthEpsilon);

/// Sorts children at every node by `precedes` and returns the box ids in
/// depth-first leaf order.
std::vector<int> order_sections(SectionTree& tree);

enum class Continuation { None, ContinuesPrevious, ContinuesNext, Both };

const char* continuation_name(Continuation c) noexcept;
Continuation continuation_from_name(std::string_view name);
Continuation operator|(Continuation a, Continuation b);
bool continues_previous(Continuation c);
bool continues_next(Continuation c);

/// The portion of an article lying on one page.
struct ArticlePart {
  int page = 0;
  std::vector<int> boxes;
  std::optional<int> title;
  std::vector<int> textLines;

  friend bool operator==(const ArticlePart&, const ArticlePart&) = default;
};

struct Article {
  int id = 0;
  std::vector<ArticlePart> parts;
  Continuation continuation = Continuation::None;
  int readingIndex = 0;
  bool orphan = false;

  std::optional<int> title() const { return parts.empty() ? std::nullopt : parts.front().title; }
  std::size_t line_count() const;

  friend bool operator==(const Article&, const Article&) = default;
};

struct PageArticles {
  std::vector<Article> articles;
  std::vector<Diagnostic> diagnostics;  // OrphanFragment
};

enum class FragmentResult { Merged, NotFragment, Orphan };

/// Applies the fragment rule to a title-less box. With a predecessor and a
/// top delimiter longer than the box, the box is appended to `current`.
/// Without a predecessor and such a delimiter the box is an orphan.
FragmentResult merge_fragment(Article* current, const GridBox& box, const SeparatorGrid& grid,
                              int epsilon = kDefaultLengthEpsilon);

/// Scans boxes in reading order: a titled box opens an article, title-less
/// boxes extend the current one. A title-less box with no current article
/// opens a headless article (ContinuesPrevious); on the issue's first page it
/// is also flagged orphan.
PageArticles extract_articles(std::span<const int> orderedBoxIds, std::span<const GridBox> boxes,
                              const SeparatorGrid& grid, int page, bool firstPageOfIssue,
                              int epsilon = kDefaultLengthEpsilon);

/// Merges each page's headless first article into the article that ended the
/// previous page and renumbers ids and reading indices over the issue.
std::vector<Article> link_cross_page(std::vector<std::vector<Article>> pages);

}  // namespace artseg
