#pragma once

#include "artseg/articles.hpp"
#include "artseg/geometry.hpp"
#include "artseg/grid.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace artseg {

inline constexpr const char* kAltoNamespace = "http://www.loc.gov/standards/alto/ns-v2#";
inline constexpr const char* kMetsNamespace = "http://www.loc.gov/METS/";
inline constexpr const char* kXlinkNamespace = "http://www.w3.org/1999/xlink";

/// Physical layout of one page as serialized; line and title rectangles are
/// indexed by their ids.
struct PageModel {
  int number = 1;  // 1-based position in the issue
  int width = 0;
  int height = 0;
  std::string sourceImage;
  std::vector<Rect> lines;
  std::vector<Rect> titles;
  std::vector<GridBox> boxes;
};

struct IssueDocument {
  std::string issueId;
  std::optional<std::string> date;
  std::vector<PageModel> pages;
  std::vector<Article> articles;  // ArticlePart::page is the page number minus one
};

std::string alto_file_name(int pageNumber);  // p0001.xml
std::string alto_page_id(int pageNumber);    // P1
std::string alto_block_id(int pageNumber, int boxId);
std::string alto_line_id(int pageNumber, int lineId);
std::string alto_title_id(int pageNumber, int titleId);

std::string emit_alto(const PageModel& page);

/// Throws DanglingReference when an article points at a page, line or title
/// that the ALTO files do not contain.
std::string emit_mets(const IssueDocument& issue);

/// Writes {root}/{issueId}/mets.xml and {root}/{issueId}/alto/pNNNN.xml.
void write_issue_tree(const IssueDocument& issue, const std::filesystem::path& root);

}  // namespace artseg
