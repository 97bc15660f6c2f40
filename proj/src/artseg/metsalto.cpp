#include "artseg/metsalto.hpp"

#include "artseg/label_io.hpp"
#include "artseg/labels.hpp"

#include <algorithm>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>

namespace artseg {

namespace {

std::string escape(std::string_view s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

std::string padded(int value, int width) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%0*d", width, value);
  return buf;
}

class XmlWriter {
 public:
  XmlWriter() { out_ << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"; }

  XmlWriter& open(std::string_view name) {
    close_start_tag();
    indent();
    out_ << '<' << name;
    stack_.emplace_back(name);
    pending_ = true;
    return *this;
  }

  XmlWriter& attr(std::string_view name, std::string_view value) {
    out_ << ' ' << name << "=\"" << escape(value) << '"';
    return *this;
  }
  XmlWriter& attr(std::string_view name, long long value) { return attr(name, std::to_string(value)); }

  XmlWriter& text(std::string_view value) {
    if (pending_) {
      out_ << '>';
      pending_ = false;
    }
    out_ << escape(value);
    inline_text_ = true;
    return *this;
  }

  XmlWriter& close() {
    auto name = stack_.back();
    stack_.pop_back();
    if (pending_) {
      out_ << "/>\n";
      pending_ = false;
    } else if (inline_text_) {
      out_ << "</" << name << ">\n";
      inline_text_ = false;
    } else {
      indent();
      out_ << "</" << name << ">\n";
    }
    return *this;
  }

  XmlWriter& leaf(std::string_view name, std::string_view value) { return open(name).text(value).close(); }

  std::string str() {
    while (!stack_.empty()) close();
    return out_.str();
  }

 private:
  void close_start_tag() {
    if (pending_) {
      out_ << ">\n";
      pending_ = false;
    }
  }
  void indent() {
    for (std::size_t i = 0; i < stack_.size(); ++i) out_ << "  ";
  }

  std::ostringstream out_;
  std::vector<std::string> stack_;
  bool pending_ = false;
  bool inline_text_ = false;
};

void position(XmlWriter& w, const Rect& r) {
  w.attr("HPOS", r.x0).attr("VPOS", r.y0).attr("WIDTH", r.width()).attr("HEIGHT", r.height());
}

void text_line(XmlWriter& w, const std::string& id, const Rect& r) {
  w.open("TextLine").attr("ID", id);
  position(w, r);
  w.open("String").attr("CONTENT", "");
  position(w, r);
  w.close().close();
}

std::string image_mime(const std::string& name) {
  auto ext = std::filesystem::path(name).extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return char(std::tolower(c)); });
  if (ext == ".png") return "image/png";
  return "image/x-portable-graymap";
}

std::string software_version() { return ARTSEG_VERSION_STRING; }

}  // namespace

std::string alto_file_name(int pageNumber) { return "p" + padded(pageNumber, 4) + ".xml"; }
std::string alto_page_id(int pageNumber) { return "P" + std::to_string(pageNumber); }
std::string alto_block_id(int pageNumber, int boxId) {
  return alto_page_id(pageNumber) + "_TB" + padded(boxId + 1, 4);
}
std::string alto_line_id(int pageNumber, int lineId) {
  return alto_page_id(pageNumber) + "_TL" + padded(lineId + 1, 5);
}
std::string alto_title_id(int pageNumber, int titleId) {
  return alto_page_id(pageNumber) + "_TI" + padded(titleId + 1, 4);
}

std::string emit_alto(const PageModel& page) {
  XmlWriter w;
  w.open("alto")
      .attr("xmlns", kAltoNamespace)
      .attr("xmlns:xlink", kXlinkNamespace)
      .attr("xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance")
      .attr("xsi:schemaLocation", std::string(kAltoNamespace) + " http://www.loc.gov/standards/alto/alto-v2.0.xsd");
  w.open("Description");
  w.leaf("MeasurementUnit", "pixel");
  w.open("sourceImageInformation").leaf("fileName", page.sourceImage).close();
  w.open("OCRProcessing").attr("ID", "OCR_0");
  w.open("ocrProcessingStep");
  w.leaf("processingStepDescription",
         "layout analysis from a pixel label map; String CONTENT is left empty for an external OCR engine");
  w.open("processingSoftware");
  w.leaf("softwareName", "artseg");
  w.leaf("softwareVersion", software_version());
  w.close();  // processingSoftware
  w.close().close().close();  // ocrProcessingStep, OCRProcessing, Description

  const int n = page.number;
  w.open("Layout");
  w.open("Page")
      .attr("ID", alto_page_id(n))
      .attr("PHYSICAL_IMG_NR", n)
      .attr("HEIGHT", page.height)
      .attr("WIDTH", page.width);
  w.open("PrintSpace");
  position(w, Rect{0, 0, page.width, page.height});

  std::set<int> placed_titles;
  for (const auto& box : page.boxes) {
    w.open("TextBlock").attr("ID", alto_block_id(n, box.id));
    position(w, box.bbox);
    for (int t : box.titles) {
      text_line(w, alto_title_id(n, t), page.titles.at(std::size_t(t)));
      placed_titles.insert(t);
    }
    for (int l : box.textLines) text_line(w, alto_line_id(n, l), page.lines.at(std::size_t(l)));
    w.close();
  }
  std::vector<int> loose;
  for (int t = 0; t < int(page.titles.size()); ++t)
    if (!placed_titles.count(t)) loose.push_back(t);
  if (!loose.empty()) {
    Rect bound;
    for (int t : loose) bound = bound.united(page.titles[std::size_t(t)]);
    w.open("TextBlock").attr("ID", alto_page_id(n) + "_TB_TITLES");
    position(w, bound);
    for (int t : loose) text_line(w, alto_title_id(n, t), page.titles[std::size_t(t)]);
    w.close();
  }
  return w.str();
}

std::string emit_mets(const IssueDocument& issue) {
  std::map<int, std::size_t> by_number;
  std::vector<std::set<std::string>> alto_ids(issue.pages.size());
  for (std::size_t p = 0; p < issue.pages.size(); ++p) {
    const auto& page = issue.pages[p];
    by_number[page.number] = p;
    for (int l = 0; l < int(page.lines.size()); ++l) alto_ids[p].insert(alto_line_id(page.number, l));
    for (int t = 0; t < int(page.titles.size()); ++t) alto_ids[p].insert(alto_title_id(page.number, t));
  }

  XmlWriter w;
  w.open("mets:mets")
      .attr("xmlns:mets", kMetsNamespace)
      .attr("xmlns:xlink", kXlinkNamespace)
      .attr("xmlns:xsi", "http://www.w3.org/2001/XMLSchema-instance")
      .attr("xsi:schemaLocation", std::string(kMetsNamespace) + " http://www.loc.gov/standards/mets/version112/mets.xsd")
      .attr("OBJID", issue.issueId)
      .attr("TYPE", "newspaper issue");
  w.open("mets:metsHdr");
  w.open("mets:agent").attr("ROLE", "CREATOR").attr("TYPE", "OTHER").attr("OTHERTYPE", "SOFTWARE");
  w.leaf("mets:name", "artseg " + software_version());
  w.leaf("mets:note", "METS 1.12; ALTO 2.0; label table version " + std::to_string(kLabelTableVersion));
  w.close().close();

  if (!issue.pages.empty()) {
    w.open("mets:fileSec");
    w.open("mets:fileGrp").attr("USE", "IMAGE");
    for (const auto& page : issue.pages) {
      w.open("mets:file").attr("ID", "IMG" + padded(page.number, 4)).attr("MIMETYPE", image_mime(page.sourceImage));
      w.open("mets:FLocat").attr("LOCTYPE", "URL").attr("xlink:href", page.sourceImage).close();
      w.close();
    }
    w.close();
    w.open("mets:fileGrp").attr("USE", "ALTO");
    for (const auto& page : issue.pages) {
      w.open("mets:file").attr("ID", "ALTO" + padded(page.number, 4)).attr("MIMETYPE", "text/xml");
      w.open("mets:FLocat").attr("LOCTYPE", "URL").attr("xlink:href", "alto/" + alto_file_name(page.number)).close();
      w.close();
    }
    w.close().close();
  }

  w.open("mets:structMap").attr("TYPE", "PHYSICAL");
  w.open("mets:div").attr("ID", "PHYS_ISSUE").attr("TYPE", "issue");
  for (const auto& page : issue.pages) {
    w.open("mets:div").attr("ID", "PHYS" + padded(page.number, 4)).attr("TYPE", "page").attr("ORDER", page.number);
    w.open("mets:fptr").attr("FILEID", "IMG" + padded(page.number, 4)).close();
    w.open("mets:fptr").attr("FILEID", "ALTO" + padded(page.number, 4)).close();
    w.close();
  }
  w.close().close();

  std::vector<const Article*> ordered;
  for (const auto& a : issue.articles) ordered.push_back(&a);
  std::stable_sort(ordered.begin(), ordered.end(),
                   [](const Article* a, const Article* b) { return a->readingIndex < b->readingIndex; });

  w.open("mets:structMap").attr("TYPE", "LOGICAL");
  w.open("mets:div").attr("ID", "LOG_ISSUE").attr("TYPE", "issue").attr("LABEL", issue.issueId);
  if (issue.date) w.attr("ORDERLABEL", *issue.date);
  for (const auto* a : ordered) {
    w.open("mets:div")
        .attr("ID", "ART" + padded(a->readingIndex + 1, 4))
        .attr("TYPE", "article")
        .attr("ORDER", a->readingIndex + 1);
    w.open("mets:fptr").open("mets:seq");
    for (const auto& part : a->parts) {
      auto found = by_number.find(part.page + 1);
      if (found == by_number.end())
        throw Error(ErrorCode::DanglingReference,
                    "article " + std::to_string(a->id) + " refers to missing page " + std::to_string(part.page + 1));
      const auto slot = found->second;
      const auto& page = issue.pages[slot];
      std::vector<std::string> ids;
      if (part.title) ids.push_back(alto_title_id(page.number, *part.title));
      for (int l : part.textLines) ids.push_back(alto_line_id(page.number, l));
      for (const auto& id : ids) {
        if (!alto_ids[slot].count(id))
          throw Error(ErrorCode::DanglingReference, "dangling reference " + id);
        w.open("mets:area")
            .attr("FILEID", "ALTO" + padded(page.number, 4))
            .attr("BEGIN", id)
            .attr("BETYPE", "IDREF")
            .close();
      }
    }
    w.close().close().close();
  }
  return w.str();
}

void write_issue_tree(const IssueDocument& issue, const std::filesystem::path& root) {
  const auto dir = root / issue.issueId;
  const auto mets = emit_mets(issue);
  std::filesystem::create_directories(dir / "alto");
  for (const auto& page : issue.pages) write_text_atomic(dir / "alto" / alto_file_name(page.number), emit_alto(page));
  write_text_atomic(dir / "mets.xml", mets);
}

}  // namespace artseg
