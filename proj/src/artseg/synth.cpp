#include "artseg/synth.hpp"

#include <json.hpp>

#include <algorithm>
#include <cstdio>
#include <numeric>
#include <random>

namespace artseg::synth {

using json = nlohmann::ordered_json;

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

Degradations robustness_defaults() { return {0.3, 0.1, 0.0}; }

namespace {

// Portable draws on top of mt19937_64 (the std distributions are not
// specified bit-for-bit across standard libraries).
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  int uniform(int lo, int hi) {
    if (hi <= lo) return lo;
    const auto span = std::uint64_t(hi - lo) + 1;
    return lo + int(engine_() % span);
  }
  int uniform(Range r) { return uniform(r.lo, r.hi); }
  bool bernoulli(double p) {
    if (p <= 0.0) return false;
    if (p >= 1.0) return true;
    return double(engine_() >> 11) * 0x1.0p-53 < p;
  }

 private:
  std::mt19937_64 engine_;
};

[[noreturn]] void infeasible(const std::string& why) { throw Error(ErrorCode::InfeasibleRecipe, why); }

struct Unit {
  int article;   // page-local index
  int line;      // first line carried by the unit
  bool title;
  int height;
};

struct PlacedLine {
  Rect rect;
  int column;
  int section;
  bool fullWidth;
};

struct PagePart {
  std::optional<Rect> title;
  std::vector<PlacedLine> lines;
  std::vector<Rect> boxes;
  bool headless = false;
};

std::optional<std::vector<int>> pack(const std::vector<Unit>& units, int columns, int cap, int gap) {
  std::vector<int> col(units.size());
  int c = 0;
  int h = 0;
  bool empty = true;
  for (std::size_t i = 0; i < units.size(); ++i) {
    const int need = empty ? units[i].height : h + gap + units[i].height;
    if (need > cap && !empty) {
      if (++c >= columns) return std::nullopt;
      h = units[i].height;
    } else {
      h = need;
    }
    if (h > cap) return std::nullopt;
    empty = false;
    col[i] = c;
  }
  return col;
}

void paint_band(LabelImage& img, const Rect& r, bool title, Rng& rng) {
  const auto chr = title ? RawLabel::TitleCharacter : RawLabel::Character;
  const auto inter = title ? RawLabel::TitleInterCharacter : RawLabel::InterCharacter;
  const auto word = title ? RawLabel::TitleInterWord : RawLabel::InterWord;
  int x = r.x0;
  int chars_left = rng.uniform(3, 7);
  auto fill = [&](int width, RawLabel code) {
    for (int i = 0; i < width && x < r.x1; ++i, ++x)
      for (int y = r.y0; y < r.y1; ++y) img.set(x, y, code);
  };
  while (x < r.x1) {
    fill(rng.uniform(6, 12), chr);
    if (--chars_left > 0) {
      fill(rng.uniform(1, 3), inter);
    } else {
      fill(rng.uniform(6, 10), word);
      chars_left = rng.uniform(3, 7);
    }
  }
}

void paint_rect(LabelImage& img, const Rect& r, RawLabel code) {
  for (int y = r.y0; y < r.y1; ++y)
    for (int x = r.x0; x < r.x1; ++x) img.set(x, y, code);
}

Rect rule_rect(Orientation o, int position, int start, int end, int thickness) {
  const int lo = position - (thickness - 1) / 2;
  return o == Orientation::Vertical ? Rect{lo, start, lo + thickness, end} : Rect{start, lo, end, lo + thickness};
}

struct RenderedPage {
  LabelImage image;
  PageTruth truth;
  std::vector<bool> headless;  // per part
};

RenderedPage render_page(const PageRecipe& recipe, const Geometry& g) {
  const int W = recipe.pageWidth;
  const int M = g.margin;
  if (W < 2 * M + 2 * g.columnInset + g.minTextWidth) infeasible("page width " + std::to_string(W) + " too small");
  const auto& d = recipe.degradations;
  for (double p : {d.separatorBreakProb, d.lineFuseProb, d.titleMislabelProb})
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "degradation probabilities must lie in [0,1]");

  Rng paint_rng(mix_seed(recipe.rngSeed ^ 0x5041494E54ull));
  Rng degrade_rng(mix_seed(recipe.rngSeed ^ 0x444547524144ull));

  std::vector<PagePart> parts;
  std::vector<TruthSeparator> separators;
  struct TextBand { Rect rect; bool title; };
  std::vector<TextBand> bands;

  const int ns = int(recipe.sections.size());
  std::vector<int> rule_centres(std::size_t(ns), 0);  // rule above section s (s >= 1)
  struct Fragment {
    int part;
    int section;
    bool startsWithTitle;
    int ruleBelow;  // -1 when the fragment ends its column
    int x0;
    int x1;
  };
  std::vector<Fragment> fragments;

  int y = M;
  for (int s = 0; s < ns; ++s) {
    const auto& sec = recipe.sections[std::size_t(s)];
    if (sec.columns < 1) infeasible("section needs at least one column");
    if (s > 0) {
      const int centre = y + g.sectionPad;
      rule_centres[std::size_t(s)] = centre;
      separators.push_back({Orientation::Horizontal, centre, M, W - M, g.ruleThickness});
      y = centre + g.sectionPad;
    }
    const int top = y;
    const int c = sec.columns;
    const int pitch = (W - 2 * M) / c;
    std::vector<int> col_x0(std::size_t(c) + 1);
    for (int i = 0; i < c; ++i) col_x0[std::size_t(i)] = M + i * pitch;
    col_x0[std::size_t(c)] = W - M;
    for (int i = 0; i < c; ++i)
      if (col_x0[std::size_t(i) + 1] - col_x0[std::size_t(i)] - 2 * g.columnInset < g.minTextWidth)
        infeasible(std::to_string(c) + " columns do not fit a page " + std::to_string(W) + " px wide");

    std::vector<Unit> units;
    const int first_part = int(parts.size());
    for (const auto& a : sec.articles) {
      const int ai = int(parts.size());
      if (a.lines < 1) infeasible("an article needs at least one line");
      if (!a.headless && a.titleHeight < 4) infeasible("title height below 4 px");
      PagePart part;
      part.headless = a.headless;
      parts.push_back(part);
      int li = 0;
      if (!a.headless) units.push_back({ai, li++, true, a.titleHeight + g.titleGap + g.lineBand});
      for (; li < a.lines; ++li) units.push_back({ai, li, false, g.lineBand});
    }

    std::vector<int> col_of;
    if (!units.empty()) {
      int lo = 0;
      int hi = 0;
      for (const auto& u : units) {
        lo = std::max(lo, u.height);
        hi += u.height + g.lineGap;
      }
      while (lo < hi) {
        const int mid = lo + (hi - lo) / 2;
        if (pack(units, c, mid, g.lineGap))
          hi = mid;
        else
          lo = mid + 1;
      }
      col_of = *pack(units, c, lo, g.lineGap);
    }

    int height = 0;
    std::vector<int> cursor(std::size_t(c), -1);  // bottom of the last unit, -1 while empty
    std::vector<int> last_article(std::size_t(c), -1);
    for (std::size_t k = 0; k < units.size(); ++k) {
      const auto& u = units[k];
      const int col = col_of[k];
      const auto ci = std::size_t(col);
      const int tx0 = col_x0[ci] + g.columnInset;
      const int tx1 = col_x0[ci + 1] - g.columnInset;
      const auto& spec = sec.articles[std::size_t(u.article - first_part)];
      auto& part = parts[std::size_t(u.article)];

      int uy = cursor[ci] < 0 ? top : cursor[ci] + g.lineGap;
      if (last_article[ci] != u.article) {
        if (cursor[ci] >= 0) {
          const int centre = cursor[ci] + g.lineGap / 2;
          separators.push_back({Orientation::Horizontal, centre, tx0, tx1, g.ruleThickness});
          fragments.back().ruleBelow = centre;
        }
        fragments.push_back({u.article, s, u.title, -1, col == 0 ? 0 : col_x0[ci], col == c - 1 ? W : col_x0[ci + 1]});
      }
      if (u.title) {
        const int tw = std::max(g.minTextWidth, (tx1 - tx0) * paint_rng.uniform(50, 100) / 100);
        Rect t{tx0, uy, tx0 + tw, uy + spec.titleHeight};
        part.title = t;
        bands.push_back({t, true});
        uy = t.y1 + g.titleGap;
      }
      int lw = tx1 - tx0;
      if (u.line == spec.lines - 1)
        lw = std::max(g.minTextWidth / 2, lw * std::clamp(spec.lastLineWidthPct, 1, 100) / 100);
      Rect line{tx0, uy, tx0 + lw, uy + g.lineBand};
      part.lines.push_back({line, col, s, lw == tx1 - tx0});
      bands.push_back({line, false});
      cursor[ci] = line.y1;
      last_article[ci] = u.article;
      height = std::max(height, line.y1 - top);
    }
    if (height > 0)
      for (int i = 1; i < c; ++i)
        separators.push_back({Orientation::Vertical, col_x0[std::size_t(i)], top, top + height, g.ruleThickness});
    y = top + height;
  }

  const int content_height = y + M;
  const int H = recipe.pageHeight.value_or(content_height);
  if (H < content_height)
    infeasible("content needs " + std::to_string(content_height) + " px but the page is " + std::to_string(H) + " px high");

  // Grid boxes per column fragment.
  for (const auto& f : fragments) {
    auto& part = parts[std::size_t(f.part)];
    const int sec_top = f.section == 0 ? 0 : rule_centres[std::size_t(f.section)];
    const int sec_bottom = f.section == ns - 1 ? H : rule_centres[std::size_t(f.section + 1)];
    int by0 = sec_top;
    if (f.startsWithTitle) by0 = part.title->y0;
    const int by1 = f.ruleBelow >= 0 ? f.ruleBelow : sec_bottom;
    part.boxes.push_back({f.x0, by0, f.x1, by1});
  }

  LabelImage img(W, H);
  img.set_dpi(g.dpi);
  for (const auto& b : bands) paint_band(img, b.rect, b.title, paint_rng);
  for (const auto& s : separators) {
    const auto code = s.orientation == Orientation::Vertical ? RawLabel::VerticalSeparator : RawLabel::HorizontalSeparator;
    paint_rect(img, rule_rect(s.orientation, s.position, s.start, s.end, s.thickness), code);
  }

  PageTruth truth;
  truth.width = W;
  truth.height = H;

  // Title mislabels.
  std::vector<std::vector<bool>> mislabeled(parts.size());
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& lines = parts[p].lines;
    mislabeled[p].assign(lines.size(), false);
    for (std::size_t i = 1; i + 1 < lines.size(); ++i) {
      if (mislabeled[p][i - 1]) continue;
      if (lines[i + 1].column != lines[i].column || lines[i + 1].section != lines[i].section) continue;
      if (!degrade_rng.bernoulli(d.titleMislabelProb)) continue;
      mislabeled[p][i] = true;
      const auto& r = lines[i].rect;
      for (int yy = r.y0; yy < r.y1; ++yy)
        for (int xx = r.x0; xx < r.x1; ++xx) {
          auto code = std::uint8_t(img.at(xx, yy));
          img.set(xx, yy, RawLabel(code + 3));
        }
      truth.mislabeledLines.push_back(r);
    }
  }

  // Fused line pairs.
  for (std::size_t p = 0; p < parts.size(); ++p) {
    const auto& lines = parts[p].lines;
    std::vector<bool> used(lines.size(), false);
    for (std::size_t i = 0; i + 1 < lines.size(); ++i) {
      const auto& a = lines[i];
      const auto& b = lines[i + 1];
      if (used[i] || mislabeled[p][i] || mislabeled[p][i + 1]) continue;
      if (a.column != b.column || a.section != b.section || !a.fullWidth || !b.fullWidth) continue;
      if (!degrade_rng.bernoulli(d.lineFuseProb)) continue;
      used[i] = used[i + 1] = true;
      const int x = degrade_rng.uniform(a.rect.x0 + 4, a.rect.x1 - 5);
      for (int yy = a.rect.y1; yy < b.rect.y0; ++yy) img.set(x, yy, RawLabel::Character);
      truth.fusedLines.push_back({a.rect, b.rect});
    }
  }

  // Separator breaks.
  for (const auto& s : separators) {
    if (s.end - s.start < 20 + 5) continue;
    if (!degrade_rng.bernoulli(d.separatorBreakProb)) continue;
    const int gap = degrade_rng.uniform(2, 5);
    const int at = degrade_rng.uniform(s.start + 10, s.end - 10 - gap);
    Rect hole = rule_rect(s.orientation, s.position, at, at + gap, s.thickness);
    paint_rect(img, hole, RawLabel::Background);
    ++truth.brokenSeparators;
  }

  truth.separators = separators;
  RenderedPage out{std::move(img), std::move(truth), {}};
  for (auto& p : parts) {
    TruthPart tp;
    tp.title = p.title;
    for (const auto& l : p.lines) tp.lines.push_back(l.rect);
    tp.boxes = p.boxes;
    tp.continuation = p.headless ? Continuation::ContinuesPrevious : Continuation::None;
    out.truth.parts.push_back(std::move(tp));
    out.headless.push_back(p.headless);
  }
  return out;
}

}  // namespace

GeneratedIssue generate_issue(std::vector<PageRecipe> recipes, int spanningArticles, std::uint64_t seed,
                              const Geometry& geometry) {
  const int pages = int(recipes.size());
  if (spanningArticles < 0 || (spanningArticles > 0 && spanningArticles > pages - 1))
    infeasible(std::to_string(spanningArticles) + " spanning articles need at least " +
               std::to_string(spanningArticles + 1) + " pages");

  Rng rng(mix_seed(seed ^ 0x5350414Eull));
  std::vector<int> boundaries(std::size_t(std::max(0, pages - 1)));
  std::iota(boundaries.begin(), boundaries.end(), 0);
  for (std::size_t i = boundaries.size(); i > 1; --i) std::swap(boundaries[i - 1], boundaries[std::size_t(rng.uniform(0, int(i) - 1))]);
  boundaries.resize(std::size_t(spanningArticles));
  std::sort(boundaries.begin(), boundaries.end());

  for (int p : boundaries) {
    auto& page = recipes[std::size_t(p)];
    ArticleSpec* last = nullptr;
    for (auto it = page.sections.rbegin(); it != page.sections.rend() && !last; ++it)
      if (!it->articles.empty()) last = &it->articles.back();
    if (!last || last->headless || last->lines < 2)
      infeasible("page " + std::to_string(p + 1) + " has no titled final article of two or more lines to carry over");
    const int keep = rng.uniform(1, last->lines - 1);
    ArticleSpec rest = *last;
    rest.headless = true;
    rest.lines = last->lines - keep;
    last->lines = keep;
    last->lastLineWidthPct = 100;
    auto& next = recipes[std::size_t(p + 1)];
    if (next.sections.empty()) next.sections.push_back({1, {}});
    auto& first = next.sections.front().articles;
    first.insert(first.begin(), rest);
  }

  GeneratedIssue issue;
  std::vector<bool> carried(std::size_t(pages), false);
  for (int p : boundaries) carried[std::size_t(p + 1)] = true;
  for (int p = 0; p < pages; ++p) {
    auto rendered = render_page(recipes[std::size_t(p)], geometry);
    auto& truth = rendered.truth;
    for (std::size_t j = 0; j < truth.parts.size(); ++j) {
      auto& part = truth.parts[j];
      if (j == 0 && carried[std::size_t(p)]) {
        auto& prev_page = issue.truth.pages.back();
        auto& prev = prev_page.parts.back();
        prev.continuation = prev.continuation | Continuation::ContinuesNext;
        part.article = prev.article;
        auto& logical = issue.truth.articles[std::size_t(part.article)];
        logical.parts.push_back({p, int(j)});
        logical.continuation = logical.continuation | Continuation::ContinuesNext;
        continue;
      }
      part.article = int(issue.truth.articles.size());
      issue.truth.articles.push_back({part.article, {{p, int(j)}}, part.continuation});
      issue.truth.readingOrder.push_back(part.article);
    }
    issue.images.push_back(std::move(rendered.image));
    issue.truth.pages.push_back(std::move(truth));
  }
  return issue;
}

std::pair<LabelImage, GroundTruth> generate_page(const PageRecipe& recipe, const Geometry& geometry) {
  auto issue = generate_issue({recipe}, 0, 0, geometry);
  return {std::move(issue.images.front()), std::move(issue.truth)};
}

IssueRecipe random_issue_recipe(const IssueTemplate& tmpl, std::uint64_t seed) {
  Rng rng(seed);
  IssueRecipe recipe;
  recipe.seed = seed;
  const int pages = std::max(1, rng.uniform(tmpl.pages));
  for (int p = 0; p < pages; ++p) {
    PageRecipe page;
    page.pageWidth = tmpl.pageWidth;
    page.degradations = tmpl.degradations;
    page.rngSeed = mix_seed(seed + std::uint64_t(p) + 1);
    const int n = std::max(1, rng.uniform(tmpl.articlesPerPage));
    const int sections = std::clamp(rng.uniform(tmpl.sections), 1, n);
    std::vector<int> counts(std::size_t(sections), 1);
    for (int k = sections; k < n; ++k) ++counts[std::size_t(rng.uniform(0, sections - 1))];
    for (int s = 0; s < sections; ++s) {
      SectionSpec sec;
      sec.columns = std::max(1, rng.uniform(tmpl.columns));
      for (int k = 0; k < counts[std::size_t(s)]; ++k) {
        ArticleSpec a;
        a.lines = std::max(1, rng.uniform(tmpl.linesPerArticle));
        a.titleHeight = rng.uniform(tmpl.titleHeight);
        a.lastLineWidthPct = rng.uniform(30, 100);
        sec.articles.push_back(a);
      }
      page.sections.push_back(std::move(sec));
    }
    recipe.pages.push_back(std::move(page));
  }
  recipe.spanningArticles = std::clamp(rng.uniform(tmpl.spanning), 0, pages - 1);
  return recipe;
}

GeneratedIssue generate_issue(const IssueRecipe& recipe, const Geometry& geometry) {
  return generate_issue(recipe.pages, recipe.spanningArticles, recipe.seed, geometry);
}

// ---- JSON ----

namespace {

json rect_json(const Rect& r) { return json::array({r.x0, r.y0, r.x1, r.y1}); }

Rect rect_from(const json& j) {
  if (!j.is_array() || j.size() != 4) throw Error(ErrorCode::InvalidArgument, "rectangle must be [x0,y0,x1,y1]");
  return {j[0].get<int>(), j[1].get<int>(), j[2].get<int>(), j[3].get<int>()};
}

json range_json(Range r) { return json::array({r.lo, r.hi}); }

Range range_from(const json& j, const char* key) {
  if (!j.is_array() || j.size() != 2) throw Error(ErrorCode::InvalidArgument, std::string(key) + " must be [lo, hi]");
  Range r{j[0].get<int>(), j[1].get<int>()};
  if (r.lo > r.hi) throw Error(ErrorCode::InvalidArgument, std::string(key) + " has lo > hi");
  return r;
}

json degradations_json(const Degradations& d) {
  return {{"separatorBreakProb", d.separatorBreakProb},
          {"lineFuseProb", d.lineFuseProb},
          {"titleMislabelProb", d.titleMislabelProb}};
}

Degradations degradations_from(const json& j) {
  Degradations d;
  d.separatorBreakProb = j.value("separatorBreakProb", 0.0);
  d.lineFuseProb = j.value("lineFuseProb", 0.0);
  d.titleMislabelProb = j.value("titleMislabelProb", 0.0);
  for (double p : {d.separatorBreakProb, d.lineFuseProb, d.titleMislabelProb})
    if (!(p >= 0.0 && p <= 1.0)) throw Error(ErrorCode::InvalidArgument, "degradation probabilities must lie in [0,1]");
  return d;
}

json header(const char* schema) { return {{"schema", schema}, {"version", 1}}; }

void check_header(const json& j, const char* schema) {
  if (!j.is_object() || j.value("schema", "") != schema)
    throw Error(ErrorCode::InvalidArgument, std::string("expected a ") + schema + " document");
  if (j.value("version", 0) != 1) throw Error(ErrorCode::InvalidArgument, std::string("unsupported ") + schema + " version");
}

json parse(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace

RecipeFile parse_recipe_json(const std::string& text) {
  auto j = parse(text);
  check_header(j, "artseg.recipe");
  RecipeFile out;
  try {
    const auto kind = j.value("kind", "template");
    if (kind == "template") {
      IssueTemplate t;
      if (j.contains("pages")) t.pages = range_from(j["pages"], "pages");
      if (j.contains("sections")) t.sections = range_from(j["sections"], "sections");
      if (j.contains("columns")) t.columns = range_from(j["columns"], "columns");
      if (j.contains("articlesPerPage")) t.articlesPerPage = range_from(j["articlesPerPage"], "articlesPerPage");
      if (j.contains("linesPerArticle")) t.linesPerArticle = range_from(j["linesPerArticle"], "linesPerArticle");
      if (j.contains("titleHeight")) t.titleHeight = range_from(j["titleHeight"], "titleHeight");
      if (j.contains("spanning")) t.spanning = range_from(j["spanning"], "spanning");
      t.pageWidth = j.value("pageWidth", t.pageWidth);
      if (j.contains("degradations")) t.degradations = degradations_from(j["degradations"]);
      if (t.pages.lo < 1 || t.columns.lo < 1 || t.articlesPerPage.lo < 1 || t.linesPerArticle.lo < 1 ||
          t.sections.lo < 1 || t.spanning.lo < 0)
        throw Error(ErrorCode::InvalidArgument, "template ranges must be positive");
      out.tmpl = t;
    } else if (kind == "issue") {
      IssueRecipe r;
      r.seed = j.value("seed", std::uint64_t(0));
      r.spanningArticles = j.value("spanning", 0);
      const auto deg = j.contains("degradations") ? degradations_from(j["degradations"]) : Degradations{};
      const int width = j.value("pageWidth", 1600);
      int p = 0;
      for (const auto& jp : j.at("pages")) {
        PageRecipe page;
        page.pageWidth = jp.value("pageWidth", width);
        if (jp.contains("pageHeight") && !jp["pageHeight"].is_null()) page.pageHeight = jp["pageHeight"].get<int>();
        page.degradations = jp.contains("degradations") ? degradations_from(jp["degradations"]) : deg;
        page.rngSeed = jp.value("seed", mix_seed(r.seed + std::uint64_t(p) + 1));
        for (const auto& js : jp.at("sections")) {
          SectionSpec s;
          s.columns = js.value("columns", 1);
          for (const auto& ja : js.at("articles")) {
            ArticleSpec a;
            a.lines = ja.value("lines", a.lines);
            a.titleHeight = ja.value("titleHeight", a.titleHeight);
            a.headless = ja.value("headless", false);
            a.lastLineWidthPct = ja.value("lastLineWidthPct", a.lastLineWidthPct);
            s.articles.push_back(a);
          }
          page.sections.push_back(std::move(s));
        }
        r.pages.push_back(std::move(page));
        ++p;
      }
      out.issue = std::move(r);
    } else {
      throw Error(ErrorCode::InvalidArgument, "recipe kind must be \"template\" or \"issue\"");
    }
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed recipe: ") + e.what());
  }
  return out;
}

std::string recipe_json(const IssueTemplate& t) {
  auto j = header("artseg.recipe");
  j["kind"] = "template";
  j["pages"] = range_json(t.pages);
  j["sections"] = range_json(t.sections);
  j["columns"] = range_json(t.columns);
  j["articlesPerPage"] = range_json(t.articlesPerPage);
  j["linesPerArticle"] = range_json(t.linesPerArticle);
  j["titleHeight"] = range_json(t.titleHeight);
  j["spanning"] = range_json(t.spanning);
  j["pageWidth"] = t.pageWidth;
  j["degradations"] = degradations_json(t.degradations);
  return j.dump(2) + "\n";
}

std::string recipe_json(const IssueRecipe& r) {
  auto j = header("artseg.recipe");
  j["kind"] = "issue";
  j["seed"] = r.seed;
  j["spanning"] = r.spanningArticles;
  j["pages"] = json::array();
  for (const auto& p : r.pages) {
    json jp;
    jp["pageWidth"] = p.pageWidth;
    jp["pageHeight"] = p.pageHeight ? json(*p.pageHeight) : json(nullptr);
    jp["seed"] = p.rngSeed;
    jp["degradations"] = degradations_json(p.degradations);
    jp["sections"] = json::array();
    for (const auto& s : p.sections) {
      json js{{"columns", s.columns}, {"articles", json::array()}};
      for (const auto& a : s.articles)
        js["articles"].push_back({{"lines", a.lines},
                                  {"titleHeight", a.titleHeight},
                                  {"headless", a.headless},
                                  {"lastLineWidthPct", a.lastLineWidthPct}});
      jp["sections"].push_back(std::move(js));
    }
    j["pages"].push_back(std::move(jp));
  }
  return j.dump(2) + "\n";
}

std::string page_truth_json(const PageTruth& page, const std::string& issueId, int pageNumber) {
  auto j = header("artseg.groundtruth");
  j["issue"] = issueId;
  j["page"] = pageNumber;
  j["width"] = page.width;
  j["height"] = page.height;
  j["articles"] = json::array();
  for (const auto& part : page.parts) {
    json a;
    a["article"] = part.article;
    a["continuation"] = continuation_name(part.continuation);
    a["title"] = part.title ? rect_json(*part.title) : json(nullptr);
    a["lines"] = json::array();
    for (const auto& l : part.lines) a["lines"].push_back(rect_json(l));
    a["boxes"] = json::array();
    for (const auto& b : part.boxes) a["boxes"].push_back(rect_json(b));
    j["articles"].push_back(std::move(a));
  }
  j["separators"] = json::array();
  for (const auto& s : page.separators)
    j["separators"].push_back({{"orientation", orientation_name(s.orientation)},
                               {"position", s.position},
                               {"start", s.start},
                               {"end", s.end},
                               {"thickness", s.thickness}});
  j["mislabeledLines"] = json::array();
  for (const auto& r : page.mislabeledLines) j["mislabeledLines"].push_back(rect_json(r));
  j["fusedLines"] = json::array();
  for (const auto& [a, b] : page.fusedLines) j["fusedLines"].push_back(json::array({rect_json(a), rect_json(b)}));
  j["brokenSeparators"] = page.brokenSeparators;
  return j.dump(1) + "\n";
}

PageTruth parse_page_truth_json(const std::string& text) {
  auto j = parse(text);
  check_header(j, "artseg.groundtruth");
  PageTruth page;
  try {
    page.width = j.at("width").get<int>();
    page.height = j.at("height").get<int>();
    for (const auto& a : j.at("articles")) {
      TruthPart part;
      part.article = a.at("article").get<int>();
      part.continuation = continuation_from_name(a.value("continuation", "none"));
      if (a.contains("title") && !a["title"].is_null()) part.title = rect_from(a["title"]);
      for (const auto& l : a.at("lines")) part.lines.push_back(rect_from(l));
      if (a.contains("boxes"))
        for (const auto& b : a["boxes"]) part.boxes.push_back(rect_from(b));
      page.parts.push_back(std::move(part));
    }
    if (j.contains("separators"))
      for (const auto& s : j["separators"])
        page.separators.push_back({s.at("orientation") == "vertical" ? Orientation::Vertical : Orientation::Horizontal,
                                   s.at("position").get<int>(), s.at("start").get<int>(), s.at("end").get<int>(),
                                   s.at("thickness").get<int>()});
    if (j.contains("mislabeledLines"))
      for (const auto& r : j["mislabeledLines"]) page.mislabeledLines.push_back(rect_from(r));
    if (j.contains("fusedLines"))
      for (const auto& f : j["fusedLines"]) page.fusedLines.push_back({rect_from(f.at(0)), rect_from(f.at(1))});
    page.brokenSeparators = j.value("brokenSeparators", 0);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::InvalidArgument, std::string("malformed ground truth: ") + e.what());
  }
  return page;
}

std::filesystem::path truth_sidecar_path(const std::filesystem::path& labelMap) {
  auto p = labelMap;
  p.replace_extension(".gt.json");
  return p;
}

CorpusSummary write_corpus(const std::filesystem::path& out, const RecipeFile& recipe, std::uint64_t seed, int count,
                           LabelMapFormat format) {
  if (count < 0) throw Error(ErrorCode::InvalidArgument, "count must be >= 0");
  if (!recipe.tmpl && !recipe.issue) throw Error(ErrorCode::InvalidArgument, "empty recipe");
  std::filesystem::create_directories(out);

  CorpusSummary summary;
  auto manifest = header("artseg.manifest");
  manifest["seed"] = seed;
  manifest["format"] = format == LabelMapFormat::Pgm ? "pgm" : "png";
  manifest["issues"] = json::array();
  const char* ext = format == LabelMapFormat::Pgm ? ".pgm" : ".png";

  for (int i = 0; i < count; ++i) {
    const std::uint64_t issue_seed = mix_seed(seed + std::uint64_t(i));
    IssueRecipe r;
    if (recipe.tmpl) {
      r = random_issue_recipe(*recipe.tmpl, issue_seed);
    } else {
      r = *recipe.issue;
      r.seed = issue_seed;
      for (std::size_t p = 0; p < r.pages.size(); ++p) r.pages[p].rngSeed = mix_seed(issue_seed + p + 1);
    }
    auto issue = generate_issue(r);

    char name[32];
    std::snprintf(name, sizeof name, "issue%04d", i + 1);
    const auto dir = out / name;
    std::filesystem::create_directories(dir);
    json ji{{"id", name}, {"seed", issue_seed}, {"pages", json::array()}};
    int parts = 0;
    for (std::size_t p = 0; p < issue.images.size(); ++p) {
      char file[32];
      std::snprintf(file, sizeof file, "p%04zu%s", p + 1, ext);
      const auto path = dir / file;
      save_label_map_file(issue.images[p], path);
      const auto gt = truth_sidecar_path(path);
      write_text_atomic(gt, page_truth_json(issue.truth.pages[p], name, int(p) + 1));
      const int n = int(issue.truth.pages[p].parts.size());
      parts += n;
      ji["pages"].push_back({{"file", std::string(name) + "/" + file},
                             {"groundTruth", std::string(name) + "/" + gt.filename().string()},
                             {"articles", n}});
    }
    ji["articles"] = issue.truth.articles.size();
    ji["spanning"] = r.spanningArticles;
    manifest["issues"].push_back(std::move(ji));
    ++summary.issues;
    summary.pages += int(issue.images.size());
    summary.parts += parts;
    summary.articles += int(issue.truth.articles.size());
  }
  manifest["totals"] = {{"issues", summary.issues},
                        {"pages", summary.pages},
                        {"pageArticles", summary.parts},
                        {"articles", summary.articles}};
  write_text_atomic(out / "manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace artseg::synth
