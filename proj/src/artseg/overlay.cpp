#include "artseg/overlay.hpp"

#include "artseg/label_io.hpp"
#include "artseg/png_codec.hpp"

#include <array>
#include <cmath>
#include <cstdlib>

namespace artseg {

namespace {

constexpr std::array<const char*, 6> kStageNames{"labels", "smoothed", "lines", "grid", "articles", "order"};

// 3x5 glyphs, one row per string, '#' set.
constexpr std::array<std::array<const char*, 5>, 10> kDigits{{
    {"###", "#.#", "#.#", "#.#", "###"},
    {".#.", "##.", ".#.", ".#.", "###"},
    {"###", "..#", "###", "#..", "###"},
    {"###", "..#", "###", "..#", "###"},
    {"#.#", "#.#", "###", "..#", "..#"},
    {"###", "#..", "###", "..#", "###"},
    {"###", "#..", "###", "#.#", "###"},
    {"###", "..#", "..#", "..#", "..#"},
    {"###", "#.#", "###", "#.#", "###"},
    {"###", "#.#", "###", "..#", "###"},
}};

class Canvas {
 public:
  Canvas(int w, int h) : img_{w, h, std::vector<std::uint8_t>(std::size_t(w) * std::size_t(h) * 3, 255)} {}

  void set(int x, int y, Rgb c) {
    if (x < 0 || y < 0 || x >= img_.width || y >= img_.height) return;
    auto* p = &img_.rgb[(std::size_t(y) * std::size_t(img_.width) + std::size_t(x)) * 3];
    p[0] = c[0];
    p[1] = c[1];
    p[2] = c[2];
  }

  void blend(int x, int y, Rgb c, double alpha) {
    if (x < 0 || y < 0 || x >= img_.width || y >= img_.height) return;
    auto* p = &img_.rgb[(std::size_t(y) * std::size_t(img_.width) + std::size_t(x)) * 3];
    for (int i = 0; i < 3; ++i) p[i] = std::uint8_t(std::lround(p[i] * (1.0 - alpha) + c[std::size_t(i)] * alpha));
  }

  void fill(const Rect& r, Rgb c, double alpha = 1.0) {
    for (int y = r.y0; y < r.y1; ++y)
      for (int x = r.x0; x < r.x1; ++x) alpha >= 1.0 ? set(x, y, c) : blend(x, y, c, alpha);
  }

  void outline(const Rect& r, Rgb c, int t = 2) {
    fill({r.x0, r.y0, r.x1, std::min(r.y1, r.y0 + t)}, c);
    fill({r.x0, std::max(r.y0, r.y1 - t), r.x1, r.y1}, c);
    fill({r.x0, r.y0, std::min(r.x1, r.x0 + t), r.y1}, c);
    fill({std::max(r.x0, r.x1 - t), r.y0, r.x1, r.y1}, c);
  }

  void line(double x0, double y0, double x1, double y1, Rgb c, int t = 3) {
    const double len = std::hypot(x1 - x0, y1 - y0);
    const int steps = std::max(1, int(std::ceil(len)));
    for (int i = 0; i <= steps; ++i) {
      const double f = double(i) / steps;
      const int x = int(std::lround(x0 + (x1 - x0) * f));
      const int y = int(std::lround(y0 + (y1 - y0) * f));
      fill({x - t / 2, y - t / 2, x - t / 2 + t, y - t / 2 + t}, c);
    }
  }

  void arrow(double x0, double y0, double x1, double y1, Rgb c) {
    line(x0, y0, x1, y1, c);
    const double len = std::hypot(x1 - x0, y1 - y0);
    if (len < 1.0) return;
    const double ux = (x1 - x0) / len, uy = (y1 - y0) / len;
    const double head = std::min(24.0, len / 3.0);
    for (double s : {-1.0, 1.0}) {
      const double ca = std::cos(0.45), sa = std::sin(0.45) * s;
      const double hx = -(ux * ca - uy * sa), hy = -(ux * sa + uy * ca);
      line(x1, y1, x1 + hx * head, y1 + hy * head, c);
    }
  }

  void number(int value, int cx, int cy, Rgb c, int scale = 4) {
    const auto text = std::to_string(value);
    const int w = int(text.size()) * 4 * scale - scale;
    const int x0 = cx - w / 2, y0 = cy - 5 * scale / 2;
    fill({x0 - scale, y0 - scale, x0 + w + scale, y0 + 6 * scale}, {255, 255, 255});
    for (std::size_t k = 0; k < text.size(); ++k) {
      const auto& glyph = kDigits[std::size_t(text[k] - '0')];
      for (int gy = 0; gy < 5; ++gy)
        for (int gx = 0; gx < 3; ++gx)
          if (glyph[std::size_t(gy)][gx] == '#') {
            const int px = x0 + int(k) * 4 * scale + gx * scale, py = y0 + gy * scale;
            fill({px, py, px + scale, py + scale}, c);
          }
    }
  }

  RgbImage take() { return std::move(img_); }

 private:
  RgbImage img_;
};

Rgb palette(int i) {
  static constexpr std::array<Rgb, 8> colors{{{230, 25, 75},
                                               {60, 180, 75},
                                               {0, 130, 200},
                                               {245, 130, 48},
                                               {145, 30, 180},
                                               {70, 200, 200},
                                               {240, 50, 230},
                                               {128, 128, 0}}};
  return colors[std::size_t(std::abs(i)) % colors.size()];
}

void faded_entities(Canvas& c, const EntityImage& e) {
  for (int y = 0; y < e.height(); ++y)
    for (int x = 0; x < e.width(); ++x) {
      const auto label = e.at(x, y);
      if (label == InformativeLabel::Background) continue;
      c.blend(x, y, informative_label_color(label), 0.3);
    }
}

void draw_grid(Canvas& c, const SeparatorGrid& g) {
  for (const auto& s : g.verticals)
    c.fill({s.position - 1, s.start, s.position + 2, s.end}, s.origin == SeparatorOrigin::Detected ? Rgb{30, 60, 210} : Rgb{120, 150, 255});
  for (const auto& s : g.horizontals)
    c.fill({s.start, s.position - 1, s.end, s.position + 2}, s.origin == SeparatorOrigin::Detected ? Rgb{20, 160, 60} : Rgb{120, 220, 140});
  for (const auto& t : g.titleSegments) c.fill({t.start, t.y - 1, t.end, t.y + 2}, {200, 30, 30});
}

Rect box_rect(const PageResult& page, int id) { return page.boxes.at(std::size_t(id)).bbox; }

}  // namespace

OverlayStage overlay_stage_from_name(std::string_view name) {
  for (std::size_t i = 0; i < kStageNames.size(); ++i)
    if (name == kStageNames[i]) return OverlayStage(i);
  throw Error(ErrorCode::UnknownStage,
              "unknown stage '" + std::string(name) + "' (labels|smoothed|lines|grid|articles|order)");
}

const char* overlay_stage_name(OverlayStage stage) noexcept { return kStageNames[std::size_t(stage)]; }

RgbImage render_overlay(const PageResult& page, const std::vector<Article>& articles, OverlayStage stage) {
  Canvas c(page.width, page.height);
  switch (stage) {
    case OverlayStage::Labels:
      for (int y = 0; y < page.image.height(); ++y)
        for (int x = 0; x < page.image.width(); ++x) c.set(x, y, raw_label_color(page.image.at(x, y)));
      break;
    case OverlayStage::Smoothed:
      for (int y = 0; y < page.smoothed.height(); ++y)
        for (int x = 0; x < page.smoothed.width(); ++x) c.set(x, y, informative_label_color(page.smoothed.at(x, y)));
      break;
    case OverlayStage::Lines:
      faded_entities(c, page.smoothed);
      for (const auto& l : page.lines) {
        for (const auto& p : l.pixels) c.set(p.x, p.y, palette(l.id));
        c.outline(l.bbox, l.residue ? Rgb{240, 200, 0} : palette(l.id), 1);
      }
      break;
    case OverlayStage::Grid:
      faded_entities(c, page.smoothed);
      draw_grid(c, page.grid);
      for (const auto& b : page.boxes) c.outline(b.bbox, {0, 0, 0}, 1);
      break;
    case OverlayStage::Articles:
    case OverlayStage::Order:
      faded_entities(c, page.smoothed);
      for (const auto& a : articles)
        for (const auto& part : a.parts) {
          if (part.page != page.number - 1) continue;
          for (int b : part.boxes) {
            c.fill(box_rect(page, b), palette(a.readingIndex), 0.25);
            c.outline(box_rect(page, b), palette(a.readingIndex), 3);
          }
          if (part.title) c.outline(page.grid.titles.at(std::size_t(*part.title)).bbox, {200, 30, 30}, 2);
        }
      if (stage == OverlayStage::Order) {
        std::vector<std::pair<int, int>> centres;
        for (int b : page.order) {
          const auto r = box_rect(page, b);
          centres.emplace_back((r.x0 + r.x1) / 2, (r.y0 + r.y1) / 2);
        }
        for (std::size_t i = 1; i < centres.size(); ++i)
          c.arrow(centres[i - 1].first, centres[i - 1].second, centres[i].first, centres[i].second, {0, 0, 0});
        for (std::size_t i = 0; i < centres.size(); ++i)
          c.number(int(i) + 1, centres[i].first, centres[i].second, {0, 0, 0});
      }
      break;
  }
  return c.take();
}

void write_rgb_image(const RgbImage& image, const std::filesystem::path& path) {
  if (path.extension() == ".png") {
    const auto bytes = png::encode_rgb(image.width, image.height, image.rgb);
    write_file_atomic(path, bytes);
    return;
  }
  const auto header = "P6\n" + std::to_string(image.width) + " " + std::to_string(image.height) + "\n255\n";
  std::vector<std::uint8_t> bytes(header.begin(), header.end());
  bytes.insert(bytes.end(), image.rgb.begin(), image.rgb.end());
  write_file_atomic(path, bytes);
}

void render_overlay_file(const PipelineConfig& config, const std::filesystem::path& input, OverlayStage stage,
                         const std::filesystem::path& output) {
  auto issue = segment_issue(config, "overlay", {input}, true);
  const auto& page = issue.pages.front();
  if (!page.ok()) throw Error(page.error->code, page.error->message);
  write_rgb_image(render_overlay(page, issue.articles, stage), output);
}

}  // namespace artseg
