#include <doctest.h>

#include "invariants.hpp"
#include "oracles.hpp"
#include "support.hpp"

#include "artseg/grid.hpp"
#include "artseg/smoothing.hpp"

using namespace artseg;

namespace {

Separator sep(Orientation o, int position, int start, int end, int thickness = 3) {
  Separator s;
  s.orientation = o;
  s.position = position;
  s.start = start;
  s.end = end;
  s.thickness = thickness;
  s.detectedStart = start;
  s.detectedEnd = end;
  return s;
}

Separator vert(int x, int y0, int y1) { return sep(Orientation::Vertical, x, y0, y1); }
Separator horiz(int y, int x0, int x1) { return sep(Orientation::Horizontal, y, x0, x1); }

SeparatorMask random_mask(testing::Random& rng, const Rect& page) {
  SeparatorMask mask;
  const int nv = rng.uniform(0, 6);
  const int nh = rng.uniform(0, 6);
  for (int i = 0; i < nv; ++i) {
    const int y0 = rng.uniform(0, page.y1 - 20);
    mask.verticals.push_back(vert(rng.uniform(5, page.x1 - 5), y0, rng.uniform(y0 + 10, page.y1)));
  }
  for (int i = 0; i < nh; ++i) {
    const int x0 = rng.uniform(0, page.x1 - 20);
    mask.horizontals.push_back(horiz(rng.uniform(5, page.y1 - 5), x0, rng.uniform(x0 + 10, page.x1)));
  }
  const int nt = rng.uniform(0, 2);
  for (int i = 0; i < nt; ++i) {
    const int x0 = rng.uniform(0, page.x1 - 60);
    const int y0 = rng.uniform(0, page.y1 - 30);
    mask.titles.push_back({i, {x0, y0, x0 + rng.uniform(20, 60), y0 + rng.uniform(10, 30)}, {}});
  }
  for (std::size_t i = 0; i < mask.verticals.size(); ++i) mask.verticals[i].id = int(i);
  for (std::size_t i = 0; i < mask.horizontals.size(); ++i) mask.horizontals[i].id = int(i);
  return mask;
}

}  // namespace

TEST_CASE("separator mask from strokes: centre position and extent") {
  LabelImage image(100, 80);
  testing::paint(image, {10, 5, 13, 70}, RawLabel::VerticalSeparator);
  testing::paint(image, {20, 40, 90, 42}, RawLabel::HorizontalSeparator);
  testing::paint(image, {30, 10, 60, 20}, RawLabel::TitleCharacter);
  const auto smoothed = majority_vote_smooth(image, Connectivity::Eight);
  const auto mask = build_separator_mask(smoothed, Connectivity::Eight, 16);
  REQUIRE(mask.verticals.size() == 1);
  CHECK(mask.verticals[0].position == 11);
  CHECK(mask.verticals[0].start == 5);
  CHECK(mask.verticals[0].end == 70);
  CHECK(mask.verticals[0].thickness == 3);
  REQUIRE(mask.horizontals.size() == 1);
  CHECK(mask.horizontals[0].position == 40);
  CHECK(mask.horizontals[0].length() == 70);
  REQUIRE(mask.titles.size() == 1);
  CHECK(mask.titles[0].bbox == Rect{30, 10, 60, 20});
  CHECK(mask.diagnostics.empty());
}

TEST_CASE("a separator thicker than the limit is demoted with a diagnostic") {
  LabelImage image(100, 100);
  testing::paint(image, {10, 5, 40, 95}, RawLabel::VerticalSeparator);
  const auto smoothed = majority_vote_smooth(image, Connectivity::Eight);
  const auto mask = build_separator_mask(smoothed, Connectivity::Eight, 16);
  CHECK(mask.verticals.empty());
  REQUIRE(mask.diagnostics.size() == 1);
  CHECK(mask.diagnostics[0].code == "ComponentTooThick");
}

TEST_CASE("collinear fragments merge across small gaps only") {
  const Separator parts[] = {vert(100, 0, 50), vert(101, 55, 120), vert(100, 200, 300), vert(140, 0, 300)};
  const auto out = connect_collinear(parts, 8.0, 1.5);
  REQUIRE(out.size() == 3);
  CHECK(out[0].position == 100);
  CHECK(out[0].start == 200);
  CHECK(out[1].position == 101);
  CHECK(out[1].start == 0);
  CHECK(out[1].end == 120);
  CHECK(out[1].origin == SeparatorOrigin::Connected);
  CHECK(out[2].position == 140);
}

TEST_CASE("connect_collinear equals the transitive closure of the pair relation") {
  const auto r = oracle::check_connect_collinear(400, 99);
  INFO(r.first);
  CHECK(r.ok());
}

TEST_CASE("verticals grow until they meet a horizontal") {
  SeparatorGrid grid;
  grid.pageBox = {0, 0, 400, 400};
  grid.verticals = {vert(200, 150, 250)};
  grid.horizontals = {horiz(100, 0, 400), horiz(300, 150, 260)};
  const auto out = prolong_verticals(grid);
  CHECK(out.verticals[0].start == 100);
  CHECK(out.verticals[0].end == 300);
  CHECK(out.verticals[0].origin == SeparatorOrigin::Prolonged);
  CHECK(out.verticals[0].detectedStart == 150);
}

TEST_CASE("horizontals grow to the nearest verticals and titles get a top segment") {
  SeparatorGrid grid;
  grid.pageBox = {0, 0, 400, 400};
  grid.verticals = {vert(50, 0, 400), vert(300, 0, 400)};
  grid.horizontals = {horiz(200, 100, 150)};
  grid.titles = {{0, {120, 50, 200, 80}, {}}};
  const auto out = prolong_horizontals_and_titles(grid);
  CHECK(out.horizontals[0].start == 50);
  CHECK(out.horizontals[0].end == 300);
  REQUIRE(out.titleSegments.size() == 1);
  CHECK(out.titleSegments[0].y == 50);
  CHECK(out.titleSegments[0].start == 50);
  CHECK(out.titleSegments[0].end == 300);
}

TEST_CASE("box count equals (k+1)(m+1) for full-span separators") {
  const auto r = oracle::check_box_counts(300, 7);
  INFO(r.first);
  CHECK(r.ok());
}

TEST_CASE("boxes partition the page for random arrangements") {
  testing::Random rng(2718);
  const Rect page{0, 0, 300, 240};
  for (int t = 0; t < 300; ++t) {
    const auto mask = random_mask(rng, page);
    const GridOptions options{rng.real(0, 12), rng.real(0.5, 3)};
    const auto grid = generate_grid(mask, page, options);
    const auto boxes = extract_grid_boxes(grid);
    const auto problem = invariants::partition(boxes, page);
    INFO("trial " << t);
    CHECK(problem == "");
    for (std::size_t i = 1; i < boxes.size(); ++i)
      CHECK(std::tie(boxes[i - 1].bbox.y0, boxes[i - 1].bbox.x0) < std::tie(boxes[i].bbox.y0, boxes[i].bbox.x0));
  }
}

TEST_CASE("prolongation is monotone and reaches a fixpoint") {
  testing::Random rng(31337);
  const Rect page{0, 0, 300, 240};
  for (int t = 0; t < 300; ++t) {
    const auto mask = random_mask(rng, page);
    const GridOptions options{rng.real(0, 12), rng.real(0.5, 3)};
    INFO("trial " << t);
    CHECK(invariants::prolongation(mask, page, options) == "");
  }
}

TEST_CASE("content assignment keeps every line in one box") {
  SeparatorGrid grid;
  grid.pageBox = {0, 0, 200, 200};
  grid.verticals = {vert(100, 0, 200)};
  auto line = [](int id, Rect r) {
    TextLine l;
    l.id = id;
    l.bbox = r;
    return l;
  };
  const TextLine lines[] = {line(0, {10, 10, 90, 20}), line(1, {110, 10, 190, 20}), line(2, {80, 50, 140, 60})};
  const auto boxes = assign_content(extract_grid_boxes(grid), lines, grid.titles, grid);
  REQUIRE(boxes.size() == 2);
  CHECK(invariants::assignment_conservation(lines, boxes) == "");
  CHECK(boxes[0].id == 0);
  CHECK(boxes[1].id == 1);
}

TEST_CASE("boxes without lines are dropped") {
  SeparatorGrid grid;
  grid.pageBox = {0, 0, 200, 200};
  grid.horizontals = {horiz(100, 0, 200)};
  TextLine l;
  l.bbox = {10, 120, 50, 130};
  const TextLine lines[] = {l};
  const auto boxes = assign_content(extract_grid_boxes(grid), lines, grid.titles, grid);
  REQUIRE(boxes.size() == 1);
  CHECK(boxes[0].bbox.y0 == 100);
}

TEST_CASE("top delimiter picks the longest covering horizontal") {
  SeparatorGrid grid;
  grid.pageBox = {0, 0, 400, 400};
  grid.horizontals = {horiz(100, 0, 400), horiz(100, 40, 200)};
  grid.horizontals[1].id = 1;
  grid.titleSegments = {{3, 200, 0, 150}};
  auto d = top_delimiter({50, 100, 150, 200}, grid);
  REQUIRE(d);
  CHECK(d->separatorId == 0);
  CHECK(d->length == 400);
  d = top_delimiter({0, 0, 100, 50}, grid);
  REQUIRE(d);
  CHECK(d->separatorId == kPageTopDelimiter);
  d = top_delimiter({10, 200, 120, 300}, grid);
  REQUIRE(d);
  CHECK(d->isTitle);
  CHECK(d->separatorId == 3);
  CHECK_FALSE(top_delimiter({10, 150, 120, 190}, grid).has_value());
}

TEST_CASE("normalized segments merge overlapping spans") {
  SeparatorGrid a;
  a.verticals = {vert(10, 0, 50), vert(10, 40, 90)};
  SeparatorGrid b;
  b.verticals = {vert(10, 0, 90)};
  CHECK(normalized_segments(a) == normalized_segments(b));
}
