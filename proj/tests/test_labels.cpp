#include <doctest.h>
#include <json.hpp>

#include "support.hpp"

#include "artseg/label_io.hpp"
#include "artseg/labels.hpp"
#include "artseg/png_codec.hpp"

using namespace artseg;

TEST_CASE("raw codes map onto the six informative labels") {
  const InformativeLabel expected[] = {
      InformativeLabel::Background, InformativeLabel::TextLine,          InformativeLabel::TextLine,
      InformativeLabel::TextLine,   InformativeLabel::Title,             InformativeLabel::Title,
      InformativeLabel::Title,      InformativeLabel::VerticalSeparator, InformativeLabel::HorizontalSeparator,
      InformativeLabel::Noise};
  for (int code = 0; code < kRawLabelCount; ++code)
    CHECK(to_informative(static_cast<RawLabel>(code)) == expected[code]);
  CHECK_FALSE(is_valid_raw_code(10));
  CHECK_FALSE(is_valid_raw_code(-1));
}

TEST_CASE("informative label names round-trip") {
  for (int i = 0; i < kInformativeLabelCount; ++i) {
    const auto l = static_cast<InformativeLabel>(i);
    CHECK(informative_label_from_name(informative_label_name(l)) == l);
  }
  CHECK_FALSE(informative_label_from_name("column").has_value());
}

TEST_CASE("label table document lists every code") {
  const auto doc = nlohmann::json::parse(label_table_json());
  CHECK(doc["schema"] == "artseg.labels");
  REQUIRE(doc["raw"].size() == std::size_t(kRawLabelCount));
  CHECK(doc["raw"][7]["informative"] == "vertical");
  CHECK(doc["informative"].size() == std::size_t(kInformativeLabelCount));
}

TEST_CASE("published label table matches the library") {
  const auto published = testing::slurp(std::filesystem::path(ARTSEG_SOURCE_DIR) / "data" / "label_codes.json");
  CHECK(nlohmann::json::parse(published) == nlohmann::json::parse(label_table_json()));
}

TEST_CASE("out-of-range code reports its pixel position") {
  std::vector<std::uint8_t> codes(12, 0);
  codes[7] = 10;
  try {
    LabelImage image(4, 3, codes);
    FAIL("expected InvalidLabelCodeError");
  } catch (const InvalidLabelCodeError& e) {
    CHECK(e.position() == 7);
    CHECK(e.value() == 10);
    CHECK(e.code() == ErrorCode::InvalidLabelCode);
  }
}

TEST_CASE("PGM round trip preserves every code") {
  testing::Random rng(11);
  std::vector<std::uint8_t> codes(37 * 23);
  for (auto& c : codes) c = std::uint8_t(rng.uniform(0, 9));
  const LabelImage image(37, 23, codes);
  const auto bytes = write_pgm(image);
  CHECK(read_pgm(bytes) == image);
}

TEST_CASE("PGM header errors") {
  const std::string good = "P5\n2 2\n255\n";
  auto bytes = [](const std::string& s) { return std::vector<std::uint8_t>(s.begin(), s.end()); };
  SUBCASE("wrong magic") {
    CHECK_THROWS_AS(read_pgm(bytes("P2\n2 2\n255\n\1\1\1\1")), Error);
  }
  SUBCASE("truncated pixel data") {
    try {
      read_pgm(bytes(good + "\1\1\1"));
      FAIL("expected TruncatedData");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::TruncatedData);
    }
  }
  SUBCASE("maxval other than 255") {
    try {
      read_pgm(bytes("P5\n2 2\n15\n\1\1\1\1"));
      FAIL("expected MalformedHeader");
    } catch (const Error& e) {
      CHECK(e.code() == ErrorCode::MalformedHeader);
    }
  }
  SUBCASE("comments are skipped") {
    const auto image = read_pgm(bytes("P5\n# label map\n2 2\n255\n\1\2\3\4"));
    CHECK(image.at(1, 1) == RawLabel::TitleCharacter);
  }
  SUBCASE("invalid code in data") {
    CHECK_THROWS_AS(read_pgm(bytes(good + "\1\1\1\x0b")), InvalidLabelCodeError);
  }
}

TEST_CASE("indexed PNG round trip with identity and custom palettes") {
  testing::Random rng(5);
  std::vector<std::uint8_t> codes(19 * 31);
  for (auto& c : codes) c = std::uint8_t(rng.uniform(0, 9));
  const LabelImage image(19, 31, codes);
  CHECK(read_indexed_png(write_indexed_png(image), identity_palette()) == image);

  PaletteMap shifted;
  for (int i = 0; i < 10; ++i) shifted[i] = (i + 1) % 10;
  const auto decoded = read_indexed_png(write_indexed_png(image), shifted);
  for (int y = 0; y < 31; ++y)
    for (int x = 0; x < 19; ++x) CHECK(int(decoded.at(x, y)) == (int(image.at(x, y)) + 1) % 10);
}

TEST_CASE("PNG palette index without a code is rejected") {
  const LabelImage image(3, 1, std::vector<std::uint8_t>{0, 1, 9});
  PaletteMap partial{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(read_indexed_png(write_indexed_png(image), partial), InvalidLabelCodeError);
}

TEST_CASE("palette sidecar parsing") {
  const auto palette = parse_palette_json(R"({"0": 0, "3": 7})");
  CHECK(palette.at(3) == 7);
  CHECK(parse_palette_json(palette_json(palette)) == palette);
  CHECK_THROWS_AS(parse_palette_json("[1, 2]"), Error);
  CHECK_THROWS_AS(parse_palette_json(R"({"0": 12})"), Error);
}

TEST_CASE("non-PNG bytes are a malformed header") {
  const std::vector<std::uint8_t> junk{1, 2, 3, 4, 5, 6, 7, 8, 9};
  try {
    png::decode_indexed(junk);
    FAIL("expected MalformedHeader");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::MalformedHeader);
  }
}

TEST_CASE("truncated PNG is reported") {
  const LabelImage image(64, 64, RawLabel::Character);
  auto bytes = write_indexed_png(image);
  bytes.resize(bytes.size() / 2);
  try {
    read_indexed_png(bytes, identity_palette());
    FAIL("expected an error");
  } catch (const Error& e) {
    CHECK((e.code() == ErrorCode::TruncatedData || e.code() == ErrorCode::MalformedHeader));
  }
}

TEST_CASE("files: format by extension, palette sidecar, atomic writes") {
  testing::TempDir dir("labels");
  LabelImage image(5, 4, RawLabel::Background);
  image.set(2, 1, RawLabel::HorizontalSeparator);
  save_label_map_file(image, dir / "a.pgm");
  save_label_map_file(image, dir / "b.png");
  CHECK(load_label_map_file(dir / "a.pgm") == image);
  CHECK(load_label_map_file(dir / "b.png").codes() == image.codes());
  testing::spit(dir / "b.palette.json", R"({"0": 0, "8": 7})");
  CHECK(load_label_map_file(dir / "b.png").at(2, 1) == RawLabel::VerticalSeparator);
  CHECK_THROWS_AS(load_label_map_file(dir / "c.bmp"), Error);
  try {
    load_label_map_file(dir / "missing.pgm");
    FAIL("expected Io");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Io);
  }
  write_text_atomic(dir / "t.txt", "x");
  CHECK(testing::slurp(dir / "t.txt") == "x");
  for (const auto& e : std::filesystem::directory_iterator(dir.path()))
    CHECK(e.path().filename().string().find(".tmp") == std::string::npos);
}
