#include "artseg/label_io.hpp"

#include "artseg/error.hpp"
#include "artseg/png_codec.hpp"

#include <json.hpp>

#include <cctype>
#include <fstream>
#include <iterator>
#include <limits>

namespace artseg {

namespace fs = std::filesystem;

PaletteMap identity_palette() {
  PaletteMap palette;
  for (int code = 0; code < kRawLabelCount; ++code) palette[code] = code;
  return palette;
}

PaletteMap parse_palette_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::MalformedHeader, std::string("palette sidecar: ") + e.what());
  }
  const auto& table = doc.contains("palette") ? doc["palette"] : doc;
  if (!table.is_object()) throw Error(ErrorCode::MalformedHeader, "palette sidecar must map index -> code");
  PaletteMap palette;
  for (const auto& [key, value] : table.items()) {
    int index = -1;
    try {
      std::size_t used = 0;
      index = std::stoi(key, &used);
      if (used != key.size()) index = -1;
    } catch (const std::exception&) {
    }
    if (index < 0 || index > 255 || !value.is_number_integer())
      throw Error(ErrorCode::MalformedHeader, "palette entry '" + key + "' is not index -> code");
    int code = value.get<int>();
    if (!is_valid_raw_code(code))
      throw Error(ErrorCode::MalformedHeader,
                  "palette entry " + key + " maps to invalid code " + std::to_string(code));
    palette[index] = code;
  }
  return palette;
}

std::string palette_json(const PaletteMap& palette) {
  nlohmann::ordered_json doc;
  doc["schema"] = "artseg.palette";
  doc["version"] = 1;
  nlohmann::ordered_json table = nlohmann::ordered_json::object();
  for (const auto& [index, code] : palette) table[std::to_string(index)] = code;
  doc["palette"] = std::move(table);
  return doc.dump(2) + "\n";
}

namespace {

class HeaderReader {
 public:
  explicit HeaderReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  int next_int(const char* what) {
    skip_space_and_comments();
    long value = 0;
    std::size_t digits = 0;
    while (pos_ < bytes_.size() && std::isdigit(bytes_[pos_])) {
      value = value * 10 + (bytes_[pos_] - '0');
      if (value > std::numeric_limits<int>::max())
        throw Error(ErrorCode::MalformedHeader, std::string("PGM ") + what + " too large");
      ++pos_;
      ++digits;
    }
    if (digits == 0) throw Error(ErrorCode::MalformedHeader, std::string("PGM header: missing ") + what);
    return int(value);
  }

  std::size_t pos() const { return pos_; }
  void advance() { ++pos_; }
  bool at_space() const { return pos_ < bytes_.size() && std::isspace(bytes_[pos_]); }

 private:
  void skip_space_and_comments() {
    while (pos_ < bytes_.size()) {
      if (std::isspace(bytes_[pos_])) {
        ++pos_;
      } else if (bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
      } else {
        break;
      }
    }
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

LabelImage read_pgm(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5')
    throw Error(ErrorCode::MalformedHeader, "not a binary PGM (P5) file");
  HeaderReader header(bytes.subspan(2));
  int width = header.next_int("width");
  int height = header.next_int("height");
  int maxval = header.next_int("maxval");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::MalformedHeader, "PGM dimensions must be positive");
  if (maxval != 255) throw Error(ErrorCode::MalformedHeader, "PGM maxval must be 255");
  if (!header.at_space()) throw Error(ErrorCode::MalformedHeader, "PGM header not terminated");
  header.advance();

  std::size_t offset = 2 + header.pos();
  std::size_t count = std::size_t(width) * std::size_t(height);
  if (bytes.size() - offset < count)
    throw Error(ErrorCode::TruncatedData, "PGM data holds " + std::to_string(bytes.size() - offset) +
                                              " of " + std::to_string(count) + " pixels");
  std::vector<std::uint8_t> codes(bytes.begin() + std::ptrdiff_t(offset),
                                  bytes.begin() + std::ptrdiff_t(offset + count));
  return LabelImage(width, height, std::move(codes));
}

std::vector<std::uint8_t> write_pgm(const LabelImage& image) {
  std::string header = "P5\n" + std::to_string(image.width()) + " " +
                       std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.insert(out.end(), image.codes().begin(), image.codes().end());
  return out;
}

std::vector<std::uint8_t> write_entity_pgm(const EntityImage& image) {
  std::string header = "P5\n" + std::to_string(image.width()) + " " +
                       std::to_string(image.height()) + "\n255\n";
  std::vector<std::uint8_t> out(header.begin(), header.end());
  out.reserve(out.size() + image.labels().size());
  for (auto l : image.labels()) out.push_back(static_cast<std::uint8_t>(l));
  return out;
}

LabelImage read_indexed_png(std::span<const std::uint8_t> bytes, const PaletteMap& palette) {
  auto decoded = png::decode_indexed(bytes);
  std::vector<std::uint8_t> codes(decoded.indices.size());
  for (std::size_t i = 0; i < decoded.indices.size(); ++i) {
    auto it = palette.find(decoded.indices[i]);
    if (it == palette.end()) throw InvalidLabelCodeError(i, decoded.indices[i]);
    codes[i] = std::uint8_t(it->second);
  }
  return LabelImage(decoded.width, decoded.height, std::move(codes), decoded.dpi);
}

std::vector<std::uint8_t> write_indexed_png(const LabelImage& image) {
  std::array<Rgb, kRawLabelCount> colors{};
  for (int code = 0; code < kRawLabelCount; ++code)
    colors[std::size_t(code)] = raw_label_color(static_cast<RawLabel>(code));
  png::IndexedImage indexed{image.width(), image.height(), image.codes(), image.dpi()};
  return png::encode_indexed(indexed, colors);
}

LabelImage load_label_image(std::span<const std::uint8_t> bytes, LabelMapFormat format,
                            const PaletteMap& palette) {
  switch (format) {
    case LabelMapFormat::Pgm: return read_pgm(bytes);
    case LabelMapFormat::IndexedPng: return read_indexed_png(bytes, palette);
  }
  throw Error(ErrorCode::InvalidArgument, "unknown label map format");
}

LabelMapFormat format_for_path(const fs::path& path) {
  auto ext = path.extension().string();
  for (auto& c : ext) c = char(std::tolower(static_cast<unsigned char>(c)));
  if (ext == ".pgm") return LabelMapFormat::Pgm;
  if (ext == ".png") return LabelMapFormat::IndexedPng;
  throw Error(ErrorCode::InvalidArgument, "unsupported label map extension: " + path.string());
}

fs::path palette_sidecar_path(const fs::path& png_path) {
  auto p = png_path;
  p.replace_extension(".palette.json");
  return p;
}

std::vector<std::uint8_t> read_file_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());
  return std::vector<std::uint8_t>(std::istreambuf_iterator<char>(in), {});
}

LabelImage load_label_map_file(const fs::path& path) {
  auto format = format_for_path(path);
  auto bytes = read_file_bytes(path);
  PaletteMap palette = identity_palette();
  if (format == LabelMapFormat::IndexedPng) {
    auto sidecar = palette_sidecar_path(path);
    if (fs::exists(sidecar)) {
      auto text = read_file_bytes(sidecar);
      palette = parse_palette_json(std::string(text.begin(), text.end()));
    }
  }
  return load_label_image(bytes, format, palette);
}

void write_file_atomic(const fs::path& path, std::span<const std::uint8_t> bytes) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::Io, "cannot write " + tmp.string());
    out.write(reinterpret_cast<const char*>(bytes.data()), std::streamsize(bytes.size()));
    if (!out) throw Error(ErrorCode::Io, "short write to " + tmp.string());
  }
  std::error_code ec;
  fs::rename(tmp, path, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot rename " + tmp.string() + ": " + ec.message());
}

void write_text_atomic(const fs::path& path, const std::string& text) {
  write_file_atomic(path, std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
}

void save_label_map_file(const LabelImage& image, const fs::path& path) {
  switch (format_for_path(path)) {
    case LabelMapFormat::Pgm:
      write_file_atomic(path, write_pgm(image));
      break;
    case LabelMapFormat::IndexedPng:
      write_file_atomic(path, write_indexed_png(image));
      write_text_atomic(palette_sidecar_path(path), palette_json(identity_palette()));
      break;
  }
}

}  // namespace artseg
