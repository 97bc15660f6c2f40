#include "artseg/png_codec.hpp"

#include "artseg/error.hpp"

#include <png.h>

#include <cmath>
#include <csetjmp>
#include <cstring>
#include <string>

namespace artseg::png {

namespace {

struct ReadState {
  std::span<const std::uint8_t> bytes;
  std::size_t offset = 0;
  bool truncated = false;
};

struct WriteState {
  std::vector<std::uint8_t>* out = nullptr;
};

void on_read(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<ReadState*>(png_get_io_ptr(png));
  if (state->offset + length > state->bytes.size()) {
    state->truncated = true;
    png_error(png, "unexpected end of PNG data");
  }
  std::memcpy(data, state->bytes.data() + state->offset, length);
  state->offset += length;
}

void on_write(png_structp png, png_bytep data, png_size_t length) {
  auto* state = static_cast<WriteState*>(png_get_io_ptr(png));
  state->out->insert(state->out->end(), data, data + length);
}

void on_flush(png_structp) {}

void on_error(png_structp png, png_const_charp msg) {
  if (auto* s = static_cast<std::string*>(png_get_error_ptr(png))) *s = msg;
  png_longjmp(png, 1);
}

void on_warning(png_structp, png_const_charp) {}

}  // namespace

IndexedImage decode_indexed(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < 8 || png_sig_cmp(bytes.data(), 0, 8) != 0)
    throw Error(ErrorCode::MalformedHeader, "not a PNG file");

  ReadState state{bytes};
  std::string message;
  IndexedImage image;
  std::vector<png_bytep> rows;
  bool wrong_type = false;

  png_structp png = png_create_read_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
  if (!png) throw Error(ErrorCode::Internal, "png_create_read_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_read_struct(&png, nullptr, nullptr);
    throw Error(ErrorCode::Internal, "png_create_info_struct failed");
  }

  if (setjmp(png_jmpbuf(png))) {
    png_destroy_read_struct(&png, &info, nullptr);
    if (state.truncated) throw Error(ErrorCode::TruncatedData, "PNG data truncated");
    throw Error(ErrorCode::MalformedHeader, "PNG decode failed: " + message);
  }

  png_set_read_fn(png, &state, on_read);
  png_read_info(png, info);

  png_uint_32 width = 0, height = 0;
  int bit_depth = 0, color_type = 0;
  png_get_IHDR(png, info, &width, &height, &bit_depth, &color_type, nullptr, nullptr, nullptr);
  if (color_type != PNG_COLOR_TYPE_PALETTE || width == 0 || height == 0 ||
      width > 1u << 20 || height > 1u << 20) {
    wrong_type = true;
  } else {
    if (bit_depth < 8) png_set_packing(png);
    png_uint_32 res_x = 0, res_y = 0;
    int unit = 0;
    if (png_get_pHYs(png, info, &res_x, &res_y, &unit) && unit == PNG_RESOLUTION_METER && res_x > 0)
      image.dpi = std::round(double(res_x) * 0.0254 * 100.0) / 100.0;
    png_read_update_info(png, info);

    image.width = int(width);
    image.height = int(height);
    image.indices.resize(std::size_t(width) * height);
    rows.resize(height);
    for (png_uint_32 y = 0; y < height; ++y) rows[y] = image.indices.data() + std::size_t(y) * width;
    png_read_image(png, rows.data());
    png_read_end(png, nullptr);
  }
  png_destroy_read_struct(&png, &info, nullptr);
  if (wrong_type)
    throw Error(ErrorCode::MalformedHeader, "label map PNG must be palette-indexed");
  return image;
}

namespace {

template <typename Fill>
std::vector<std::uint8_t> encode(int width, int height, int color_type, Fill&& fill_header,
                                 std::span<const std::uint8_t> pixels, std::size_t stride) {
  std::vector<std::uint8_t> out;
  WriteState state{&out};
  std::string message;
  std::vector<png_bytep> rows(static_cast<std::size_t>(height));
  for (int y = 0; y < height; ++y)
    rows[std::size_t(y)] = const_cast<png_bytep>(pixels.data() + std::size_t(y) * stride);

  png_structp png = png_create_write_struct(PNG_LIBPNG_VER_STRING, &message, on_error, on_warning);
  if (!png) throw Error(ErrorCode::Internal, "png_create_write_struct failed");
  png_infop info = png_create_info_struct(png);
  if (!info) {
    png_destroy_write_struct(&png, nullptr);
    throw Error(ErrorCode::Internal, "png_create_info_struct failed");
  }
  if (setjmp(png_jmpbuf(png))) {
    png_destroy_write_struct(&png, &info);
    throw Error(ErrorCode::Internal, "PNG encode failed: " + message);
  }
  png_set_write_fn(png, &state, on_write, on_flush);
  png_set_compression_level(png, 6);
  png_set_IHDR(png, info, png_uint_32(width), png_uint_32(height), 8, color_type,
               PNG_INTERLACE_NONE, PNG_COMPRESSION_TYPE_DEFAULT, PNG_FILTER_TYPE_DEFAULT);
  fill_header(png, info);
  png_write_info(png, info);
  png_write_image(png, rows.data());
  png_write_end(png, nullptr);
  png_destroy_write_struct(&png, &info);
  return out;
}

}  // namespace

std::vector<std::uint8_t> encode_indexed(const IndexedImage& image,
                                         std::span<const std::array<std::uint8_t, 3>> palette) {
  if (palette.empty() || palette.size() > 256)
    throw Error(ErrorCode::InvalidArgument, "palette must hold 1..256 entries");
  std::vector<png_color> colors(palette.size());
  for (std::size_t i = 0; i < palette.size(); ++i)
    colors[i] = png_color{palette[i][0], palette[i][1], palette[i][2]};
  auto header = [&](png_structp png, png_infop info) {
    png_set_PLTE(png, info, colors.data(), int(colors.size()));
    if (image.dpi) {
      auto ppm = png_uint_32(std::lround(*image.dpi / 0.0254));
      png_set_pHYs(png, info, ppm, ppm, PNG_RESOLUTION_METER);
    }
  };
  return encode(image.width, image.height, PNG_COLOR_TYPE_PALETTE, header, image.indices,
                std::size_t(image.width));
}

std::vector<std::uint8_t> encode_rgb(int width, int height, std::span<const std::uint8_t> rgb) {
  if (rgb.size() != std::size_t(width) * std::size_t(height) * 3)
    throw Error(ErrorCode::InvalidArgument, "RGB buffer size mismatch");
  return encode(width, height, PNG_COLOR_TYPE_RGB, [](png_structp, png_infop) {}, rgb,
                std::size_t(width) * 3);
}

}  // namespace artseg::png
