#pragma once

#include "artseg/config.hpp"
#include "artseg/pipeline.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

namespace artseg {

enum class OverlayStage { Labels, Smoothed, Lines, Grid, Articles, Order };

/// Throws UnknownStage for anything other than
/// labels|smoothed|lines|grid|articles|order.
OverlayStage overlay_stage_from_name(std::string_view name);
const char* overlay_stage_name(OverlayStage stage) noexcept;

struct RgbImage {
  int width = 0;
  int height = 0;
  std::vector<std::uint8_t> rgb;  // row-major, 3 bytes per pixel
};

/// Renders one stage of a page processed with rasters kept.
RgbImage render_overlay(const PageResult& page, const std::vector<Article>& articles, OverlayStage stage);

/// PNG for a .png path, binary PPM otherwise.
void write_rgb_image(const RgbImage& image, const std::filesystem::path& path);

/// Segments a single label map and writes the requested stage.
void render_overlay_file(const PipelineConfig& config, const std::filesystem::path& input, OverlayStage stage,
                         const std::filesystem::path& output);

}  // namespace artseg
