#include "artseg/labels.hpp"

#include "artseg/error.hpp"

#include <json.hpp>

namespace artseg {

const char* error_code_name(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::Io: return "Io";
    case ErrorCode::MalformedHeader: return "MalformedHeader";
    case ErrorCode::InvalidLabelCode: return "InvalidLabelCode";
    case ErrorCode::TruncatedData: return "TruncatedData";
    case ErrorCode::Config: return "Config";
    case ErrorCode::InfeasibleRecipe: return "InfeasibleRecipe";
    case ErrorCode::MissingGroundTruth: return "MissingGroundTruth";
    case ErrorCode::UnknownStage: return "UnknownStage";
    case ErrorCode::DivisionByZero: return "DivisionByZero";
    case ErrorCode::DanglingReference: return "DanglingReference";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

InvalidLabelCodeError::InvalidLabelCodeError(std::size_t position, int value)
    : Error(ErrorCode::InvalidLabelCode,
            "invalid label code " + std::to_string(value) + " at pixel " +
                std::to_string(position)),
      position_(position),
      value_(value) {}

std::string_view raw_label_name(RawLabel raw) noexcept {
  switch (raw) {
    case RawLabel::Background: return "background";
    case RawLabel::Character: return "character";
    case RawLabel::InterCharacter: return "inter-character";
    case RawLabel::InterWord: return "inter-word";
    case RawLabel::TitleCharacter: return "title character";
    case RawLabel::TitleInterCharacter: return "title inter-character";
    case RawLabel::TitleInterWord: return "title inter-word";
    case RawLabel::VerticalSeparator: return "vertical separator";
    case RawLabel::HorizontalSeparator: return "horizontal separator";
    case RawLabel::Noise: return "noise";
  }
  return "?";
}

std::string_view informative_label_name(InformativeLabel label) noexcept {
  switch (label) {
    case InformativeLabel::VerticalSeparator: return "vertical";
    case InformativeLabel::HorizontalSeparator: return "horizontal";
    case InformativeLabel::Title: return "title";
    case InformativeLabel::TextLine: return "text";
    case InformativeLabel::Noise: return "noise";
    case InformativeLabel::Background: return "background";
  }
  return "?";
}

std::optional<InformativeLabel> informative_label_from_name(std::string_view name) noexcept {
  for (int i = 0; i < kInformativeLabelCount; ++i) {
    auto l = static_cast<InformativeLabel>(i);
    if (informative_label_name(l) == name) return l;
  }
  return std::nullopt;
}

Rgb raw_label_color(RawLabel raw) noexcept {
  switch (raw) {
    case RawLabel::Background: return {255, 255, 255};
    case RawLabel::Character: return {40, 40, 40};
    case RawLabel::InterCharacter: return {90, 90, 90};
    case RawLabel::InterWord: return {150, 150, 150};
    case RawLabel::TitleCharacter: return {200, 30, 30};
    case RawLabel::TitleInterCharacter: return {230, 90, 90};
    case RawLabel::TitleInterWord: return {245, 150, 150};
    case RawLabel::VerticalSeparator: return {30, 60, 210};
    case RawLabel::HorizontalSeparator: return {20, 160, 60};
    case RawLabel::Noise: return {240, 200, 0};
  }
  return {0, 0, 0};
}

Rgb informative_label_color(InformativeLabel label) noexcept {
  switch (label) {
    case InformativeLabel::VerticalSeparator: return {30, 60, 210};
    case InformativeLabel::HorizontalSeparator: return {20, 160, 60};
    case InformativeLabel::Title: return {200, 30, 30};
    case InformativeLabel::TextLine: return {40, 40, 40};
    case InformativeLabel::Noise: return {240, 200, 0};
    case InformativeLabel::Background: return {255, 255, 255};
  }
  return {0, 0, 0};
}

std::string label_table_json() {
  nlohmann::ordered_json doc;
  doc["schema"] = "artseg.labels";
  doc["version"] = kLabelTableVersion;
  auto& raw = doc["raw"];
  raw = nlohmann::ordered_json::array();
  for (int code = 0; code < kRawLabelCount; ++code) {
    auto r = static_cast<RawLabel>(code);
    raw.push_back({{"code", code},
                   {"name", raw_label_name(r)},
                   {"informative", informative_label_name(to_informative(r))}});
  }
  auto& inf = doc["informative"];
  inf = nlohmann::ordered_json::array();
  for (int code = 0; code < kInformativeLabelCount; ++code) {
    inf.push_back({{"code", code},
                   {"name", informative_label_name(static_cast<InformativeLabel>(code))}});
  }
  return doc.dump(2) + "\n";
}

LabelImage::LabelImage(int width, int height, RawLabel fill)
    : width_(width), height_(height) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::InvalidArgument, "label image dimensions must be positive");
  codes_.assign(std::size_t(width) * std::size_t(height), static_cast<std::uint8_t>(fill));
}

LabelImage::LabelImage(int width, int height, std::vector<std::uint8_t> codes,
                       std::optional<double> dpi)
    : width_(width), height_(height), codes_(std::move(codes)), dpi_(dpi) {
  if (width <= 0 || height <= 0)
    throw Error(ErrorCode::InvalidArgument, "label image dimensions must be positive");
  if (codes_.size() != std::size_t(width) * std::size_t(height))
    throw Error(ErrorCode::InvalidArgument, "label buffer size does not match dimensions");
  for (std::size_t i = 0; i < codes_.size(); ++i)
    if (!is_valid_raw_code(codes_[i])) throw InvalidLabelCodeError(i, codes_[i]);
}

}  // namespace artseg
