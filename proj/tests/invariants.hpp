#pragma once

#include "artseg/config.hpp"
#include "artseg/grid.hpp"
#include "artseg/labels.hpp"
#include "artseg/textlines.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <vector>

// Structural checks; each returns an empty string when the invariant holds,
// otherwise a description of the first violation.
namespace invariants {

/// Boxes are pairwise disjoint and their areas sum to the page area.
std::string partition(std::span<const artseg::GridBox> boxes, const artseg::Rect& page);

/// Prolonged separators contain their detected extent at the same position,
/// and prolonging again leaves the geometry unchanged.
std::string prolongation(const artseg::SeparatorMask& mask, const artseg::Rect& page,
                         const artseg::GridOptions& options);

/// `order` lists every box id exactly once.
std::string order_permutation(std::span<const int> order, std::span<const artseg::GridBox> boxes);

/// Output pixel sets are disjoint and their union equals the input union.
std::string split_conservation(std::span<const artseg::TextLine> before, std::span<const artseg::TextLine> after);

/// Every line id sits in exactly one box.
std::string assignment_conservation(std::span<const artseg::TextLine> lines, std::span<const artseg::GridBox> boxes);

/// Runs the page stages on one label map and applies every check above.
std::vector<std::string> page_structure(const artseg::LabelImage& image, const artseg::PipelineConfig& config);

/// Every METS area points at an ALTO file of the issue and at an ID present
/// in it; ALTO IDs are unique per file.
std::string mets_integrity(const std::filesystem::path& issueDir);

}  // namespace invariants
