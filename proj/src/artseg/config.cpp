#include "artseg/config.hpp"

#include "artseg/error.hpp"

#include <charconv>
#include <cmath>
#include <sstream>
#include <vector>

namespace artseg {

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

[[noreturn]] void bad(const std::string& key, const std::string& why) {
  throw Error(ErrorCode::Config, "config key '" + key + "': " + why);
}

double to_double(const std::string& key, const std::string& v) {
  double out = 0.0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size() || !std::isfinite(out)) bad(key, "expected a number, got '" + v + "'");
  return out;
}

int to_int(const std::string& key, const std::string& v) {
  int out = 0;
  auto [p, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
  if (ec != std::errc() || p != v.data() + v.size()) bad(key, "expected an integer, got '" + v + "'");
  return out;
}

double in_range(const std::string& key, double v, double lo, double hi, bool open_lo = false) {
  if (v < lo || v > hi || (open_lo && v == lo)) {
    std::ostringstream msg;
    msg << "value " << v << " outside " << (open_lo ? "(" : "[") << lo << ", " << hi << "]";
    bad(key, msg.str());
  }
  return v;
}

std::string num(double v) {
  char buf[64];
  auto [p, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, p);
}

std::optional<double> auto_or_px(const std::string& key, const std::string& v) {
  if (v == "auto") return std::nullopt;
  return in_range(key, to_double(key, v), 0.0, 1e6);
}

}  // namespace

void set_config_value(PipelineConfig& c, const std::string& key, const std::string& v) {
  if (key == "connectivity") {
    const int n = to_int(key, v);
    if (n != 4 && n != 8) bad(key, "must be 4 or 8");
    c.connectivity = n == 4 ? Connectivity::Four : Connectivity::Eight;
  } else if (key == "tie_order") {
    TieOrder order{};
    std::size_t i = 0;
    std::stringstream ss(v);
    std::string item;
    while (std::getline(ss, item, ',')) {
      auto label = informative_label_from_name(trim(item));
      if (!label) bad(key, "unknown label '" + trim(item) + "'");
      if (i >= order.size()) bad(key, "expects five labels");
      order[i++] = *label;
    }
    if (i != order.size() || !is_valid_tie_order(order))
      bad(key, "must list vertical, horizontal, title, text, noise once each");
    c.tieOrder = order;
  } else if (key == "split_factor") {
    c.splitFactor = in_range(key, to_double(key, v), 1.0, 100.0);
  } else if (key == "split_rounds") {
    c.splitRounds = int(in_range(key, to_int(key, v), 0, 16));
  } else if (key == "split_valley_ratio") {
    c.splitValleyRatio = in_range(key, to_double(key, v), 0.0, 1.0, true);
  } else if (key == "gap_tol") {
    c.gapTol = auto_or_px(key, v);
  } else if (key == "gap_tol_factor") {
    c.gapTolFactor = in_range(key, to_double(key, v), 0.0, 10.0);
  } else if (key == "offset_tol") {
    c.offsetTol = auto_or_px(key, v);
  } else if (key == "offset_tol_factor") {
    c.offsetTolFactor = in_range(key, to_double(key, v), 0.0, 10.0);
  } else if (key == "max_separator_thickness") {
    c.maxSeparatorThickness = int(in_range(key, to_int(key, v), 1, 10000));
  } else if (key == "length_epsilon") {
    c.lengthEpsilon = int(in_range(key, to_int(key, v), 0, 1000));
  } else if (key == "iou_threshold") {
    c.iouThreshold = in_range(key, to_double(key, v), 0.0, 1.0, true);
  } else if (key == "workers") {
    c.workers = int(in_range(key, to_int(key, v), 0, 1024));
  } else if (key == "label_format") {
    if (v == "pgm")
      c.labelFormat = LabelMapFormat::Pgm;
    else if (v == "png")
      c.labelFormat = LabelMapFormat::IndexedPng;
    else
      bad(key, "must be pgm or png");
  } else if (key == "out") {
    if (v.empty()) bad(key, "must not be empty");
    c.out = v;
  } else {
    throw Error(ErrorCode::Config, "unknown config key '" + key + "'");
  }
}

PipelineConfig parse_config(const std::string& text) {
  PipelineConfig c;
  std::istringstream in(text);
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const auto body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::Config, "line " + std::to_string(number) + ": expected key = value");
    try {
      set_config_value(c, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
    } catch (const Error& e) {
      throw Error(ErrorCode::Config, "line " + std::to_string(number) + ": " + e.what());
    }
  }
  return c;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  const auto bytes = read_file_bytes(path);
  return parse_config(std::string(bytes.begin(), bytes.end()));
}

namespace {

std::vector<std::pair<std::string, std::string>> entries(const PipelineConfig& c) {
  std::string order;
  for (std::size_t i = 0; i < c.tieOrder.size(); ++i) {
    if (i) order += ",";
    order += informative_label_name(c.tieOrder[i]);
  }
  return {
      {"connectivity", std::to_string(int(c.connectivity))},
      {"tie_order", order},
      {"split_factor", num(c.splitFactor)},
      {"split_rounds", std::to_string(c.splitRounds)},
      {"split_valley_ratio", num(c.splitValleyRatio)},
      {"gap_tol", c.gapTol ? num(*c.gapTol) : "auto"},
      {"gap_tol_factor", num(c.gapTolFactor)},
      {"offset_tol", c.offsetTol ? num(*c.offsetTol) : "auto"},
      {"offset_tol_factor", num(c.offsetTolFactor)},
      {"max_separator_thickness", std::to_string(c.maxSeparatorThickness)},
      {"length_epsilon", std::to_string(c.lengthEpsilon)},
      {"iou_threshold", num(c.iouThreshold)},
      {"workers", std::to_string(c.workers)},
      {"label_format", c.labelFormat == LabelMapFormat::Pgm ? "pgm" : "png"},
      {"out", c.out},
  };
}

}  // namespace

std::string serialize_config(const PipelineConfig& c) {
  std::string out;
  for (const auto& [k, v] : entries(c)) out += k + " = " + v + "\n";
  return out;
}

std::string config_template() {
  static const std::vector<std::pair<std::string, std::string>> help{
      {"connectivity", "pixel adjacency for components: 4 or 8"},
      {"tie_order", "vote priority on equal counts, highest first"},
      {"split_factor", "a line is merged when its hull area exceeds this x the mean"},
      {"split_rounds", "maximum splitting passes"},
      {"split_valley_ratio", "row sums below this x the median row sum are valleys"},
      {"gap_tol", "collinear gap tolerance in px, or auto"},
      {"gap_tol_factor", "auto gap tolerance: factor x median text-line height"},
      {"offset_tol", "collinear offset tolerance in px, or auto"},
      {"offset_tol_factor", "auto offset tolerance: factor x median separator thickness"},
      {"max_separator_thickness", "thicker separator components are dropped as noise"},
      {"length_epsilon", "px margin for the strictly-longer separator test"},
      {"iou_threshold", "eval: minimum IoU for a correct article"},
      {"workers", "page worker threads, 0 for one per hardware thread"},
      {"label_format", "label maps written by synth: pgm or png"},
      {"out", "output directory"},
  };
  std::string out = "# artseg configuration\n";
  const auto values = entries(PipelineConfig{});
  for (std::size_t i = 0; i < values.size(); ++i) {
    out += "\n# " + help[i].second + "\n";
    out += values[i].first + " = " + values[i].second + "\n";
  }
  return out;
}

}  // namespace artseg
