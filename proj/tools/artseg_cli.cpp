#include "artseg/artseg.h"

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitUsage = 2;

int exit_code(artseg_status status) {
  switch (status) {
    case ARTSEG_OK: return kExitOk;
    case ARTSEG_INVALID_ARGUMENT:
    case ARTSEG_CONFIG:
    case ARTSEG_UNKNOWN_STAGE: return kExitUsage;
    default: return kExitFailure;
  }
}

int report(artseg_status status) {
  if (status != ARTSEG_OK) std::cerr << "artseg: " << artseg_status_name(status) << ": " << artseg_last_error() << "\n";
  return exit_code(status);
}

std::string take(char* s) {
  std::string out = s ? s : "";
  artseg_free(s);
  return out;
}

struct ConfigHandle {
  artseg_config* ptr = nullptr;
  ~ConfigHandle() { artseg_config_free(ptr); }
};

artseg_status load_config(const std::string& path, std::optional<int> workers, ConfigHandle& cfg) {
  auto st = path.empty() ? artseg_config_new(&cfg.ptr) : artseg_config_load(path.c_str(), &cfg.ptr);
  if (st != ARTSEG_OK) return st;
  if (workers) st = artseg_config_set(cfg.ptr, "workers", std::to_string(*workers).c_str());
  return st;
}

std::string config_out(const ConfigHandle& cfg) {
  char* out = nullptr;
  if (artseg_config_out(cfg.ptr, &out) != ARTSEG_OK) return "out";
  return take(out);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) return {};
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

double config_iou(const ConfigHandle& cfg) {
  char* text = nullptr;
  if (artseg_config_serialize(cfg.ptr, &text) != ARTSEG_OK) return 0.8;
  std::istringstream in(take(text));
  std::string line;
  while (std::getline(in, line))
    if (line.rfind("iou_threshold = ", 0) == 0) return std::stod(line.substr(16));
  return 0.8;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"artseg: newspaper article segmentation from pixel label maps"};
  app.set_version_flag("--version", std::string(artseg_version()));
  app.require_subcommand(1);

  std::string config_path;
  std::string out;
  std::optional<int> workers;

  auto* segment = app.add_subcommand("segment", "Segment label maps into articles and write METS/ALTO");
  std::vector<std::string> inputs;
  std::string issue_id = "issue";
  bool print_config = false;
  segment->add_option("inputs", inputs, "Label-map files, an issue directory, or a corpus directory");
  segment->add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  segment->add_option("--out", out, "Output directory (overrides the config)");
  segment->add_option("--workers", workers, "Page worker threads, 0 for one per hardware thread")
      ->check(CLI::Range(0, 1024));
  segment->add_option("--issue-id", issue_id, "Issue id for a list of files");
  segment->add_flag("--print-config", print_config, "Print the default configuration and exit");

  auto* overlay = app.add_subcommand("overlay", "Render one pipeline stage of a label map");
  std::string overlay_input;
  std::string stage = "articles";
  overlay->add_option("input", overlay_input, "Label map")->required();
  overlay->add_option("--stage", stage, "labels|smoothed|lines|grid|articles|order");
  overlay->add_option("--out", out, "Output image (.png, otherwise PPM)")->required();
  overlay->add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);

  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  std::string recipe_path;
  std::uint64_t seed = 1;
  int count = 1;
  std::string format;
  bool print_recipe = false;
  synth->add_option("recipe", recipe_path, "Recipe JSON (default template when omitted)")->check(CLI::ExistingFile);
  synth->add_option("--seed", seed, "Corpus seed");
  synth->add_option("--count", count, "Number of issues")->check(CLI::NonNegativeNumber);
  synth->add_option("--format", format, "Label-map format: pgm or png")->check(CLI::IsMember({"pgm", "png"}));
  synth->add_option("--out", out, "Corpus directory (overrides the config)");
  synth->add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);
  synth->add_flag("--print-recipe", print_recipe, "Print the default recipe and exit");

  auto* eval = app.add_subcommand("eval", "Score predictions against ground truth");
  std::string pred_dir;
  std::string gt_dir;
  std::optional<double> iou;
  eval->add_option("predictions", pred_dir, "Segment output directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("groundtruth", gt_dir, "Synth corpus directory")->required()->check(CLI::ExistingDirectory);
  eval->add_option("--iou", iou, "IoU threshold (overrides the config)")->check(CLI::Range(0.0, 1.0));
  eval->add_option("--out", out, "Write the JSON report to this file");
  eval->add_option("--config", config_path, "Configuration file")->check(CLI::ExistingFile);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kExitOk : kExitUsage;
  }

  ConfigHandle cfg;
  if (auto st = load_config(config_path, workers, cfg); st != ARTSEG_OK) return report(st);

  if (*segment) {
    if (print_config) {
      char* text = nullptr;
      if (auto st = artseg_config_template(&text); st != ARTSEG_OK) return report(st);
      std::cout << take(text);
      return kExitOk;
    }
    if (inputs.empty()) {
      std::cerr << "artseg segment: no inputs\n";
      return kExitUsage;
    }
    std::vector<const char*> argv_inputs;
    for (const auto& i : inputs) argv_inputs.push_back(i.c_str());
    const auto dir = out.empty() ? config_out(cfg) : out;
    artseg_segment_summary s{};
    const auto st = artseg_segment_run(cfg.ptr, argv_inputs.data(), argv_inputs.size(), issue_id.c_str(),
                                       dir.c_str(), &s);
    if (st == ARTSEG_OK || st == ARTSEG_PARTIAL_FAILURE)
      std::cout << "segmented " << s.issues << " issue(s), " << s.pages << " page(s), " << s.failed_pages
                << " failed, " << s.articles << " article(s) -> " << dir << "\n";
    return report(st);
  }

  if (*overlay) return report(artseg_overlay(cfg.ptr, overlay_input.c_str(), stage.c_str(), out.c_str()));

  if (*synth) {
    if (print_recipe) {
      char* text = nullptr;
      if (auto st = artseg_synth_default_recipe(&text); st != ARTSEG_OK) return report(st);
      std::cout << take(text);
      return kExitOk;
    }
    std::string recipe;
    if (!recipe_path.empty()) recipe = read_text(recipe_path);
    if (format.empty()) {
      char* text = nullptr;
      artseg_config_serialize(cfg.ptr, &text);
      format = take(text).find("label_format = png") != std::string::npos ? "png" : "pgm";
    }
    const auto dir = out.empty() ? config_out(cfg) : out;
    artseg_synth_summary s{};
    const auto st = artseg_synth_corpus(recipe_path.empty() ? nullptr : recipe.c_str(), seed, count, format.c_str(),
                                        dir.c_str(), &s);
    if (st == ARTSEG_OK)
      std::cout << "generated " << s.issues << " issue(s), " << s.pages << " page(s), " << s.articles
                << " article(s) -> " << dir << "\n";
    return report(st);
  }

  if (*eval) {
    char* json = nullptr;
    char* table = nullptr;
    artseg_eval_rates rates{};
    const auto st = artseg_eval_directories(pred_dir.c_str(), gt_dir.c_str(), iou ? *iou : config_iou(cfg), &json,
                                            &table, &rates);
    const auto json_text = take(json);
    const auto table_text = take(table);
    if (!table_text.empty()) std::cout << table_text;
    if (!out.empty() && !json_text.empty()) {
      std::ofstream f(out, std::ios::binary);
      f << json_text;
      if (!f) {
        std::cerr << "artseg eval: cannot write " << out << "\n";
        return kExitFailure;
      }
    }
    return report(st);
  }
  return kExitUsage;
}
