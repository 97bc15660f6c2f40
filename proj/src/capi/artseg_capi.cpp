#include "artseg/artseg.h"

#include "artseg/config.hpp"
#include "artseg/error.hpp"
#include "artseg/eval.hpp"
#include "artseg/label_io.hpp"
#include "artseg/labels.hpp"
#include "artseg/metsalto.hpp"
#include "artseg/overlay.hpp"
#include "artseg/pipeline.hpp"
#include "artseg/synth.hpp"

#include <cstdlib>
#include <cstring>
#include <new>
#include <string>

struct artseg_config {
  artseg::PipelineConfig value;
};

struct artseg_label_image {
  artseg::LabelImage value;
};

struct artseg_issue {
  artseg::IssueResult value;
};

namespace {

thread_local std::string last_error;

artseg_status to_status(artseg::ErrorCode code) {
  using artseg::ErrorCode;
  switch (code) {
    case ErrorCode::InvalidArgument: return ARTSEG_INVALID_ARGUMENT;
    case ErrorCode::Io: return ARTSEG_IO;
    case ErrorCode::MalformedHeader: return ARTSEG_MALFORMED_HEADER;
    case ErrorCode::InvalidLabelCode: return ARTSEG_INVALID_LABEL_CODE;
    case ErrorCode::TruncatedData: return ARTSEG_TRUNCATED_DATA;
    case ErrorCode::Config: return ARTSEG_CONFIG;
    case ErrorCode::InfeasibleRecipe: return ARTSEG_INFEASIBLE_RECIPE;
    case ErrorCode::MissingGroundTruth: return ARTSEG_MISSING_GROUND_TRUTH;
    case ErrorCode::UnknownStage: return ARTSEG_UNKNOWN_STAGE;
    case ErrorCode::DivisionByZero: return ARTSEG_DIVISION_BY_ZERO;
    case ErrorCode::DanglingReference: return ARTSEG_DANGLING_REFERENCE;
    case ErrorCode::Internal: return ARTSEG_INTERNAL;
  }
  return ARTSEG_INTERNAL;
}

artseg_status fail(artseg_status status, std::string message) {
  last_error = std::move(message);
  return status;
}

template <typename Fn>
artseg_status guard(Fn&& fn) {
  try {
    last_error.clear();
    return fn();
  } catch (const artseg::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(ARTSEG_INTERNAL, "out of memory");
  } catch (const std::filesystem::filesystem_error& e) {
    return fail(ARTSEG_IO, e.what());
  } catch (const std::exception& e) {
    return fail(ARTSEG_INTERNAL, e.what());
  }
}

char* dup(const std::string& s) {
  auto* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

artseg_status missing(const char* what) { return fail(ARTSEG_INVALID_ARGUMENT, std::string(what) + " is null"); }

artseg_eval_rates to_c(const artseg::eval::Rates& r) {
  return {r.nArticlesGT, r.nDetected, r.nCorrect, r.correctHundredths, r.overSegHundredths};
}

}  // namespace

extern "C" {

const char* artseg_version(void) { return ARTSEG_VERSION_STRING; }

const char* artseg_status_name(artseg_status status) {
  switch (status) {
    case ARTSEG_OK: return "OK";
    case ARTSEG_INVALID_ARGUMENT: return "InvalidArgument";
    case ARTSEG_IO: return "Io";
    case ARTSEG_MALFORMED_HEADER: return "MalformedHeader";
    case ARTSEG_INVALID_LABEL_CODE: return "InvalidLabelCode";
    case ARTSEG_TRUNCATED_DATA: return "TruncatedData";
    case ARTSEG_CONFIG: return "Config";
    case ARTSEG_INFEASIBLE_RECIPE: return "InfeasibleRecipe";
    case ARTSEG_MISSING_GROUND_TRUTH: return "MissingGroundTruth";
    case ARTSEG_UNKNOWN_STAGE: return "UnknownStage";
    case ARTSEG_DIVISION_BY_ZERO: return "DivisionByZero";
    case ARTSEG_DANGLING_REFERENCE: return "DanglingReference";
    case ARTSEG_PARTIAL_FAILURE: return "PartialFailure";
    case ARTSEG_INTERNAL: return "Internal";
  }
  return "Unknown";
}

const char* artseg_last_error(void) { return last_error.c_str(); }

void artseg_free(void* ptr) { std::free(ptr); }

artseg_status artseg_label_table(char** out_json) {
  if (!out_json) return missing("out_json");
  return guard([&] {
    *out_json = dup(artseg::label_table_json());
    return ARTSEG_OK;
  });
}

artseg_status artseg_config_new(artseg_config** out) {
  if (!out) return missing("out");
  return guard([&] {
    *out = new artseg_config{};
    return ARTSEG_OK;
  });
}

artseg_status artseg_config_parse(const char* text, artseg_config** out) {
  if (!text) return missing("text");
  if (!out) return missing("out");
  return guard([&] {
    *out = new artseg_config{artseg::parse_config(text)};
    return ARTSEG_OK;
  });
}

artseg_status artseg_config_load(const char* path, artseg_config** out) {
  if (!path) return missing("path");
  if (!out) return missing("out");
  return guard([&] {
    *out = new artseg_config{artseg::load_config(path)};
    return ARTSEG_OK;
  });
}

artseg_status artseg_config_set(artseg_config* config, const char* key, const char* value) {
  if (!config) return missing("config");
  if (!key) return missing("key");
  if (!value) return missing("value");
  return guard([&] {
    auto copy = config->value;
    artseg::set_config_value(copy, key, value);
    config->value = std::move(copy);
    return ARTSEG_OK;
  });
}

artseg_status artseg_config_serialize(const artseg_config* config, char** out_text) {
  if (!config) return missing("config");
  if (!out_text) return missing("out_text");
  return guard([&] {
    *out_text = dup(artseg::serialize_config(config->value));
    return ARTSEG_OK;
  });
}

artseg_status artseg_config_template(char** out_text) {
  if (!out_text) return missing("out_text");
  return guard([&] {
    *out_text = dup(artseg::config_template());
    return ARTSEG_OK;
  });
}

artseg_status artseg_config_out(const artseg_config* config, char** out_path) {
  if (!config) return missing("config");
  if (!out_path) return missing("out_path");
  return guard([&] {
    *out_path = dup(config->value.out);
    return ARTSEG_OK;
  });
}

void artseg_config_free(artseg_config* config) { delete config; }

artseg_status artseg_label_image_load(const char* path, artseg_label_image** out) {
  if (!path) return missing("path");
  if (!out) return missing("out");
  return guard([&] {
    *out = new artseg_label_image{artseg::load_label_map_file(path)};
    return ARTSEG_OK;
  });
}

artseg_status artseg_label_image_from_codes(int width, int height, const uint8_t* codes, artseg_label_image** out) {
  if (!out) return missing("out");
  if (width < 0 || height < 0) return fail(ARTSEG_INVALID_ARGUMENT, "negative dimensions");
  const auto n = std::size_t(width) * std::size_t(height);
  if (!codes && n > 0) return missing("codes");
  return guard([&] {
    std::vector<std::uint8_t> v(codes, codes + n);
    *out = new artseg_label_image{artseg::LabelImage(width, height, std::move(v))};
    return ARTSEG_OK;
  });
}

artseg_status artseg_label_image_save(const artseg_label_image* image, const char* path) {
  if (!image) return missing("image");
  if (!path) return missing("path");
  return guard([&] {
    artseg::save_label_map_file(image->value, path);
    return ARTSEG_OK;
  });
}

int artseg_label_image_width(const artseg_label_image* image) { return image ? image->value.width() : 0; }
int artseg_label_image_height(const artseg_label_image* image) { return image ? image->value.height() : 0; }

const uint8_t* artseg_label_image_codes(const artseg_label_image* image) {
  return image ? image->value.codes().data() : nullptr;
}

void artseg_label_image_free(artseg_label_image* image) { delete image; }

artseg_status artseg_segment_issue(const artseg_config* config, const char* issue_id, const char* const* page_paths,
                                   size_t page_count, artseg_issue** out) {
  if (!issue_id) return missing("issue_id");
  if (!page_paths && page_count > 0) return missing("page_paths");
  if (!out) return missing("out");
  return guard([&] {
    std::vector<std::filesystem::path> pages;
    for (size_t i = 0; i < page_count; ++i) {
      if (!page_paths[i]) return missing("page path");
      pages.emplace_back(page_paths[i]);
    }
    const artseg::PipelineConfig defaults;
    *out = new artseg_issue{artseg::segment_issue(config ? config->value : defaults, issue_id, pages)};
    return ARTSEG_OK;
  });
}

size_t artseg_issue_page_count(const artseg_issue* issue) { return issue ? issue->value.pages.size() : 0; }
size_t artseg_issue_failed_pages(const artseg_issue* issue) { return issue ? issue->value.failed_pages() : 0; }
size_t artseg_issue_article_count(const artseg_issue* issue) { return issue ? issue->value.articles.size() : 0; }

artseg_status artseg_issue_page_status(const artseg_issue* issue, size_t page) {
  if (!issue) return missing("issue");
  if (page >= issue->value.pages.size()) return fail(ARTSEG_INVALID_ARGUMENT, "page index out of range");
  const auto& p = issue->value.pages[page];
  return p.ok() ? ARTSEG_OK : to_status(p.error->code);
}

artseg_status artseg_issue_articles_json(const artseg_issue* issue, char** out_json) {
  if (!issue) return missing("issue");
  if (!out_json) return missing("out_json");
  return guard([&] {
    *out_json = dup(artseg::articles_json(issue->value));
    return ARTSEG_OK;
  });
}

artseg_status artseg_issue_mets(const artseg_issue* issue, char** out_xml) {
  if (!issue) return missing("issue");
  if (!out_xml) return missing("out_xml");
  return guard([&] {
    *out_xml = dup(artseg::emit_mets(artseg::to_issue_document(issue->value)));
    return ARTSEG_OK;
  });
}

artseg_status artseg_issue_alto(const artseg_issue* issue, int page_number, char** out_xml) {
  if (!issue) return missing("issue");
  if (!out_xml) return missing("out_xml");
  return guard([&] {
    const auto doc = artseg::to_issue_document(issue->value);
    for (const auto& page : doc.pages)
      if (page.number == page_number) {
        *out_xml = dup(artseg::emit_alto(page));
        return ARTSEG_OK;
      }
    return fail(ARTSEG_INVALID_ARGUMENT, "no processed page " + std::to_string(page_number));
  });
}

artseg_status artseg_issue_write(const artseg_issue* issue, const char* out_dir) {
  if (!issue) return missing("issue");
  if (!out_dir) return missing("out_dir");
  return guard([&] {
    artseg::write_issue_tree(artseg::to_issue_document(issue->value), out_dir);
    artseg::write_text_atomic(std::filesystem::path(out_dir) / issue->value.issueId / "articles.json",
                              artseg::articles_json(issue->value));
    return ARTSEG_OK;
  });
}

void artseg_issue_free(artseg_issue* issue) { delete issue; }

artseg_status artseg_segment_run(const artseg_config* config, const char* const* inputs, size_t input_count,
                                 const char* default_issue_id, const char* out_dir, artseg_segment_summary* summary) {
  if (!inputs && input_count > 0) return missing("inputs");
  return guard([&] {
    const artseg::PipelineConfig defaults;
    const auto& cfg = config ? config->value : defaults;
    std::vector<std::filesystem::path> paths;
    for (size_t i = 0; i < input_count; ++i) {
      if (!inputs[i]) return missing("input path");
      paths.emplace_back(inputs[i]);
    }
    const auto s = artseg::run_segment(cfg, paths, default_issue_id ? default_issue_id : "issue",
                                       out_dir ? std::filesystem::path(out_dir) : std::filesystem::path(cfg.out));
    if (summary) *summary = {s.issues, s.pages, s.failedPages, s.articles};
    if (s.failedPages > 0)
      return fail(ARTSEG_PARTIAL_FAILURE, std::to_string(s.failedPages) + " of " + std::to_string(s.pages) +
                                              " pages failed; see run.jsonl");
    return ARTSEG_OK;
  });
}

artseg_status artseg_overlay(const artseg_config* config, const char* input, const char* stage, const char* output) {
  if (!input) return missing("input");
  if (!stage) return missing("stage");
  if (!output) return missing("output");
  return guard([&] {
    const artseg::PipelineConfig defaults;
    const auto s = artseg::overlay_stage_from_name(stage);
    artseg::render_overlay_file(config ? config->value : defaults, input, s, output);
    return ARTSEG_OK;
  });
}

artseg_status artseg_synth_corpus(const char* recipe_json, uint64_t seed, int count, const char* format,
                                  const char* out_dir, artseg_synth_summary* summary) {
  if (!out_dir) return missing("out_dir");
  if (count < 0) return fail(ARTSEG_INVALID_ARGUMENT, "count must not be negative");
  return guard([&] {
    artseg::LabelMapFormat fmt = artseg::LabelMapFormat::Pgm;
    if (format && std::strcmp(format, "png") == 0)
      fmt = artseg::LabelMapFormat::IndexedPng;
    else if (format && std::strcmp(format, "pgm") != 0)
      return fail(ARTSEG_INVALID_ARGUMENT, std::string("unknown label format '") + format + "'");
    artseg::synth::RecipeFile recipe;
    if (recipe_json)
      recipe = artseg::synth::parse_recipe_json(recipe_json);
    else
      recipe.tmpl = artseg::synth::IssueTemplate{};
    const auto s = artseg::synth::write_corpus(out_dir, recipe, seed, count, fmt);
    if (summary) *summary = {s.issues, s.pages, s.parts, s.articles};
    return ARTSEG_OK;
  });
}

artseg_status artseg_synth_default_recipe(char** out_json) {
  if (!out_json) return missing("out_json");
  return guard([&] {
    *out_json = dup(artseg::synth::recipe_json(artseg::synth::IssueTemplate{}));
    return ARTSEG_OK;
  });
}

artseg_status artseg_eval_compute_rates(int64_t n_articles_gt, int64_t n_detected, int64_t n_correct, artseg_eval_rates* out) {
  if (!out) return missing("out");
  return guard([&] {
    *out = to_c(artseg::eval::compute_rates(n_articles_gt, n_detected, n_correct));
    return ARTSEG_OK;
  });
}

artseg_status artseg_eval_directories(const char* pred_dir, const char* gt_dir, double iou_threshold,
                                      char** out_report_json, char** out_report_table, artseg_eval_rates* out_rates) {
  if (!pred_dir) return missing("pred_dir");
  if (!gt_dir) return missing("gt_dir");
  return guard([&] {
    const auto report = artseg::eval::evaluate_directories(pred_dir, gt_dir, iou_threshold);
    if (out_report_json) *out_report_json = dup(artseg::eval::report_json(report));
    if (out_report_table) *out_report_table = dup(artseg::eval::report_table(report));
    if (!report.rates) {
      if (out_rates) *out_rates = {0, report.nDetected, 0, 0, 0};
      return fail(ARTSEG_DIVISION_BY_ZERO, "ground truth holds no article");
    }
    if (out_rates) *out_rates = to_c(*report.rates);
    return ARTSEG_OK;
  });
}

}  // extern "C"
