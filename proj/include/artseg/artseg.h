#ifndef ARTSEG_ARTSEG_H
#define ARTSEG_ARTSEG_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#if defined(ARTSEG_BUILDING_LIBRARY)
#define ARTSEG_API __declspec(dllexport)
#else
#define ARTSEG_API __declspec(dllimport)
#endif
#else
#define ARTSEG_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum artseg_status {
  ARTSEG_OK = 0,
  ARTSEG_INVALID_ARGUMENT = 1,
  ARTSEG_IO = 2,
  ARTSEG_MALFORMED_HEADER = 3,
  ARTSEG_INVALID_LABEL_CODE = 4,
  ARTSEG_TRUNCATED_DATA = 5,
  ARTSEG_CONFIG = 6,
  ARTSEG_INFEASIBLE_RECIPE = 7,
  ARTSEG_MISSING_GROUND_TRUTH = 8,
  ARTSEG_UNKNOWN_STAGE = 9,
  ARTSEG_DIVISION_BY_ZERO = 10,
  ARTSEG_DANGLING_REFERENCE = 11,
  ARTSEG_PARTIAL_FAILURE = 12,
  ARTSEG_INTERNAL = 99
} artseg_status;

typedef struct artseg_config artseg_config;
typedef struct artseg_label_image artseg_label_image;
typedef struct artseg_issue artseg_issue;

typedef struct artseg_segment_summary {
  int issues;
  int pages;
  int failed_pages;
  int articles;
} artseg_segment_summary;

typedef struct artseg_synth_summary {
  int issues;
  int pages;
  int page_articles;
  int articles;
} artseg_synth_summary;

typedef struct artseg_eval_rates {
  int64_t n_articles_gt;
  int64_t n_detected;
  int64_t n_correct;
  int64_t correct_hundredths;
  int64_t over_seg_hundredths;
} artseg_eval_rates;

/* Library */
ARTSEG_API const char* artseg_version(void);
ARTSEG_API const char* artseg_status_name(artseg_status status);
/* Message of the last failing call on this thread; empty after success. */
ARTSEG_API const char* artseg_last_error(void);
/* Releases strings returned through char** out-parameters. */
ARTSEG_API void artseg_free(void* ptr);
/* Versioned JSON table of raw and informative label codes. */
ARTSEG_API artseg_status artseg_label_table(char** out_json);

/* Configuration */
ARTSEG_API artseg_status artseg_config_new(artseg_config** out);
ARTSEG_API artseg_status artseg_config_parse(const char* text, artseg_config** out);
ARTSEG_API artseg_status artseg_config_load(const char* path, artseg_config** out);
ARTSEG_API artseg_status artseg_config_set(artseg_config* config, const char* key, const char* value);
ARTSEG_API artseg_status artseg_config_serialize(const artseg_config* config, char** out_text);
ARTSEG_API artseg_status artseg_config_template(char** out_text);
/* Output directory from the configuration. */
ARTSEG_API artseg_status artseg_config_out(const artseg_config* config, char** out_path);
ARTSEG_API void artseg_config_free(artseg_config* config);

/* Label maps */
ARTSEG_API artseg_status artseg_label_image_load(const char* path, artseg_label_image** out);
ARTSEG_API artseg_status artseg_label_image_from_codes(int width, int height, const uint8_t* codes,
                                                       artseg_label_image** out);
ARTSEG_API artseg_status artseg_label_image_save(const artseg_label_image* image, const char* path);
ARTSEG_API int artseg_label_image_width(const artseg_label_image* image);
ARTSEG_API int artseg_label_image_height(const artseg_label_image* image);
/* Row-major raw codes, width * height bytes, owned by the image. */
ARTSEG_API const uint8_t* artseg_label_image_codes(const artseg_label_image* image);
ARTSEG_API void artseg_label_image_free(artseg_label_image* image);

/* Segmentation of one issue held in memory */
ARTSEG_API artseg_status artseg_segment_issue(const artseg_config* config, const char* issue_id,
                                              const char* const* page_paths, size_t page_count,
                                              artseg_issue** out);
ARTSEG_API size_t artseg_issue_page_count(const artseg_issue* issue);
ARTSEG_API size_t artseg_issue_failed_pages(const artseg_issue* issue);
ARTSEG_API size_t artseg_issue_article_count(const artseg_issue* issue);
/* Status of a 0-based page: ARTSEG_OK or the error that stopped it. */
ARTSEG_API artseg_status artseg_issue_page_status(const artseg_issue* issue, size_t page);
ARTSEG_API artseg_status artseg_issue_articles_json(const artseg_issue* issue, char** out_json);
ARTSEG_API artseg_status artseg_issue_mets(const artseg_issue* issue, char** out_xml);
/* ALTO for a 1-based page number. */
ARTSEG_API artseg_status artseg_issue_alto(const artseg_issue* issue, int page_number, char** out_xml);
/* Writes {out_dir}/{issue_id}/mets.xml, alto/ and articles.json. */
ARTSEG_API artseg_status artseg_issue_write(const artseg_issue* issue, const char* out_dir);
ARTSEG_API void artseg_issue_free(artseg_issue* issue);

/* Batch segmentation: inputs are label-map files or directories. Returns
   ARTSEG_PARTIAL_FAILURE when any page failed; outputs for the others are
   still written. */
ARTSEG_API artseg_status artseg_segment_run(const artseg_config* config, const char* const* inputs,
                                            size_t input_count, const char* default_issue_id,
                                            const char* out_dir, artseg_segment_summary* summary);

/* Overlay: stage is labels|smoothed|lines|grid|articles|order. */
ARTSEG_API artseg_status artseg_overlay(const artseg_config* config, const char* input, const char* stage,
                                        const char* output);

/* Generator: recipe_json may be NULL for the default template; format is
   "pgm" or "png". */
ARTSEG_API artseg_status artseg_synth_corpus(const char* recipe_json, uint64_t seed, int count,
                                             const char* format, const char* out_dir,
                                             artseg_synth_summary* summary);
ARTSEG_API artseg_status artseg_synth_default_recipe(char** out_json);

/* Evaluation */
ARTSEG_API artseg_status artseg_eval_compute_rates(int64_t n_articles_gt, int64_t n_detected, int64_t n_correct,
                                                   artseg_eval_rates* out);
/* Any of the out-parameters may be NULL. Returns ARTSEG_DIVISION_BY_ZERO
   with both reports filled when the ground truth holds no article. */
ARTSEG_API artseg_status artseg_eval_directories(const char* pred_dir, const char* gt_dir, double iou_threshold,
                                                 char** out_report_json, char** out_report_table,
                                                 artseg_eval_rates* out_rates);

#ifdef __cplusplus
}
#endif

#endif
