/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#ifndef MISSION_CONTENT_H
#define MISSION_CONTENT_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum McStatus {
  MC_STATUS_OK = 0,
  MC_STATUS_NULL_POINTER = 1,
  MC_STATUS_INVALID_UTF8 = 2,
  MC_STATUS_CONFIG_ERROR = 3,
  MC_STATUS_DATA_ERROR = 4,
  MC_STATUS_ANALYSIS_ERROR = 5,
  MC_STATUS_IO_ERROR = 6,
  MC_STATUS_PANIC = 7,
} McStatus;

// Loaded corpus.
typedef struct McCorpus McCorpus;

// Loaded lexicon.
typedef struct McLexicon McLexicon;

typedef struct McReadability {
  uintptr_t words;
  uintptr_t sentences;
  uintptr_t syllables;
  double fkgl;
} McReadability;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message for the last failed call on this thread, or null. The pointer is
// valid until the next `mc_` call on the same thread.
const char *mc_last_error_message(void);

// Load a CSV or JSONL corpus (chosen by extension).
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer.
enum McStatus mc_corpus_load(const char *path, struct McCorpus **out);

// # Safety
// `corpus` must come from [`mc_corpus_load`] and not be freed twice.
void mc_corpus_free(struct McCorpus *corpus);

// Number of documents; 0 for a null handle.
//
// # Safety
// `corpus` must be null or a live handle.
uintptr_t mc_corpus_len(const struct McCorpus *corpus);

// Load a `category,entry` lexicon CSV.
//
// # Safety
// `path` must be a NUL-terminated string and `out` a writable pointer.
enum McStatus mc_lexicon_load(const char *path, struct McLexicon **out);

// # Safety
// `lexicon` must come from [`mc_lexicon_load`] and not be freed twice.
void mc_lexicon_free(struct McLexicon *lexicon);

// Flesch-Kincaid grade level of a text.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum McStatus mc_fkgl(const char *text, struct McReadability *out);

// Yule's K of a text's raw tokens.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a writable pointer.
enum McStatus mc_yules_k(const char *text, double *out);

// Tag a text against a lexicon. Writes a JSON object
// `{"doc_id", "lexicon", "counts", "ratios"}` to `*out_json`.
//
// # Safety
// `lexicon` must be a live handle, `text` a NUL-terminated string and
// `out_json` a writable pointer. Free the result with [`mc_string_free`].
enum McStatus mc_tag_json(const struct McLexicon *lexicon, const char *text, char **out_json);

// Cosine similarity of two count vectors of length `len`.
//
// # Safety
// `x` and `y` must point to `len` readable values each.
enum McStatus mc_cosine(const uint64_t *x, const uint64_t *y, uintptr_t len, double *out);

// Run every stage of a TOML config. When `out_manifest_json` is not null it
// receives the manifest JSON, to be freed with [`mc_string_free`].
//
// # Safety
// `config_path` must be a NUL-terminated string; `out_manifest_json` must
// be null or writable.
enum McStatus mc_run_pipeline(const char *config_path, char **out_manifest_json);

// Release a string returned by this library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be freed twice.
void mc_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* MISSION_CONTENT_H */
