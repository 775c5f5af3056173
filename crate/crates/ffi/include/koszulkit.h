#ifndef KOSZULKIT_H
#define KOSZULKIT_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum KzkStatus {
  KZK_STATUS_OK = 0,
  KZK_STATUS_NULL_ARGUMENT = 1,
  KZK_STATUS_INVALID_UTF8 = 2,
  KZK_STATUS_PARSE = 3,
  KZK_STATUS_UNRESOLVED_REFERENCE = 4,
  KZK_STATUS_USAGE = 5,
  KZK_STATUS_INVALID = 6,
  KZK_STATUS_OVERFLOW = 7,
  KZK_STATUS_COMPUTATION = 8,
  KZK_STATUS_PANIC = 9,
} KzkStatus;

// A parsed, canonical document.
typedef struct KzkDocument KzkDocument;

// The report of one command.
typedef struct KzkReport KzkReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failure on this thread; empty after a success.
// Valid until the next library call on the same thread.
const char *kzk_last_error(void);

// # Safety
// `s` must come from this library, or be null.
void kzk_string_free(char *s);

// Parse a document from its text.
//
// # Safety
// `src` must be a nul-terminated string and `out` writable.
enum KzkStatus kzk_document_parse(const char *src, struct KzkDocument **out);

// Canonical text of a document; free with [`kzk_string_free`].
//
// # Safety
// `doc` must be a live handle and `out` writable.
enum KzkStatus kzk_document_to_text(const struct KzkDocument *doc, char **out);

// # Safety
// `doc` must come from [`kzk_document_parse`], or be null.
void kzk_document_free(struct KzkDocument *doc);

// Run a command as the command-line tool would. `argv` holds the
// arguments after the program name, e.g. `{"tot", "--cube", "c"}`. A
// non-null `doc` stands in for `--doc`.
//
// A report is produced for every well-formed invocation, including ones
// whose checks fail; only malformed arguments give [`KzkStatus::Usage`].
//
// # Safety
// `argv` must hold `argc` nul-terminated strings; `doc` must be a live
// handle or null; `out` must be writable.
enum KzkStatus kzk_run(const struct KzkDocument *doc,
                       int argc,
                       const char *const *argv,
                       struct KzkReport **out);

// Process exit code of a report: 0 pass, 1 fail, 2 error, 3 inconclusive.
//
// # Safety
// `r` must be a live handle.
int kzk_report_exit_code(const struct KzkReport *r);

// Structured (JSON) form of a report; free with [`kzk_string_free`].
//
// # Safety
// `r` must be a live handle and `out` writable.
enum KzkStatus kzk_report_json(const struct KzkReport *r, char **out);

// Text form of a report; free with [`kzk_string_free`].
//
// # Safety
// `r` must be a live handle and `out` writable.
enum KzkStatus kzk_report_text(const struct KzkReport *r, char **out);

// # Safety
// `r` must come from [`kzk_run`], or be null.
void kzk_report_free(struct KzkReport *r);

// Invariant factors of an integer matrix given row-major. Writes
// `min(rows, cols)` diagonal entries of the Smith form to `diag`, zeros
// included. [`KzkStatus::Overflow`] if an entry does not fit in 64 bits.
//
// # Safety
// `data` must hold `rows * cols` values and `diag` room for
// `min(rows, cols)`.
enum KzkStatus kzk_smith_diagonal(uintptr_t rows,
                                  uintptr_t cols,
                                  const int64_t *data,
                                  int64_t *diag);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* KOSZULKIT_H */
