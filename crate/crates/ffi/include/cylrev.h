#ifndef CYLREV_H
#define CYLREV_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

typedef enum CylrevStatus {
  CYLREV_STATUS_OK = 0,
  CYLREV_STATUS_NULL_POINTER = 1,
  CYLREV_STATUS_INVALID_ARGUMENT = 2,
  /**
   * A span or bound exceeds what the selected method accepts.
   */
  CYLREV_STATUS_CAPACITY = 3,
  CYLREV_STATUS_NOT_INVERTIBLE = 4,
  /**
   * The output buffer is shorter than the result; the needed length is reported.
   */
  CYLREV_STATUS_BUFFER_TOO_SMALL = 5,
  CYLREV_STATUS_PANIC = 6,
} CylrevStatus;

typedef struct CylrevCollection CylrevCollection;

typedef struct CylrevSpectrum CylrevSpectrum;

/**
 * Message for the most recent failure on this thread, or NULL. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *cylrev_last_error(void);

/**
 * Builds a collection from `len` strictly increasing positions.
 *
 * # Safety
 * `positions` must point to `len` readable values; `out` must be writable.
 */
enum CylrevStatus cylrev_collection_new(const size_t *positions,
                                        size_t len,
                                        struct CylrevCollection **out);

/**
 * Parses positions such as `"1,2,4"` or `"(1, 2, 4)"`.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum CylrevStatus cylrev_collection_parse(const char *text, struct CylrevCollection **out);

/**
 * # Safety
 * `c` must come from a `cylrev_collection_*` constructor and not be freed twice.
 */
void cylrev_collection_free(struct CylrevCollection *c);

/**
 * Exact-period spectrum. `t_max = 0` searches completely (brute force for
 * small spans, polynomial method otherwise); a positive `t_max` bounds the
 * polynomial search for large spans.
 *
 * # Safety
 * `c` must be a live collection handle; `out` must be writable.
 */
enum CylrevStatus cylrev_spectrum_compute(const struct CylrevCollection *c,
                                          uint64_t t_max,
                                          struct CylrevSpectrum **out);

/**
 * Writes the exact periods, descending, into `buf`. `*len` receives the
 * number of periods even when the buffer is too small.
 *
 * # Safety
 * `s` must be a live spectrum; `buf` must hold `cap` values; `len` writable.
 */
enum CylrevStatus cylrev_spectrum_periods(const struct CylrevSpectrum *s,
                                          uint64_t *buf,
                                          size_t cap,
                                          size_t *len);

/**
 * Writes the kernel, descending, into `buf`; same conventions as the periods.
 *
 * # Safety
 * As for [`cylrev_spectrum_periods`].
 */
enum CylrevStatus cylrev_spectrum_kernel(const struct CylrevSpectrum *s,
                                         uint64_t *buf,
                                         size_t cap,
                                         size_t *len);

/**
 * Bound up to which every exact period was searched; 0 for a NULL handle.
 *
 * # Safety
 * `s` must be NULL or a live spectrum.
 */
uint64_t cylrev_spectrum_complete_up_to(const struct CylrevSpectrum *s);

/**
 * JSON form of the spectrum; free the result with [`cylrev_string_free`].
 *
 * # Safety
 * `s` must be a live spectrum; `out` must be writable.
 */
enum CylrevStatus cylrev_spectrum_to_json(const struct CylrevSpectrum *s, char **out);

/**
 * # Safety
 * `s` must come from [`cylrev_spectrum_compute`] and not be freed twice.
 */
void cylrev_spectrum_free(struct CylrevSpectrum *s);

/**
 * Reversibility of the collection's rule on a cylinder of `n` cells.
 *
 * # Safety
 * `c` must be a live collection; `out` must be writable.
 */
enum CylrevStatus cylrev_is_reversible(const struct CylrevCollection *c, uint64_t n, bool *out);

/**
 * Inverse rule on `n` cells as a 01 string, position 0 first. Free the
 * result with [`cylrev_string_free`].
 *
 * # Safety
 * `c` must be a live collection; `out` must be writable.
 */
enum CylrevStatus cylrev_inverse_rule(const struct CylrevCollection *c, uint64_t n, char **out);

/**
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void cylrev_string_free(char *s);

#endif /* CYLREV_H */
