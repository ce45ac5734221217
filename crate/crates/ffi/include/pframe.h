#ifndef PFRAME_H
#define PFRAME_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum PfStatus {
  PF_STATUS_OK = 0,
  PF_STATUS_NULL_POINTER = 1,
  PF_STATUS_INVALID_ARGUMENT = 2,
  PF_STATUS_UNKNOWN_ENTRY = 3,
  PF_STATUS_PARSE = 4,
  PF_STATUS_UNSUPPORTED = 5,
  PF_STATUS_NUMERICAL = 6,
  PF_STATUS_NOT_TIGHT = 7,
  PF_STATUS_IO = 8,
  PF_STATUS_PANIC = 9,
} PfStatus;

typedef enum PfVerdict {
  PF_VERDICT_VERIFIED = 0,
  PF_VERDICT_FALSIFIED = 1,
  PF_VERDICT_INCONCLUSIVE = 2,
} PfVerdict;

/**
 * Optimality certificate.
 */
typedef struct PfCertificate PfCertificate;

/**
 * Weighted point configuration.
 */
typedef struct PfConfiguration PfConfiguration;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *pf_last_error(void);

/**
 * Library version as a static string.
 */
const char *pf_version(void);

/**
 * # Safety
 * `name` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PfStatus pf_config_from_catalog(const char *name, struct PfConfiguration **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PfStatus pf_config_from_json(const char *json, struct PfConfiguration **out);

/**
 * # Safety
 * `cfg` must come from a `pf_config_*` constructor and not be used afterwards.
 */
void pf_config_free(struct PfConfiguration *cfg);

/**
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum PfStatus pf_config_len(const struct PfConfiguration *cfg, size_t *out);

/**
 * p-frame energy of the configuration.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum PfStatus pf_energy(const struct PfConfiguration *cfg, double p, double *out);

/**
 * Largest `t <= max_t` for which the configuration is a weighted design.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum PfStatus pf_design_strength(const struct PfConfiguration *cfg, size_t max_t, size_t *out);

/**
 * Tight-design certificate for the p-frame kernel.
 *
 * # Safety
 * `cfg` must be a live handle and `out` a valid pointer.
 */
enum PfStatus pf_certificate_tight(const struct PfConfiguration *cfg,
                                   double p,
                                   struct PfCertificate **out);

/**
 * 600-cell certificate for `p` in `[8, 10]`.
 *
 * # Safety
 * `out` must be a valid pointer.
 */
enum PfStatus pf_certificate_600cell(double p, struct PfCertificate **out);

/**
 * Certified LP lower bound; `degree == 0` picks the default for `p`.
 *
 * # Safety
 * `space` must be a NUL-terminated string such as `"rp:3"` and `out` a valid pointer.
 */
enum PfStatus pf_certificate_lp(const char *space,
                                double p,
                                size_t degree,
                                struct PfCertificate **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` a valid pointer.
 */
enum PfStatus pf_certificate_from_json(const char *json, struct PfCertificate **out);

/**
 * Re-runs all checks; `cfg` may be null, which skips the interpolation check.
 *
 * # Safety
 * `cert` must be a live handle, `cfg` null or live, and `out` a valid pointer.
 */
enum PfStatus pf_certificate_verify(struct PfCertificate *cert,
                                    const struct PfConfiguration *cfg,
                                    enum PfVerdict *out);

/**
 * Rigorous bound: the lower end of the constant coefficient minus the sweep slack
 * for lower bounds.
 *
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
enum PfStatus pf_certificate_bound(const struct PfCertificate *cert, double *out);

/**
 * Serialized certificate; release with `pf_string_free`.
 *
 * # Safety
 * `cert` must be a live handle and `out` a valid pointer.
 */
enum PfStatus pf_certificate_to_json(const struct PfCertificate *cert, char **out);

/**
 * # Safety
 * `cert` must come from a `pf_certificate_*` constructor and not be used afterwards.
 */
void pf_certificate_free(struct PfCertificate *cert);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void pf_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PFRAME_H */
