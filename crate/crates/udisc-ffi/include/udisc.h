#ifndef UDISC_H
#define UDISC_H

/* Generated by cbindgen from the udisc-ffi crate; do not edit by hand. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status code returned by every fallible binding.
 */
typedef enum UdStatus {
  /**
   * The call succeeded.
   */
  UD_STATUS_OK = 0,
  /**
   * A required pointer argument was null.
   */
  UD_STATUS_NULL_POINTER = 1,
  /**
   * An argument was outside its documented range.
   */
  UD_STATUS_INVALID_ARGUMENT = 2,
  /**
   * The input was not a valid problem document.
   */
  UD_STATUS_PARSE_ERROR = 3,
  /**
   * The states or priors failed validation.
   */
  UD_STATUS_INVALID_PROBLEM = 4,
  /**
   * Solving or maximizing failed.
   */
  UD_STATUS_SOLVE_FAILED = 5,
  /**
   * An output buffer was shorter than the data.
   */
  UD_STATUS_BUFFER_TOO_SMALL = 6,
} UdStatus;

/**
 * A validated discrimination instance, reduced to the span of the
 * supports. Create with [`ud_problem_from_json`] or
 * [`ud_problem_from_arrays`]; destroy with [`ud_problem_free`].
 */
typedef struct UdProblem UdProblem;

/**
 * A solved instance: bounds, method, canonical angles, and the
 * measurement lifted back to the input dimension. Destroy with
 * [`ud_report_free`].
 */
typedef struct UdReport UdReport;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message describing the most recent failure on the calling thread; the
 * empty string when none has occurred. The pointer stays valid until the
 * next failing call on the same thread.
 */
const char *ud_last_error_message(void);

/**
 * Parses a problem JSON document (a report document is also accepted and
 * its embedded problem used) and builds the reduced instance. `tol` is
 * the density-matrix validation tolerance; any value at or below zero
 * selects the default `1e-10`.
 *
 * # Safety
 * `json` must point to a nul-terminated string and `out` to writable
 * storage for one pointer. On success `*out` owns the instance.
 */
enum UdStatus ud_problem_from_json(const char *json, double tol, struct UdProblem **out);

/**
 * Builds the reduced instance from two `dim`-sized density matrices in
 * the interleaved layout described at the top of the header and prior
 * probabilities `p0`, `p1`. `tol` behaves as in
 * [`ud_problem_from_json`].
 *
 * # Safety
 * `rho0` and `rho1` must each point to `2*dim*dim` doubles and `out` to
 * writable storage for one pointer. On success `*out` owns the instance.
 */
enum UdStatus ud_problem_from_arrays(size_t dim,
                                     const double *rho0,
                                     const double *rho1,
                                     double p0,
                                     double p1,
                                     double tol,
                                     struct UdProblem **out);

/**
 * Releases a problem handle; null is ignored.
 *
 * # Safety
 * `problem` must be a pointer returned by a constructor and not yet
 * freed.
 */
void ud_problem_free(struct UdProblem *problem);

/**
 * Dimension of the input states; 0 when `problem` is null.
 *
 * # Safety
 * `problem` must be a live handle or null.
 */
size_t ud_problem_dim(const struct UdProblem *problem);

/**
 * Dimension after reduction to the span of the supports; 0 when
 * `problem` is null.
 *
 * # Safety
 * `problem` must be a live handle or null.
 */
size_t ud_problem_reduced_dim(const struct UdProblem *problem);

/**
 * Solves the instance: certified bounds, exactness, canonical angles, and
 * an explicit zero-error measurement.
 *
 * # Safety
 * `problem` must be a live handle and `out` writable storage for one
 * pointer. On success `*out` owns the report.
 */
enum UdStatus ud_problem_solve(const struct UdProblem *problem, struct UdReport **out);

/**
 * Runs the independent numerical maximizer and writes the value it
 * reached to `p_star` and, when `converged` is non-null, whether every
 * stage finished within its budget. `restarts` of 0 selects the default
 * of 20.
 *
 * # Safety
 * `problem` must be a live handle and `p_star` writable; `converged` may
 * be null.
 */
enum UdStatus ud_problem_oracle(const struct UdProblem *problem,
                                uint64_t seed,
                                size_t restarts,
                                double *p_star,
                                bool *converged);

/**
 * Releases a report handle; null is ignored.
 *
 * # Safety
 * `report` must be a pointer returned by [`ud_problem_solve`] and not yet
 * freed.
 */
void ud_report_free(struct UdReport *report);

/**
 * Certified lower bound on the success probability; NaN when `report` is
 * null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
double ud_report_p_lower(const struct UdReport *report);

/**
 * Certified upper bound on the success probability; NaN when `report` is
 * null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
double ud_report_p_upper(const struct UdReport *report);

/**
 * Width of the bound bracket; NaN when `report` is null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
double ud_report_gap(const struct UdReport *report);

/**
 * Fidelity of the two input states; NaN when `report` is null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
double ud_report_fidelity(const struct UdReport *report);

/**
 * True when the bounds coincide and the solution is exact; false when
 * `report` is null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
bool ud_report_exact(const struct UdReport *report);

/**
 * Dimension of the input states; 0 when `report` is null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t ud_report_dim(const struct UdReport *report);

/**
 * Dimension after reduction to the span of the supports; 0 when `report`
 * is null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t ud_report_reduced_dim(const struct UdReport *report);

/**
 * Name of the solution method; null when `report` is null. Free with
 * [`ud_string_free`].
 *
 * # Safety
 * `report` must be a live handle or null.
 */
char *ud_report_method(const struct UdReport *report);

/**
 * Number of canonical angles between the kernels; 0 when `report` is
 * null.
 *
 * # Safety
 * `report` must be a live handle or null.
 */
size_t ud_report_angle_count(const struct UdReport *report);

/**
 * Copies the canonical angles, ascending, into `out`. `len` must be at
 * least [`ud_report_angle_count`].
 *
 * # Safety
 * `report` must be a live handle and `out` must point to `len` writable
 * doubles.
 */
enum UdStatus ud_report_angles(const struct UdReport *report, double *out, size_t len);

/**
 * Copies one measurement operator, lifted to the input dimension, into
 * `out` in the interleaved layout: `element` 0 detects the first state,
 * 1 the second, 2 is the inconclusive outcome. `len` must be at least
 * `2*dim*dim` with `dim` from [`ud_report_dim`].
 *
 * # Safety
 * `report` must be a live handle and `out` must point to `len` writable
 * doubles.
 */
enum UdStatus ud_report_povm_element(const struct UdReport *report,
                                     size_t element,
                                     double *out,
                                     size_t len);

/**
 * Serializes the full report as the same JSON document the CLI's machine
 * format prints; null when `report` is null. Free with
 * [`ud_string_free`].
 *
 * # Safety
 * `report` must be a live handle or null.
 */
char *ud_report_to_json(const struct UdReport *report);

/**
 * Releases a string returned by this library; null is ignored.
 *
 * # Safety
 * `s` must be a pointer returned by [`ud_report_method`] or
 * [`ud_report_to_json`] and not yet freed.
 */
void ud_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* UDISC_H */
