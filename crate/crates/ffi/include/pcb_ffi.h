#ifndef PCB_FFI_H
#define PCB_FFI_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stddef.h>
#include <stdint.h>

typedef enum PcbStatus {
  PCB_STATUS_OK = 0,
  PCB_STATUS_NULL_POINTER = 1,
  PCB_STATUS_INVALID_UTF8 = 2,
  PCB_STATUS_IO = 3,
  PCB_STATUS_PARSE = 4,
  PCB_STATUS_VALIDATION = 5,
  PCB_STATUS_STRUCTURE = 6,
  PCB_STATUS_CONFLICT = 7,
  PCB_STATUS_NUMERIC = 8,
  PCB_STATUS_BUFFER_TOO_SMALL = 9,
  PCB_STATUS_PANIC = 10,
} PcbStatus;

typedef enum PcbCombineRule {
  PCB_COMBINE_RULE_DEMPSTER = 0,
  PCB_COMBINE_RULE_WALLEY = 1,
} PcbCombineRule;

/**
 * A mass function on a finite frame.
 */
typedef struct PcbMass PcbMass;

/**
 * A validated decision problem.
 */
typedef struct PcbProblem PcbProblem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null after a
 * successful call. Valid until the next call into this library.
 */
const char *pcb_last_error_message(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void pcb_string_free(char *s);

/**
 * Parses and validates a problem document.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum PcbStatus pcb_problem_from_json(const char *json, struct PcbProblem **out);

/**
 * # Safety
 * `p` must be null or a handle from [`pcb_problem_from_json`], not yet freed.
 */
void pcb_problem_free(struct PcbProblem *p);

/**
 * Mixed utilities and ranking as JSON. `attitude_c` overrides the problem's
 * attitude unless it is NaN.
 *
 * # Safety
 * `p` must be a live problem handle and `out` a writable pointer.
 */
enum PcbStatus pcb_problem_evaluate_json(const struct PcbProblem *p, double attitude_c, char **out);

/**
 * Every act under every rule as JSON.
 *
 * # Safety
 * `p` must be a live problem handle and `out` a writable pointer.
 */
enum PcbStatus pcb_problem_compare_json(const struct PcbProblem *p, char **out);

/**
 * The problem's mass function as a new handle.
 *
 * # Safety
 * `p` must be a live problem handle and `out` a writable pointer.
 */
enum PcbStatus pcb_problem_mass(const struct PcbProblem *p, struct PcbMass **out);

/**
 * Reads the uncertainty of a problem document; other sections are validated
 * and dropped.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a writable pointer.
 */
enum PcbStatus pcb_mass_from_json(const char *json, struct PcbMass **out);

/**
 * # Safety
 * `m` must be null or a mass handle from this library, not yet freed.
 */
void pcb_mass_free(struct PcbMass *m);

/**
 * Number of outcomes in the frame, or 0 for a null handle.
 *
 * # Safety
 * `m` must be null or a live mass handle.
 */
size_t pcb_mass_frame_size(const struct PcbMass *m);

/**
 * `Bel(A)` for the subset whose bit `i` marks outcome `i`.
 *
 * # Safety
 * `m` must be a live mass handle and `out` a writable pointer.
 */
enum PcbStatus pcb_mass_belief(const struct PcbMass *m, uint64_t mask, double *out);

/**
 * # Safety
 * `m` must be a live mass handle and `out` a writable pointer.
 */
enum PcbStatus pcb_mass_plausibility(const struct PcbMass *m, uint64_t mask, double *out);

/**
 * # Safety
 * `m` must be a live mass handle and `out` a writable pointer.
 */
enum PcbStatus pcb_mass_commonality(const struct PcbMass *m, uint64_t mask, double *out);

/**
 * Combines two mass functions on the same frame into a new handle.
 *
 * # Safety
 * `a` and `b` must be live mass handles and `out` a writable pointer.
 */
enum PcbStatus pcb_mass_combine(const struct PcbMass *a,
                                const struct PcbMass *b,
                                enum PcbCombineRule rule,
                                struct PcbMass **out);

/**
 * Writes the pignistic probabilities of each outcome into `out[0..len]`.
 * `len` must be at least the frame size.
 *
 * # Safety
 * `m` must be a live mass handle and `out` point to `len` writable doubles.
 */
enum PcbStatus pcb_mass_pignistic(const struct PcbMass *m, double *out, size_t len);

/**
 * The mass function as a problem document in the `bpa` form.
 *
 * # Safety
 * `m` must be a live mass handle and `out` a writable pointer.
 */
enum PcbStatus pcb_mass_to_json(const struct PcbMass *m, char **out);

/**
 * Block probabilities and possibilities as a problem document in the `pcb`
 * form. Fails with `Structure` if the mass function is not partially
 * consonant.
 *
 * # Safety
 * `m` must be a live mass handle and `out` a writable pointer.
 */
enum PcbStatus pcb_mass_decompose_json(const struct PcbMass *m, char **out);

/**
 * The parametric t with attitude `c` at the scale value `<lambda, rho>`.
 *
 * # Safety
 * `out` must be a writable pointer.
 */
enum PcbStatus pcb_t_apply(double c, double lambda, double rho, double *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* PCB_FFI_H */
