/* C interface of the jawforce dual-jaw force sensing library. */

#ifndef JAWFORCE_H
#define JAWFORCE_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result of a fallible call.
typedef enum JfStatus {
  JfStatus_Ok = 0,
  // A required pointer argument was null.
  JfStatus_NullPointer = 1,
  // An argument failed validation (non-finite value, bad geometry, ...).
  JfStatus_InvalidArgument = 2,
  // A file could not be read or written.
  JfStatus_IoError = 3,
  // A file exists but does not match its schema.
  JfStatus_ParseError = 4,
  // The calibration data does not determine the force map.
  JfStatus_RankDeficient = 5,
  // The chain and the supplied joint state do not match.
  JfStatus_ChainMismatch = 6,
} JfStatus;

// Opaque handle to a parsed kinematic chain.
typedef struct JfChain JfChain;

// Opaque handle to a calibrated sensitivity matrix.
typedef struct JfSensitivity JfSensitivity;

// Physical constants of one jaw sensor; `jf_geometry_default` returns the
// as-built values. Lengths in mm, gain in N/V, ranges in N.
typedef struct JfGeometry {
  double h_mm;
  double d_mm;
  double l_mm;
  double w_mm;
  double c_n_per_v;
  double lateral_range_n;
  double axial_range_n;
} JfGeometry;

// Reported joint values of one dual-jaw sample.
typedef struct JfJointState {
  // theta1..theta7 (rad); theta6/theta7 use mirrored positive senses.
  double thetas[7];
  // Software-reported jaw opening (rad).
  double theta_jaw_prime;
} JfJointState;

// Fixed parameters of the resolution step.
typedef struct JfResolveSettings {
  // Minimum jaw opening during grasp (rad).
  double theta_min_rad;
  // Fixed sensor-mount rotations (rad).
  double mount_right_rad;
  double mount_left_rad;
} JfResolveSettings;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message describing the most recent failure on the calling thread.
//
// The pointer stays valid until this thread's next jawforce call.
const char *jf_last_error_message(void);

// Library version as a static string.
const char *jf_version(void);

// As-built sensor constants.
struct JfGeometry jf_geometry_default(void);

// Loads a sensitivity matrix from its plain-text exchange file.
//
// # Safety
// `path` must point to a NUL-terminated string and `out` to a writable
// pointer slot. On success `*out` owns the handle; release it with
// [`jf_sensitivity_free`].
enum JfStatus jf_sensitivity_load(const char *path,
                                  struct JfGeometry geom,
                                  struct JfSensitivity **out);

// Builds the ideal-model matrix (zero offsets) for a geometry.
//
// # Safety
// `out` must point to a writable pointer slot; see [`jf_sensitivity_load`].
enum JfStatus jf_sensitivity_ideal(struct JfGeometry geom, struct JfSensitivity **out);

// Fits a sensitivity matrix from raw calibration arrays.
//
// `voltages` is `n_samples * 8` values (sample-major), `forces` is
// `n_samples * 3` reference forces (x, y, z per sample).
//
// # Safety
// The arrays must hold at least the stated number of elements; `out` must
// point to a writable pointer slot; see [`jf_sensitivity_load`].
enum JfStatus jf_sensitivity_fit(const double *voltages,
                                 const double *forces,
                                 uintptr_t n_samples,
                                 struct JfGeometry geom,
                                 struct JfSensitivity **out);

// Writes a sensitivity matrix to its plain-text exchange format.
//
// # Safety
// `sens` must be a live handle from this library; `path` a NUL-terminated
// string.
enum JfStatus jf_sensitivity_save(const struct JfSensitivity *sens, const char *path);

// Applies the affine map: eight voltages in, three force components out.
//
// # Safety
// `sens` must be a live handle; `voltages` holds 8 values and `force_out`
// has room for 3.
enum JfStatus jf_sensitivity_apply(const struct JfSensitivity *sens,
                                   const double *voltages,
                                   double *force_out);

// Releases a sensitivity handle. Null is a no-op.
//
// # Safety
// `sens` must have come from this library and not been freed before.
void jf_sensitivity_free(struct JfSensitivity *sens);

// Parses a chain configuration file.
//
// # Safety
// As [`jf_sensitivity_load`]; release with [`jf_chain_free`].
enum JfStatus jf_chain_load(const char *path, struct JfChain **out);

// Builds the built-in simplified chain.
//
// # Safety
// `out` must point to a writable pointer slot; release with
// [`jf_chain_free`].
enum JfStatus jf_chain_default(struct JfChain **out);

// Releases a chain handle. Null is a no-op.
//
// # Safety
// `chain` must have come from this library and not been freed before.
void jf_chain_free(struct JfChain *chain);

// Clamps the software-reported jaw angle from below (radians).
double jf_corrected_jaw_angle(double theta_prime_rad, double theta_min_rad);

// Resolves one dual-jaw sample into a base-frame force (3 components out).
//
// # Safety
// All handles must be live; `joints` must be readable; `v_left`/`v_right`
// hold 8 values each and `force_out` has room for 3.
enum JfStatus jf_resolve_row(const struct JfChain *chain,
                             const struct JfSensitivity *sens_left,
                             const struct JfSensitivity *sens_right,
                             const struct JfJointState *joints,
                             struct JfResolveSettings settings,
                             const double *v_left,
                             const double *v_right,
                             double *force_out);

// Computes the grasp force of one dual-jaw sample.
//
// # Safety
// As [`jf_resolve_row`]; `grip_out` must be writable.
enum JfStatus jf_grip_row(const struct JfChain *chain,
                          const struct JfSensitivity *sens_left,
                          const struct JfSensitivity *sens_right,
                          const struct JfJointState *joints,
                          struct JfResolveSettings settings,
                          const double *v_left,
                          const double *v_right,
                          double *grip_out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* JAWFORCE_H */
