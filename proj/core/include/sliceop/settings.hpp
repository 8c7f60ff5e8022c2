#ifndef SLICEOP_SETTINGS_HPP
#define SLICEOP_SETTINGS_HPP

namespace sliceop {

/// Numerical tolerances used across the library. Every hard-coded threshold
/// lives here so a caller can tighten or relax the whole stack at once.
struct Settings {
  /// Stop refining the bootstrap discretization once recurrence
  /// coefficients move less than this (absolute, scaled by interval width).
  double bootstrap_tol = 1e-13;
  /// Maximum number of discretization doublings before giving up.
  int bootstrap_max_refine = 6;
  /// Orthonormality audit after a bootstrap: max |G - I| allowed.
  double bootstrap_gram_tol = 1e-11;
  /// |chi| below this during endpoint lifting is treated as a breakdown.
  double lift_chi_guard = 1e-14;
  /// Validation threshold for block left inverses: max |D^T A - I|.
  double left_inverse_tol = 1e-13;
  /// Relative residual required from linear solves (after refinement).
  double solve_tol = 1e-11;
  /// Points with |y| exceeding the slice height by up to this are clamped
  /// onto the boundary; anything further out is a domain error.
  double boundary_clamp = 1e-12;
  /// Audit on Gauss rules: |sum(weights) - omega| <= tol * omega.
  double quad_weight_sum_tol = 1e-13;
  /// Outer (sub-)diagonals of assembled operators whose entries all stay
  /// below this times max|entry| are dropped from storage.
  double structural_trim = 1e-13;
};

}  // namespace sliceop

#endif
